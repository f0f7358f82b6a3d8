//! Fixtures shared by the benchmarks.

use polygpt::statespace::{gbit, min_tensor, scramble, simplex};
use polygpt::StateSpace;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `Δ2 ⊠ gbit` in scrambled coordinates.
pub fn scrambled_trit_of_gbits(seed: u64) -> StateSpace {
    let s = min_tensor(&simplex(2), &gbit());
    scramble(&s, &mut ChaCha8Rng::seed_from_u64(seed)).expect("scramble").0
}
