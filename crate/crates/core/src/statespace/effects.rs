//! The full dual effect set of a polytope and covector construction from
//! prescribed vertex values.
//!
//! Effects are parametrized by their values on the reference vertices of the
//! span, so they live in the dual of the span and vanish on its orthogonal
//! complement.

use crate::geometry::matrix::{dot, lex_cmp, Matrix};
use crate::geometry::Field;

use super::{Effect, SpaceError, StateSpace};

/// Default cap on the number of tight-constraint systems examined by
/// [`extremal_effects`].
pub const DEFAULT_EFFECT_CAP: u64 = 1 << 22;

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    r
}

/// The unique covector in the span dual with `e(v_i) = values[i]`, if those
/// values are consistent with the linear dependencies among the vertices.
pub fn covector_from_values<F: Field>(space: &StateSpace<F>, values: &[F]) -> Option<Vec<F>> {
    assert_eq!(values.len(), space.vertex_count());
    let frame = space.frame();
    let z: Vec<F> = frame.reference.iter().map(|&i| values[i].clone()).collect();
    let ok = frame.coords.iter().zip(values).all(|(c, v)| dot(c, &z) == *v);
    ok.then(|| frame.left_inverse.covec_mul(&z))
}

/// Vertices of the effect polytope `{e : 0 ≤ e(v) ≤ 1 for every vertex v}`,
/// ordered lexicographically by their vertex values. Always contains `0`
/// and `u`.
pub fn extremal_effects<F: Field>(space: &StateSpace<F>, cap: u64) -> Result<Vec<Effect<'_, F>>, SpaceError> {
    let frame = space.frame();
    let n = space.vertex_count();
    let r = frame.rank();
    let systems = binomial(n, r).saturating_mul(1u64 << r.min(63));
    if systems > cap {
        return Err(crate::geometry::GeometryError::SizeGuard { needed: systems, cap }.into());
    }
    let mut found: Vec<Vec<F>> = Vec::new();
    let mut subset: Vec<usize> = (0..r).collect();
    loop {
        let rows: Vec<Vec<F>> = subset.iter().map(|&i| frame.coords[i].clone()).collect();
        let m = Matrix::from_rows(&rows);
        if let Some(inv) = m.inverse() {
            for bits in 0u64..(1 << r) {
                let rhs: Vec<F> = (0..r).map(|k| if bits >> k & 1 == 1 { F::one() } else { F::zero() }).collect();
                let z = inv.mul_vec(&rhs);
                let values: Vec<F> = frame.coords.iter().map(|c| dot(c, &z)).collect();
                let feasible = values
                    .iter()
                    .all(|x| !x.is_negative() && !(x.clone() - &F::one()).is_positive());
                if feasible && !found.contains(&values) {
                    found.push(values);
                }
            }
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    found.sort_by(|a, b| lex_cmp(a, b));
    Ok(found
        .into_iter()
        .map(|values| {
            let covector = covector_from_values(space, &values).expect("values come from a covector");
            Effect::new(space, covector).expect("values lie in [0, 1]")
        })
        .collect())
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
