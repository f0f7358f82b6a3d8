//! Seeded random spaces and coordinate scrambles for property suites.

use rand::Rng;

use crate::geometry::matrix::{dot, scale, unit_vec};
use crate::geometry::{Field, Matrix};

use super::{direct_sum, SpaceError, StateSpace};

/// A random invertible map `L` with `u ∘ L = u`, returned with its inverse.
pub fn random_u_preserving_map<F: Field, R: Rng + ?Sized>(unit: &[F], rng: &mut R) -> (Matrix<F>, Matrix<F>) {
    let d = unit.len();
    let k = unit.iter().position(|x| !x.is_zero()).expect("unit effect is nonzero");
    let w: Vec<F> = unit_vec::<F>(d, k).into_iter().map(|x| x / &unit[k]).collect();
    // (I - w uᵀ) kills u from the left, so L = I + (I - w uᵀ) R keeps u ∘ L = u.
    let outer = Matrix::from_rows(&(0..d).map(|i| scale(unit, &w[i])).collect::<Vec<_>>());
    let kill = Matrix::identity(d).sub(&outer);
    loop {
        let mut r = Matrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                if rng.gen_bool(0.6) {
                    let num = rng.gen_range(-3i64..=3);
                    let den = rng.gen_range(1i64..=2);
                    r.set(i, j, F::from_i64(num) / &F::from_i64(den));
                }
            }
        }
        let l = Matrix::identity(d).add(&kill.mul(&r));
        if let Some(inv) = l.inverse() {
            debug_assert_eq!(l.covec_mul(unit), unit);
            return (l, inv);
        }
    }
}

/// Applies a random `u`-preserving map to every vertex. Returns the image
/// space and the map.
pub fn scramble<F: Field, R: Rng + ?Sized>(space: &StateSpace<F>, rng: &mut R) -> Result<(StateSpace<F>, Matrix<F>), SpaceError> {
    let (l, _) = random_u_preserving_map(space.unit_effect(), rng);
    let image = space.transformed(&l, space.unit_effect().to_vec(), format!("scramble({})", space.label()))?;
    Ok((image, l))
}

fn random_piece<F: Field, R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, dim: usize) -> Result<StateSpace<F>, SpaceError> {
    let count = rng.gen_range(1..=max_vertices.max(1));
    let mut points: Vec<Vec<F>> = Vec::new();
    while points.len() < count {
        let mut p: Vec<F> = (0..dim - 1).map(|_| F::from_i64(rng.gen_range(-2i64..=2))).collect();
        p.push(F::one());
        if !points.contains(&p) {
            points.push(p);
        }
        if dim == 1 {
            break;
        }
    }
    let unit = unit_vec(dim, dim - 1);
    Ok(StateSpace::new_reduced(points, unit, "piece")?.0)
}

/// A seeded random polytope with at most `max_vertices` vertices and ambient
/// dimension at most `max_dim`, built as a direct sum of one to three random
/// pieces and then scrambled, so that decompositions are not visible in the
/// coordinates.
pub fn random_polytope<F: Field, R: Rng + ?Sized>(
    rng: &mut R,
    max_vertices: usize,
    max_dim: usize,
) -> Result<StateSpace<F>, SpaceError> {
    assert!(max_vertices >= 1 && max_dim >= 1);
    let parts = rng.gen_range(1..=3usize).min(max_dim).min(max_vertices);
    let mut remaining_dim = max_dim;
    let mut remaining_vertices = max_vertices;
    let mut acc: Option<StateSpace<F>> = None;
    for p in 0..parts {
        let left = parts - p - 1;
        let dim = rng.gen_range(1..=(remaining_dim - left).min(3));
        let piece = random_piece(rng, (remaining_vertices - left).min(5), dim)?;
        remaining_dim -= dim;
        remaining_vertices -= piece.vertex_count();
        acc = Some(match acc {
            None => piece,
            Some(s) => direct_sum(&s, &piece),
        });
    }
    let space = acc.expect("at least one part");
    let (l, _) = random_u_preserving_map(space.unit_effect(), rng);
    let vertices: Vec<Vec<F>> = space.vertices().iter().map(|v| l.mul_vec(v)).collect();
    debug_assert!(vertices.iter().all(|v| dot(space.unit_effect(), v).is_one()));
    StateSpace::new(vertices, space.unit_effect().to_vec(), "random")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rational;
    use crate::statespace::gbit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scramble_preserves_unit_and_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = gbit::<Rational>();
        let (s, l) = scramble(&g, &mut rng).unwrap();
        assert_eq!(s.vertex_count(), 4);
        assert_eq!(l.covec_mul(g.unit_effect()), g.unit_effect());
    }

    #[test]
    fn random_polytopes_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let s: StateSpace<Rational> = random_polytope(&mut rng, 8, 6).unwrap();
            assert!(s.vertex_count() <= 8);
            assert!(s.ambient_dim() <= 6);
        }
    }
}
