//! Canonical rational embeddings of the standard example spaces.
//!
//! Simplices list the standard basis in order (`e_0` first); every other
//! builder lists its vertices lexicographically.

use crate::geometry::matrix::{lex_cmp, unit_vec};
use crate::geometry::Field;

use super::{SpaceError, StateSpace, Structure};

fn build<F: Field>(mut vertices: Vec<Vec<F>>, unit: Vec<F>, label: String, sort: bool) -> StateSpace<F> {
    if sort {
        vertices.sort_by(|a, b| lex_cmp(a, b));
    }
    StateSpace::unchecked(vertices, unit, label, Structure::Plain)
}

/// The `n`-simplex `Δ_n`: `n + 1` standard basis vectors with `u = (1, …, 1)`.
pub fn simplex<F: Field>(n: usize) -> StateSpace<F> {
    let d = n + 1;
    let vertices = (0..d).map(|i| unit_vec(d, i)).collect();
    build(vertices, vec![F::one(); d], format!("simplex({n})"), false)
}

/// The one-state space `p`.
pub fn point<F: Field>() -> StateSpace<F> {
    simplex(0).relabeled("point")
}

/// Square state space of a single box-world bit: `(±1, ±1, 1)`.
pub fn gbit<F: Field>() -> StateSpace<F> {
    cube(2).relabeled("gbit")
}

/// Hypercube `[-1, 1]^n` lifted to the plane `x_{n+1} = 1`.
pub fn cube<F: Field>(n: usize) -> StateSpace<F> {
    assert!(n >= 1, "cube needs n >= 1");
    let mut vertices = Vec::with_capacity(1 << n);
    for bits in 0u64..(1 << n) {
        let mut v: Vec<F> = (0..n)
            .map(|i| if bits >> i & 1 == 1 { F::one() } else { -F::one() })
            .collect();
        v.push(F::one());
        vertices.push(v);
    }
    build(vertices, unit_vec(n + 1, n), format!("cube({n})"), true)
}

/// Cross-polytope (convex hull of `±e_i`) lifted to `x_{n+1} = 1`.
pub fn cross<F: Field>(n: usize) -> StateSpace<F> {
    assert!(n >= 1, "cross needs n >= 1");
    let mut vertices = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [F::one(), -F::one()] {
            let mut v = vec![F::zero(); n + 1];
            v[i] = s;
            v[n] = F::one();
            vertices.push(v);
        }
    }
    build(vertices, unit_vec(n + 1, n), format!("cross({n})"), true)
}

/// Square with a roof: `(±1, ±1, 1)` plus the apex `(0, 2, 1)`. Its apex is
/// fixed by every symmetry, so it is not transitive.
pub fn house<F: Field>() -> StateSpace<F> {
    let mut vertices = gbit::<F>().vertices().to_vec();
    vertices.push(vec![F::zero(), F::from_i64(2), F::one()]);
    build(vertices, unit_vec(3, 2), "house".into(), true)
}

/// Regular `n`-gon. Exact mode supports the affinely regular rational
/// triangle, square and hexagon; other `n` need float mode.
pub fn polygon<F: Field>(n: usize) -> Result<StateSpace<F>, SpaceError> {
    if n < 3 {
        return Err(SpaceError::Unsupported(format!("polygon needs n >= 3, got {n}")));
    }
    let points: Vec<(F, F)> = if F::MODE == "exact" {
        let ints: &[(i64, i64)] = match n {
            3 => &[(1, 0), (0, 1), (-1, -1)],
            4 => &[(1, 0), (0, 1), (-1, 0), (0, -1)],
            6 => &[(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
            _ => {
                return Err(SpaceError::Unsupported(format!(
                    "polygon({n}) has no rational affinely regular embedding; use float mode"
                )))
            }
        };
        ints.iter().map(|&(x, y)| (F::from_i64(x), F::from_i64(y))).collect()
    } else {
        (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                (F::from_f64_lossy(t.cos()), F::from_f64_lossy(t.sin()))
            })
            .collect()
    };
    let vertices = points.into_iter().map(|(x, y)| vec![x, y, F::one()]).collect();
    Ok(build(vertices, unit_vec(3, 2), format!("polygon({n})"), true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Float64, Rational};

    fn revalidate(s: &StateSpace<Rational>) {
        StateSpace::new(s.vertices().to_vec(), s.unit_effect().to_vec(), s.label()).unwrap();
    }

    #[test]
    fn builder_shapes() {
        let p = point::<Rational>();
        assert_eq!(p.vertex_count(), 1);
        assert_eq!(simplex::<Rational>(0).vertex_count(), 1);
        let d2 = simplex::<Rational>(2);
        assert_eq!((d2.vertex_count(), d2.ambient_dim()), (3, 3));
        let g = gbit::<Rational>();
        assert_eq!((g.vertex_count(), g.affine_dim()), (4, 2));
        assert_eq!(cube::<Rational>(3).vertex_count(), 8);
        assert_eq!(cross::<Rational>(3).vertex_count(), 6);
        assert_eq!(house::<Rational>().vertex_count(), 5);
        for s in [p, d2, g, cube(3), cross(2), house(), polygon(6).unwrap()] {
            revalidate(&s);
        }
    }

    #[test]
    fn pentagon_needs_float_mode() {
        assert!(polygon::<Rational>(5).is_err());
        let p = polygon::<Float64>(5).unwrap();
        assert_eq!(p.vertex_count(), 5);
        StateSpace::new(p.vertices().to_vec(), p.unit_effect().to_vec(), "pentagon").unwrap();
    }
}
