//! Convex-hull membership and supporting-hyperplane tests.

use super::field::Field;
use super::lp::{solve_standard, LinearProgram, LpOutcome, Relation, StandardOutcome};
use super::matrix::{dot, zero_vec};
use super::GeometryError;

/// Outcome of a hull-membership query, with a certificate either way.
#[derive(Debug, Clone, PartialEq)]
pub enum HullMembership<F> {
    /// Convex weights `w` with `Σ w = 1`, `w ≥ 0` and `Σ w_i g_i = p`.
    Member { weights: Vec<F> },
    /// Covector `h` and bound `max` with `h·g ≤ max` for every generator and
    /// `h·p > max`.
    Separated { covector: Vec<F>, max: F },
}

impl<F: Field> HullMembership<F> {
    pub fn is_member(&self) -> bool {
        matches!(self, HullMembership::Member { .. })
    }

    /// Re-checks the certificate against the inputs.
    pub fn verify(&self, p: &[F], gens: &[Vec<F>]) -> bool {
        match self {
            HullMembership::Member { weights } => {
                if weights.len() != gens.len() || weights.iter().any(F::is_negative) {
                    return false;
                }
                let mut total = F::zero();
                let mut point = zero_vec::<F>(p.len());
                for (w, g) in weights.iter().zip(gens) {
                    total += w;
                    super::matrix::axpy(&mut point, w, g);
                }
                total.is_one() && point == p
            }
            HullMembership::Separated { covector, max } => {
                covector.len() == p.len()
                    && gens.iter().all(|g| dot(covector, g).compare(max).is_le())
                    && dot(covector, p).compare(max).is_gt()
            }
        }
    }
}

fn check_dims<F: Field>(p: &[F], gens: &[Vec<F>]) -> Result<(), GeometryError> {
    if let Some(g) = gens.iter().find(|g| g.len() != p.len()) {
        return Err(GeometryError::DimensionMismatch { expected: p.len(), found: g.len() });
    }
    Ok(())
}

/// Decides `p ∈ conv(gens)` by exact linear programming.
pub fn in_hull<F: Field>(p: &[F], gens: &[Vec<F>]) -> Result<HullMembership<F>, GeometryError> {
    if gens.is_empty() {
        return Err(GeometryError::EmptyGenerators);
    }
    check_dims(p, gens)?;
    let d = p.len();
    let k = gens.len();
    let mut a: Vec<Vec<F>> = (0..d).map(|i| gens.iter().map(|g| g[i].clone()).collect()).collect();
    a.push(vec![F::one(); k]);
    let mut b = p.to_vec();
    b.push(F::one());
    match solve_standard(&a, &b, &zero_vec(k)) {
        StandardOutcome::Optimal { x, .. } => Ok(HullMembership::Member { weights: x }),
        StandardOutcome::Infeasible { farkas } => {
            let covector = farkas[..d].iter().map(|y| -y.clone()).collect();
            Ok(HullMembership::Separated { covector, max: farkas[d].clone() })
        }
        StandardOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

/// A face test result. For nonempty faces `support` holds `(h, t)` with
/// `h·v = t` on the subset and `h·v < t` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceVerdict<F> {
    pub is_face: bool,
    pub support: Option<(Vec<F>, F)>,
}

/// Decides whether the vertex subset is exactly the set where some linear
/// functional attains its maximum over `gens`.
pub fn is_face<F: Field>(gens: &[Vec<F>], subset: &[usize]) -> Result<FaceVerdict<F>, GeometryError> {
    let n = gens.len();
    if let Some(&i) = subset.iter().find(|&&i| i >= n) {
        return Err(GeometryError::IndexOutOfRange { index: i, len: n });
    }
    if subset.is_empty() {
        return Ok(FaceVerdict { is_face: true, support: None });
    }
    let d = gens[0].len();
    check_dims(&gens[0], gens)?;
    let mut inside = vec![false; n];
    for &i in subset {
        inside[i] = true;
    }
    if inside.iter().all(|&x| x) {
        return Ok(FaceVerdict { is_face: true, support: Some((zero_vec(d), F::zero())) });
    }
    // Variables (h_1..h_d, t), all free.
    let mut lp = LinearProgram::new(vec![true; d + 1]);
    for (i, g) in gens.iter().enumerate() {
        let mut row = g.clone();
        row.push(-F::one());
        if inside[i] {
            lp.constraint(row, Relation::Eq, F::zero());
        } else {
            lp.constraint(row, Relation::Le, -F::one());
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { mut x, .. } => {
            let t = x.pop().expect("t variable");
            Ok(FaceVerdict { is_face: true, support: Some((x, t)) })
        }
        LpOutcome::Infeasible => Ok(FaceVerdict { is_face: false, support: None }),
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::field::{q, Rational};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| q(x, 1)).collect()
    }

    fn square() -> Vec<Vec<Rational>> {
        vec![v(&[-1, -1, 1]), v(&[-1, 1, 1]), v(&[1, -1, 1]), v(&[1, 1, 1])]
    }

    #[test]
    fn barycenter_of_triangle() {
        let gens = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let p = vec![q(1, 3), q(1, 3), q(1, 3)];
        let m = in_hull(&p, &gens).unwrap();
        assert_eq!(m, HullMembership::Member { weights: vec![q(1, 3), q(1, 3), q(1, 3)] });
        assert!(m.verify(&p, &gens));
    }

    #[test]
    fn point_outside_segment() {
        let gens = vec![v(&[0, 0]), v(&[1, 0])];
        let p = v(&[2, 0]);
        let m = in_hull(&p, &gens).unwrap();
        assert!(!m.is_member());
        assert!(m.verify(&p, &gens));
    }

    #[test]
    fn gbit_center_is_inside() {
        let m = in_hull(&v(&[0, 0, 1]), &square()).unwrap();
        assert!(m.is_member());
        assert!(m.verify(&v(&[0, 0, 1]), &square()));
    }

    #[test]
    fn empty_generators_rejected() {
        assert_eq!(in_hull::<Rational>(&v(&[1]), &[]), Err(GeometryError::EmptyGenerators));
    }

    #[test]
    fn square_faces() {
        let sq = square();
        for i in 0..4 {
            assert!(is_face(&sq, &[i]).unwrap().is_face);
        }
        // (-1,-1) and (-1,1) share the edge x = -1; (-1,-1) and (1,1) are opposite.
        let edge = is_face(&sq, &[0, 1]).unwrap();
        assert!(edge.is_face);
        let (h, t) = edge.support.unwrap();
        assert_eq!(dot(&h, &sq[0]), t);
        assert!(dot(&h, &sq[3]) < t);
        assert!(!is_face(&sq, &[0, 3]).unwrap().is_face);
        assert!(!is_face(&sq, &[0, 1, 2]).unwrap().is_face);
        assert!(is_face(&sq, &[]).unwrap().is_face);
        assert!(is_face(&sq, &[0, 1, 2, 3]).unwrap().is_face);
        assert!(is_face(&sq, &[7]).is_err());
    }
}
