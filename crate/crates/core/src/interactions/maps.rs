//! Named bipartite maps used in scenarios and tests.

use crate::decompose::irreducible_components;
use crate::geometry::{Field, Matrix};
use crate::statespace::StateSpace;

use super::InteractionError;

pub fn identity_map<F: Field>(space: &StateSpace<F>) -> Matrix<F> {
    Matrix::identity(space.ambient_dim())
}

/// Exchanges the two factors of `R^d ⊗ R^d`.
pub fn swap_map<F: Field>(d: usize) -> Matrix<F> {
    let mut m = Matrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m.set(j * d + i, i * d + j, F::one());
        }
    }
    m
}

/// `(a, b) ↦ (a, a ⊕ b)` on two classical bits.
pub fn cnot<F: Field>() -> Matrix<F> {
    let mut m = Matrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            m.set(a * 2 + (a ^ b), a * 2 + b, F::one());
        }
    }
    m
}

pub fn product_map<F: Field>(x: &Matrix<F>, y: &Matrix<F>) -> Matrix<F> {
    x.kron(y)
}

/// `Σ_k P_k ⊗ M_k`, where `P_k` projects onto the span of the `k`-th
/// irreducible component of `control` along the others.
pub fn controlled_map<F: Field>(
    control: &StateSpace<F>,
    target: &StateSpace<F>,
    maps: &[Matrix<F>],
) -> Result<Matrix<F>, InteractionError> {
    let dec = irreducible_components(control);
    if maps.len() != dec.len() {
        return Err(InteractionError::ComponentCount { expected: dec.len(), found: maps.len() });
    }
    let dt = target.ambient_dim();
    if let Some(m) = maps.iter().find(|m| m.rows() != dt || m.cols() != dt) {
        return Err(InteractionError::DimensionMismatch {
            expected: format!("{dt}x{dt}"),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let dc = control.ambient_dim();
    let columns: Vec<Vec<F>> = dec.components().iter().flat_map(|c| (0..c.rank()).map(|k| c.basis.column(k))).collect();
    let all = Matrix::from_columns(dc, &columns);
    let coords = all.left_inverse().expect("component spans are independent");
    let mut total = Matrix::identity(dc).sub(&all.mul(&coords)).kron(&Matrix::identity(dt));
    let mut offset = 0;
    for (c, m) in dec.components().iter().zip(maps) {
        let rows: Vec<Vec<F>> = (offset..offset + c.rank()).map(|r| coords.row(r).to_vec()).collect();
        offset += c.rank();
        let projector = c.basis.mul(&Matrix::from_rows(&rows));
        total = total.add(&projector.kron(m));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rational;
    use crate::statespace::{direct_sum, gbit, min_tensor, point, simplex};

    #[test]
    fn cnot_matches_controlled_flip() {
        let d1 = simplex::<Rational>(1);
        let flip = Matrix::from_rows(&[
            vec![Rational::from_integer(0.into()), Rational::from_integer(1.into())],
            vec![Rational::from_integer(1.into()), Rational::from_integer(0.into())],
        ]);
        let c = controlled_map(&d1, &d1, &[Matrix::identity(2), flip]).unwrap();
        assert_eq!(c, cnot());
    }

    #[test]
    fn swap_is_an_involution() {
        let s = swap_map::<Rational>(3);
        assert!(s.mul(&s).is_identity());
        let g = gbit::<Rational>();
        let gg = min_tensor(&g, &g);
        assert!(crate::dynamics::is_reversible_map(&gg, &s));
    }

    #[test]
    fn controlled_map_checks_shapes() {
        let pp = direct_sum(&point::<Rational>(), &point());
        let g = gbit::<Rational>();
        assert!(matches!(
            controlled_map(&pp, &g, &[Matrix::identity(3)]),
            Err(InteractionError::ComponentCount { expected: 2, found: 1 })
        ));
        assert!(matches!(
            controlled_map(&pp, &g, &[Matrix::identity(3), Matrix::identity(2)]),
            Err(InteractionError::DimensionMismatch { .. })
        ));
    }
}
