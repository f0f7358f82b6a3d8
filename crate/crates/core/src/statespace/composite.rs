//! Direct sums, minimal tensor products and the bipartite state queries that
//! go with them.
//!
//! Vertex order of a composite is structural: `A ⊕ B` lists the vertices of
//! `A` then those of `B`; `A ⊠ B` lists `a_i ⊗ b_j` at index
//! `i * |V_B| + j`.

use std::sync::Arc;

use crate::geometry::matrix::kron;
use crate::geometry::{in_hull, Field, GeometryError, HullMembership};

use super::{SpaceError, State, StateSpace, Structure};

/// `A ⊕ B`: block-embedded vertices, `u = (u_A | u_B)`.
pub fn direct_sum<F: Field>(a: &StateSpace<F>, b: &StateSpace<F>) -> StateSpace<F> {
    let (da, db) = (a.ambient_dim(), b.ambient_dim());
    let mut vertices = Vec::with_capacity(a.vertex_count() + b.vertex_count());
    for v in a.vertices() {
        let mut w = v.clone();
        w.extend(std::iter::repeat_n(F::zero(), db));
        vertices.push(w);
    }
    for v in b.vertices() {
        let mut w = vec![F::zero(); da];
        w.extend(v.iter().cloned());
        vertices.push(w);
    }
    let mut unit = a.unit_effect().to_vec();
    unit.extend(b.unit_effect().iter().cloned());
    // Vertices of valid summands stay extreme and distinct: they live in
    // complementary subspaces and `u` separates them from the origin.
    StateSpace::unchecked(
        vertices,
        unit,
        format!("dsum({}, {})", a.label(), b.label()),
        Structure::Sum(Arc::new(a.clone()), Arc::new(b.clone())),
    )
}

/// `A ⊠ B`: the convex hull of all products `a ⊗ b`, with `u = u_A ⊗ u_B`.
/// The factors are recorded on the result.
pub fn min_tensor<F: Field>(a: &StateSpace<F>, b: &StateSpace<F>) -> StateSpace<F> {
    let mut vertices = Vec::with_capacity(a.vertex_count() * b.vertex_count());
    for va in a.vertices() {
        for vb in b.vertices() {
            vertices.push(kron(va, vb));
        }
    }
    StateSpace::unchecked(
        vertices,
        kron(a.unit_effect(), b.unit_effect()),
        format!("product({}, {})", a.label(), b.label()),
        Structure::Tensor(Arc::new(a.clone()), Arc::new(b.clone())),
    )
}

impl<F: Field> StateSpace<F> {
    /// Composite vertex index of `a_i ⊗ b_j`. Panics unless this is a tensor
    /// product.
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        let (_, b) = self.tensor_factors().expect("not a tensor product");
        i * b.vertex_count() + j
    }

    /// Inverse of [`StateSpace::pair_index`].
    pub fn pair_of(&self, k: usize) -> (usize, usize) {
        let (_, b) = self.tensor_factors().expect("not a tensor product");
        (k / b.vertex_count(), k % b.vertex_count())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

fn factors_of<F: Field>(space: &StateSpace<F>) -> Result<(&StateSpace<F>, &StateSpace<F>), SpaceError> {
    space
        .tensor_factors()
        .ok_or_else(|| SpaceError::NotComposite(space.label().to_string()))
}

/// Applies the other factor's unit effect to a vector in `d_A · d_B`
/// coordinates.
pub fn partial_discard<F: Field>(coords: &[F], a: &StateSpace<F>, b: &StateSpace<F>, keep: Side) -> Vec<F> {
    let (da, db) = (a.ambient_dim(), b.ambient_dim());
    assert_eq!(coords.len(), da * db);
    match keep {
        Side::A => (0..da)
            .map(|i| {
                let mut s = F::zero();
                for (j, u) in b.unit_effect().iter().enumerate() {
                    let x = &coords[i * db + j];
                    if !u.is_zero() && !x.is_zero() {
                        s += &(x.clone() * u);
                    }
                }
                s
            })
            .collect(),
        Side::B => (0..db)
            .map(|j| {
                let mut s = F::zero();
                for (i, u) in a.unit_effect().iter().enumerate() {
                    let x = &coords[i * db + j];
                    if !u.is_zero() && !x.is_zero() {
                        s += &(x.clone() * u);
                    }
                }
                s
            })
            .collect(),
    }
}

/// Reduced state on one side of a state of `A ⊠ B`.
pub fn marginal<'s, F: Field>(state: &State<'s, F>, side: Side) -> Result<State<'s, F>, SpaceError> {
    let (a, b) = factors_of(state.space())?;
    let coords = partial_discard(state.coords(), a, b, side);
    let space = match side {
        Side::A => a,
        Side::B => b,
    };
    Ok(State { space, coords })
}

/// Marginal states of a product state.
pub type StatePair<'s, F> = (State<'s, F>, State<'s, F>);

/// Splits a state into `(marginal_A, marginal_B)` if it equals their tensor
/// product exactly.
pub fn product_decompose<'s, F: Field>(state: &State<'s, F>) -> Result<Option<StatePair<'s, F>>, SpaceError> {
    let ma = marginal(state, Side::A)?;
    let mb = marginal(state, Side::B)?;
    if kron(ma.coords(), mb.coords()) == state.coords() {
        Ok(Some((ma, mb)))
    } else {
        Ok(None)
    }
}

/// Entanglement verdict with its hull-membership certificate against the
/// product vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementVerdict<F> {
    pub entangled: bool,
    pub certificate: HullMembership<F>,
}

/// A normalized vector in the ambient of `A ⊗ B` is entangled iff it is not a
/// mixture of products of pure states.
pub fn is_entangled<F: Field>(
    s: &[F],
    a: &StateSpace<F>,
    b: &StateSpace<F>,
) -> Result<EntanglementVerdict<F>, SpaceError> {
    let d = a.ambient_dim() * b.ambient_dim();
    if s.len() != d {
        return Err(GeometryError::DimensionMismatch { expected: d, found: s.len() }.into());
    }
    let unit = kron(a.unit_effect(), b.unit_effect());
    if !crate::geometry::matrix::dot(&unit, s).is_one() {
        return Err(SpaceError::NotAState);
    }
    let products: Vec<Vec<F>> = a
        .vertices()
        .iter()
        .flat_map(|va| b.vertices().iter().map(move |vb| kron(va, vb)))
        .collect();
    let certificate = in_hull(s, &products)?;
    Ok(EntanglementVerdict { entangled: !certificate.is_member(), certificate })
}

/// Coordinate permutation taking the ambient of `A ⊠ (B ⊕ C)` to that of
/// `(A ⊠ B) ⊕ (A ⊠ C)`: entry `k` is the target index of source coordinate
/// `k`.
pub fn distributivity_reshuffle(da: usize, db: usize, dc: usize) -> Vec<usize> {
    let dbc = db + dc;
    (0..da * dbc)
        .map(|k| {
            let (i, j) = (k / dbc, k % dbc);
            if j < db { i * db + j } else { da * db + i * dc + (j - db) }
        })
        .collect()
}
