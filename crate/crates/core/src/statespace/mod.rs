//! Polytope state spaces, their states and effects, and the two ways of
//! composing them: direct sum and minimal tensor product.

mod builders;
mod composite;
mod effects;
mod json;
mod random;

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::geometry::matrix::{dot, independent_subset, lex_cmp, Matrix};
use crate::geometry::{in_hull, Field, GeometryError, Rational};

pub use builders::{cross, cube, gbit, house, point, polygon, simplex};
pub use composite::{
    direct_sum, distributivity_reshuffle, is_entangled, marginal, min_tensor, partial_discard, product_decompose,
    EntanglementVerdict, Side,
};
pub use effects::{covector_from_values, extremal_effects, DEFAULT_EFFECT_CAP};
pub use json::{parse_space_json, space_from_json, space_to_json, SpaceJson};
pub use random::{random_polytope, random_u_preserving_map, scramble};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("state space needs at least one vertex")]
    NoVertices,
    #[error("vertex {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("unit effect does not evaluate to 1 on vertex {index}")]
    NotNormalized { index: usize },
    #[error("vertex {index} duplicates vertex {duplicate_of}")]
    DuplicateVertex { index: usize, duplicate_of: usize },
    #[error("vertex {index} lies in the convex hull of the other vertices")]
    NotExtremal { index: usize },
    #[error("state space '{0}' has no recorded tensor factors")]
    NotComposite(String),
    #[error("state does not lie in the state space")]
    NotAState,
    #[error("{0}")]
    Geometry(#[from] GeometryError),
    #[error("invalid state-space description: {0}")]
    Format(String),
    #[error("{0}")]
    Unsupported(String),
}

/// How a space was built, when it was built from two others.
#[derive(Debug, Clone)]
pub enum Structure<F: Field> {
    Plain,
    Sum(Arc<StateSpace<F>>, Arc<StateSpace<F>>),
    Tensor(Arc<StateSpace<F>>, Arc<StateSpace<F>>),
}

/// Linear-algebra data describing the span of the vertices.
#[derive(Debug, Clone)]
pub struct SpanFrame<F: Field> {
    /// Indices of an independent vertex subset spanning the same space.
    pub reference: Vec<usize>,
    /// `d × r` matrix whose columns are the reference vertices.
    pub basis: Matrix<F>,
    /// `r × d` left inverse of `basis`, zero on the orthogonal complement.
    pub left_inverse: Matrix<F>,
    /// Coordinates of every vertex in the reference basis.
    pub coords: Vec<Vec<F>>,
}

impl<F: Field> SpanFrame<F> {
    pub fn rank(&self) -> usize {
        self.reference.len()
    }

    /// Projector onto the orthogonal complement of the span.
    pub fn complement_projector(&self) -> Matrix<F> {
        let d = self.basis.rows();
        Matrix::identity(d).sub(&self.basis.mul(&self.left_inverse))
    }
}

/// A polytope of normalized states: its pure states (vertices) together with
/// the unit effect that evaluates to 1 on all of them.
#[derive(Debug, Clone)]
pub struct StateSpace<F: Field = Rational> {
    label: String,
    ambient_dim: usize,
    vertices: Vec<Vec<F>>,
    unit: Vec<F>,
    structure: Structure<F>,
    frame: OnceLock<SpanFrame<F>>,
}

impl<F: Field> PartialEq for StateSpace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.vertices == other.vertices
            && self.unit == other.unit
    }
}

impl<F: Field> StateSpace<F> {
    /// Validates and builds a space. Vertex order is kept as given.
    pub fn new(vertices: Vec<Vec<F>>, unit: Vec<F>, label: impl Into<String>) -> Result<Self, SpaceError> {
        let space = Self::unchecked(vertices, unit, label.into(), Structure::Plain);
        space.validate_basic()?;
        if let Some(index) = space.first_non_extremal()? {
            return Err(SpaceError::NotExtremal { index });
        }
        Ok(space)
    }

    /// Like [`StateSpace::new`] but drops points that are not extreme instead
    /// of failing; returns the dropped points.
    pub fn new_reduced(
        vertices: Vec<Vec<F>>,
        unit: Vec<F>,
        label: impl Into<String>,
    ) -> Result<(Self, Vec<Vec<F>>), SpaceError> {
        let label = label.into();
        let mut kept = vertices;
        let mut removed = Vec::new();
        loop {
            let space = Self::unchecked(kept.clone(), unit.clone(), label.clone(), Structure::Plain);
            space.validate_basic()?;
            match space.first_non_extremal()? {
                None => return Ok((space, removed)),
                Some(i) => removed.push(kept.remove(i)),
            }
        }
    }

    pub(crate) fn unchecked(vertices: Vec<Vec<F>>, unit: Vec<F>, label: String, structure: Structure<F>) -> Self {
        StateSpace {
            label,
            ambient_dim: unit.len(),
            vertices,
            unit,
            structure,
            frame: OnceLock::new(),
        }
    }

    fn validate_basic(&self) -> Result<(), SpaceError> {
        if self.vertices.is_empty() {
            return Err(SpaceError::NoVertices);
        }
        for (index, v) in self.vertices.iter().enumerate() {
            if v.len() != self.ambient_dim {
                return Err(SpaceError::DimensionMismatch { index, expected: self.ambient_dim, found: v.len() });
            }
            if !dot(&self.unit, v).is_one() {
                return Err(SpaceError::NotNormalized { index });
            }
            if let Some(duplicate_of) = self.vertices[..index].iter().position(|w| w == v) {
                return Err(SpaceError::DuplicateVertex { index, duplicate_of });
            }
        }
        Ok(())
    }

    fn first_non_extremal(&self) -> Result<Option<usize>, SpaceError> {
        if self.vertices.len() == 1 {
            return Ok(None);
        }
        for i in 0..self.vertices.len() {
            let others: Vec<Vec<F>> = self
                .vertices
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            if in_hull(&self.vertices[i], &others)?.is_member() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vec<F>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[F] {
        &self.vertices[i]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn unit_effect(&self) -> &[F] {
        &self.unit
    }

    pub fn structure(&self) -> &Structure<F> {
        &self.structure
    }

    /// The tensor factors, if this space was built by [`min_tensor`].
    pub fn tensor_factors(&self) -> Option<(&StateSpace<F>, &StateSpace<F>)> {
        match &self.structure {
            Structure::Tensor(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn frame(&self) -> &SpanFrame<F> {
        self.frame.get_or_init(|| {
            let reference = independent_subset(&self.vertices);
            let cols: Vec<Vec<F>> = reference.iter().map(|&i| self.vertices[i].clone()).collect();
            let basis = Matrix::from_columns(self.ambient_dim, &cols);
            let left_inverse = basis.left_inverse().expect("reference vertices are independent");
            let coords = self.vertices.iter().map(|v| left_inverse.mul_vec(v)).collect();
            SpanFrame { reference, basis, left_inverse, coords }
        })
    }

    /// Dimension of the linear span of the vertices.
    pub fn span_rank(&self) -> usize {
        self.frame().rank()
    }

    /// Dimension of the polytope itself (affine hull).
    pub fn affine_dim(&self) -> usize {
        self.span_rank() - 1
    }

    pub fn spans_ambient(&self) -> bool {
        self.span_rank() == self.ambient_dim
    }

    pub fn vertex_index(&self, v: &[F]) -> Option<usize> {
        self.vertices.iter().position(|w| w.as_slice() == v)
    }

    /// Does `v` lie in the linear span of the vertices?
    pub fn in_span(&self, v: &[F]) -> bool {
        let frame = self.frame();
        let c = frame.left_inverse.mul_vec(v);
        frame.basis.mul_vec(&c) == v
    }

    /// Wraps coordinates as a state after checking normalization and hull
    /// membership.
    pub fn state(&self, coords: Vec<F>) -> Result<State<'_, F>, SpaceError> {
        if coords.len() != self.ambient_dim {
            return Err(GeometryError::DimensionMismatch { expected: self.ambient_dim, found: coords.len() }.into());
        }
        if !dot(&self.unit, &coords).is_one() || !in_hull(&coords, &self.vertices)?.is_member() {
            return Err(SpaceError::NotAState);
        }
        Ok(State { space: self, coords })
    }

    pub fn pure_state(&self, i: usize) -> State<'_, F> {
        State { space: self, coords: self.vertices[i].clone() }
    }

    /// Uniform mixture of all vertices.
    pub fn barycenter(&self) -> Vec<F> {
        let n = F::from_i64(self.vertices.len() as i64);
        let mut c = vec![F::zero(); self.ambient_dim];
        for v in &self.vertices {
            crate::geometry::matrix::axpy(&mut c, &F::one(), v);
        }
        c.into_iter().map(|x| x / &n).collect()
    }

    /// Vertices sorted lexicographically (for order-insensitive comparison).
    pub fn sorted_vertices(&self) -> Vec<Vec<F>> {
        let mut v = self.vertices.clone();
        v.sort_by(|a, b| lex_cmp(a, b));
        v
    }

    /// Image of the space under `map`; `unit` must be the unit effect of the
    /// image (`u ∘ map⁻¹` on the span).
    pub fn transformed(&self, map: &Matrix<F>, unit: Vec<F>, label: impl Into<String>) -> Result<Self, SpaceError> {
        let vertices = self.vertices.iter().map(|v| map.mul_vec(v)).collect();
        StateSpace::new(vertices, unit, label)
    }
}

/// A normalized state of a particular space.
#[derive(Debug, Clone, PartialEq)]
pub struct State<'s, F: Field = Rational> {
    space: &'s StateSpace<F>,
    coords: Vec<F>,
}

impl<'s, F: Field> State<'s, F> {
    pub fn space(&self) -> &'s StateSpace<F> {
        self.space
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<F> {
        self.coords
    }

    /// Index of the vertex this state equals, if it is pure.
    pub fn pure_index(&self) -> Option<usize> {
        self.space.vertex_index(&self.coords)
    }
}

/// A linear functional on a space taking values in `[0, 1]` on all states.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect<'s, F: Field = Rational> {
    space: &'s StateSpace<F>,
    covector: Vec<F>,
}

impl<'s, F: Field> Effect<'s, F> {
    /// Checks `0 ≤ e(v) ≤ 1` on every vertex.
    pub fn new(space: &'s StateSpace<F>, covector: Vec<F>) -> Option<Self> {
        if covector.len() != space.ambient_dim() {
            return None;
        }
        let ok = space.vertices().iter().all(|v| {
            let x = dot(&covector, v);
            !x.is_negative() && !(x - &F::one()).is_positive()
        });
        ok.then_some(Effect { space, covector })
    }

    pub fn space(&self) -> &'s StateSpace<F> {
        self.space
    }

    pub fn covector(&self) -> &[F] {
        &self.covector
    }

    pub fn apply(&self, state: &[F]) -> F {
        dot(&self.covector, state)
    }

    /// Values on the vertices, in vertex order.
    pub fn vertex_values(&self) -> Vec<F> {
        self.space.vertices().iter().map(|v| self.apply(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::field::q;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn make_space_examples() {
        let d1 = StateSpace::new(vec![v(&[1, 0]), v(&[0, 1])], v(&[1, 1]), "D1").unwrap();
        assert_eq!(d1.vertex_count(), 2);
        let bad = StateSpace::new(vec![v(&[1, 0]), v(&[0, 1]), vec![q(1, 2), q(1, 2)]], v(&[1, 1]), "x");
        assert_eq!(bad.unwrap_err(), SpaceError::NotExtremal { index: 2 });
        let g = StateSpace::new(
            vec![v(&[-1, -1, 1]), v(&[-1, 1, 1]), v(&[1, -1, 1]), v(&[1, 1, 1])],
            v(&[0, 0, 1]),
            "gbit",
        )
        .unwrap();
        assert_eq!(g.affine_dim(), 2);
    }

    #[test]
    fn make_space_errors() {
        assert_eq!(
            StateSpace::new(vec![v(&[1, 1])], v(&[1, 1]), "x").unwrap_err(),
            SpaceError::NotNormalized { index: 0 }
        );
        assert_eq!(
            StateSpace::new(vec![v(&[1, 0]), v(&[1, 0])], v(&[1, 1]), "x").unwrap_err(),
            SpaceError::DuplicateVertex { index: 1, duplicate_of: 0 }
        );
        assert_eq!(StateSpace::<Rational>::new(vec![], vec![], "x").unwrap_err(), SpaceError::NoVertices);
    }

    #[test]
    fn reduce_flag_drops_interior_points() {
        let (s, removed) =
            StateSpace::new_reduced(vec![v(&[1, 0]), vec![q(1, 2), q(1, 2)], v(&[0, 1])], v(&[1, 1]), "D1").unwrap();
        assert_eq!(s.vertex_count(), 2);
        assert_eq!(removed, vec![vec![q(1, 2), q(1, 2)]]);
    }

    #[test]
    fn states_and_effects_validate() {
        let d1 = simplex::<Rational>(1);
        assert!(d1.state(vec![q(1, 3), q(2, 3)]).is_ok());
        assert_eq!(d1.state(vec![q(2, 1), q(-1, 1)]).unwrap_err(), SpaceError::NotAState);
        assert!(Effect::new(&d1, v(&[1, 0])).is_some());
        assert!(Effect::new(&d1, v(&[2, 0])).is_none());
    }
}
