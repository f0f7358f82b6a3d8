//! Exact linear algebra and polytope combinatorics.

pub mod faces;
pub mod field;
pub mod hull;
pub mod lp;
pub mod matrix;

use thiserror::Error;

pub use faces::{face_lattice, Face, FaceLattice, DEFAULT_SUBSET_CAP};
pub use field::{Field, Float64, Rational};
pub use hull::{in_hull, is_face, FaceVerdict, HullMembership};
pub use matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vertex index {index} out of range for {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("size guard exceeded: {needed} subsets requested, cap is {cap}")]
    SizeGuard { needed: u64, cap: u64 },
}

/// Rank of a matrix, exposed at module level for convenience.
pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    m.rank()
}
