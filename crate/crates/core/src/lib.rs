//! Exact polytope models of generalized probabilistic theories.
//!
//! State spaces are finite vertex lists over exact rationals together with a
//! unit effect. On top of them the crate builds the two composites that
//! matter for interaction questions (direct sum and minimal tensor product),
//! splits spaces into irreducible direct summands, computes their complete
//! reversible symmetry groups, and searches bipartite reversible maps of the
//! form `T(a ⊗ b) = X_b(a) ⊗ Y_a(b)` for nontrivial ones. The `scenario`
//! module ties everything to a small line-oriented DSL and a JSON report.

pub mod decompose;
pub mod dynamics;
pub mod geometry;
pub mod interactions;
pub mod scenario;
pub mod statespace;

pub use decompose::{Decomposition, Isomorphism};
pub use dynamics::{ReversibleMap, SymmetryGroup};
pub use interactions::{LocalGroups, LriWitness};
pub use geometry::{Face, FaceLattice, Field, Float64, Matrix, Rational};
pub use statespace::{Effect, State, StateSpace};
