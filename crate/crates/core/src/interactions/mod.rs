//! Locally reversible interactions on minimal tensor products.
//!
//! A reversible map `T` on `A ⊠ B` is a locally reversible interaction when
//! `T(a ⊗ b) = X_b(a) ⊗ Y_a(b)` on all pure product states, with every `X_b`
//! and `Y_a` a reversible map of its factor. From such a map this module
//! builds partial broadcasters, the non-disturbing measurements they induce,
//! and the direct-sum decomposition those measurements expose. It also
//! enumerates all interactions of two small spaces and checks that on
//! indecomposable factors they are all products, and that on decomposable
//! factors they act blockwise as products conditioned on the classical labels.

mod blocks;
mod broadcast;
mod enumerate;
pub mod maps;

use thiserror::Error;

use crate::decompose::DecomposeError;
use crate::dynamics::{reversible_maps, vertex_permutation, DynamicsError, ReversibleMap, SymmetryGroup};
use crate::geometry::matrix::{dot, kron};
use crate::geometry::{Field, Matrix, Rational};
use crate::statespace::{min_tensor, partial_discard, Side, SpaceError, StateSpace};

pub use blocks::{conditional_structure, BlockMap, BlockStructure};
pub use broadcast::{
    broadcast_f_map, component_indicator_effects, extract_decomposition, nondisturbing_measurement,
    partial_broadcaster, partial_broadcaster_mirrored, FMap, MeasurementFamily, PartialBroadcaster,
};
pub use enumerate::{enumerate_lris, LriEnumeration};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InteractionError {
    #[error("map has shape {found} but the composite needs {expected}")]
    DimensionMismatch { expected: String, found: String },
    #[error("map does not preserve the unit effect")]
    NotNormalizationPreserving,
    #[error("map is not reversible on the composite")]
    NotReversible,
    #[error("witness does not hold at vertex {0}")]
    InvalidWitness(usize),
    #[error("image of pure state {0} is not a product state")]
    NotProduct(usize),
    #[error("broadcaster does not return pure state {0} on the kept side")]
    NotBroadcasting(usize),
    #[error("effects do not sum to the unit effect")]
    IncompleteEffects,
    #[error("effect {effect} acts non-proportionally on pure state {vertex}")]
    NotNonDisturbing { effect: usize, vertex: usize },
    #[error("map list has {found} entries but the space has {expected} components")]
    ComponentCount { expected: usize, found: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

/// Symmetry groups of two factors together with their minimal tensor
/// product.
#[derive(Debug, Clone)]
pub struct LocalGroups<F: Field = Rational> {
    pub a: SymmetryGroup<F>,
    pub b: SymmetryGroup<F>,
    composite: StateSpace<F>,
}

impl<F: Field> LocalGroups<F> {
    pub fn new(a: SymmetryGroup<F>, b: SymmetryGroup<F>) -> Self {
        let composite = min_tensor(a.space(), b.space());
        LocalGroups { a, b, composite }
    }

    pub fn compute(a: &StateSpace<F>, b: &StateSpace<F>, budget: u64) -> Result<Self, DynamicsError> {
        Ok(Self::new(reversible_maps(a, budget)?, reversible_maps(b, budget)?))
    }

    pub fn space_a(&self) -> &StateSpace<F> {
        self.a.space()
    }

    pub fn space_b(&self) -> &StateSpace<F> {
        self.b.space()
    }

    pub fn composite(&self) -> &StateSpace<F> {
        &self.composite
    }
}

/// `T` together with the local families realizing it pointwise.
#[derive(Debug, Clone)]
pub struct LriWitness<F: Field = Rational> {
    pub composite: StateSpace<F>,
    pub matrix: Matrix<F>,
    /// Vertex permutation of `T` on the composite.
    pub perm: Vec<usize>,
    /// `x[j]` is `X_{b_j}`.
    pub x: Vec<ReversibleMap<F>>,
    /// `y[i]` is `Y_{a_i}`.
    pub y: Vec<ReversibleMap<F>>,
}

impl<F: Field> LriWitness<F> {
    pub fn factors(&self) -> (&StateSpace<F>, &StateSpace<F>) {
        self.composite.tensor_factors().expect("witness composite is a tensor product")
    }

    /// Re-checks `T(a ⊗ b) = X_b(a) ⊗ Y_a(b)` on every vertex pair.
    pub fn verify(&self) -> bool {
        let (a, b) = self.factors();
        if self.x.len() != b.vertex_count() || self.y.len() != a.vertex_count() {
            return false;
        }
        (0..a.vertex_count()).all(|i| {
            (0..b.vertex_count()).all(|j| {
                let lhs = self.matrix.mul_vec(self.composite.vertex(self.composite.pair_index(i, j)));
                lhs == kron(&self.x[j].apply(a.vertex(i)), &self.y[i].apply(b.vertex(j)))
            })
        })
    }

    pub fn x_is_constant(&self) -> bool {
        self.x.windows(2).all(|w| w[0].perm == w[1].perm)
    }

    pub fn y_is_constant(&self) -> bool {
        self.y.windows(2).all(|w| w[0].perm == w[1].perm)
    }
}

/// Both local families constant, so `T = X ⊗ Y`.
pub fn is_trivial_lri<F: Field>(w: &LriWitness<F>) -> bool {
    w.x_is_constant() && w.y_is_constant()
}

/// Splits a composite vector into its marginals if it is their product.
pub(crate) fn split_product<F: Field>(s: &[F], a: &StateSpace<F>, b: &StateSpace<F>) -> Option<(Vec<F>, Vec<F>)> {
    let x = partial_discard(s, a, b, Side::A);
    let y = partial_discard(s, a, b, Side::B);
    (kron(&x, &y) == s).then_some((x, y))
}

/// `m` acts as the identity on the span of the space's vertices (as an exact
/// matrix identity when the vertices span the ambient space).
pub(crate) fn identity_on_span<F: Field>(space: &StateSpace<F>, m: &Matrix<F>) -> bool {
    if space.spans_ambient() {
        m.is_identity()
    } else {
        space.vertices().iter().all(|v| m.mul_vec(v) == v.as_slice())
    }
}

/// Extracts an interaction witness from `T`, or `None` if `T` is not a
/// locally reversible interaction.
pub fn lri_decompose<F: Field>(t: &Matrix<F>, groups: &LocalGroups<F>) -> Result<Option<LriWitness<F>>, InteractionError> {
    let ab = groups.composite();
    let (a, b) = (groups.space_a(), groups.space_b());
    let d = ab.ambient_dim();
    if t.rows() != d || t.cols() != d {
        return Err(InteractionError::DimensionMismatch {
            expected: format!("{d}x{d}"),
            found: format!("{}x{}", t.rows(), t.cols()),
        });
    }
    let pulled = t.covec_mul(ab.unit_effect());
    if ab.vertices().iter().any(|v| !dot(&pulled, v).is_one()) {
        return Err(InteractionError::NotNormalizationPreserving);
    }
    let Some(perm) = vertex_permutation(ab, t) else {
        return Ok(None);
    };
    let (na, nb) = (a.vertex_count(), b.vertex_count());
    let mut xs = vec![vec![0; na]; nb];
    let mut ys = vec![vec![0; nb]; na];
    for i in 0..na {
        for j in 0..nb {
            let (xi, yj) = ab.pair_of(perm[ab.pair_index(i, j)]);
            xs[j][i] = xi;
            ys[i][j] = yj;
        }
    }
    let lookup = |g: &SymmetryGroup<F>, p: &[usize]| g.find_perm(p).map(|k| g.element(k).clone());
    let x = xs.iter().map(|p| lookup(&groups.a, p)).collect::<Option<Vec<_>>>();
    let y = ys.iter().map(|p| lookup(&groups.b, p)).collect::<Option<Vec<_>>>();
    let (Some(x), Some(y)) = (x, y) else {
        return Ok(None);
    };
    let w = LriWitness { composite: ab.clone(), matrix: t.clone(), perm, x, y };
    debug_assert!(w.verify());
    Ok(Some(w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem2Verdict {
    Pass,
    Fail,
    Inapplicable,
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct Theorem2Report<F: Field = Rational> {
    pub verdict: Theorem2Verdict,
    pub total: usize,
    pub trivial: usize,
    /// Broadcasters built from the enumerated interactions whose f-map was
    /// checked for constancy.
    pub broadcasters_checked: usize,
    pub counterexample: Option<LriWitness<F>>,
    pub nodes: u64,
    pub reason: Option<String>,
}

/// Enumerates every interaction of two indecomposable spaces and checks that
/// all of them are products, and that every partial broadcaster they induce
/// has a constant f-map.
pub fn verify_theorem2<F: Field>(groups: &LocalGroups<F>, budget: u64) -> Result<Theorem2Report<F>, InteractionError> {
    let mut report = Theorem2Report {
        verdict: Theorem2Verdict::Pass,
        total: 0,
        trivial: 0,
        broadcasters_checked: 0,
        counterexample: None,
        nodes: 0,
        reason: None,
    };
    for (side, space) in [("A", groups.space_a()), ("B", groups.space_b())] {
        if crate::decompose::has_classical_dof(space) {
            report.verdict = Theorem2Verdict::Inapplicable;
            report.reason = Some(format!("factor {side} ('{}') has a classical degree of freedom", space.label()));
            return Ok(report);
        }
    }
    let found = enumerate_lris(groups, budget);
    report.total = found.lris.len();
    report.nodes = found.nodes;
    for w in &found.lris {
        let trivial = is_trivial_lri(w);
        if trivial {
            report.trivial += 1;
        }
        let mut constant = true;
        for j in 0..groups.space_b().vertex_count() {
            constant &= broadcast_f_map(&partial_broadcaster(w, j)?)?.is_constant();
            report.broadcasters_checked += 1;
        }
        for i in 0..groups.space_a().vertex_count() {
            constant &= broadcast_f_map(&partial_broadcaster_mirrored(w, i)?)?.is_constant();
            report.broadcasters_checked += 1;
        }
        if (!trivial || !constant) && report.counterexample.is_none() {
            report.verdict = Theorem2Verdict::Fail;
            report.counterexample = Some(w.clone());
        }
    }
    if !found.complete && report.verdict == Theorem2Verdict::Pass {
        report.verdict = Theorem2Verdict::BudgetExceeded;
        report.reason = Some(format!("search stopped after {} nodes", found.nodes));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::maps::{cnot, product_map, swap_map};
    use super::*;
    use crate::dynamics::DEFAULT_SEARCH_BUDGET;
    use crate::geometry::field::q;
    use crate::statespace::{gbit, point, simplex};

    pub(crate) fn groups(a: &StateSpace<Rational>, b: &StateSpace<Rational>) -> LocalGroups<Rational> {
        LocalGroups::compute(a, b, DEFAULT_SEARCH_BUDGET).unwrap()
    }

    #[test]
    fn cnot_witness() {
        let d1 = simplex::<Rational>(1);
        let g = groups(&d1, &d1);
        let w = lri_decompose(&cnot(), &g).unwrap().unwrap();
        assert!(w.verify());
        assert!(w.x.iter().all(|x| x.is_identity()));
        assert!(w.y[0].is_identity());
        assert_eq!(w.y[1].perm, vec![1, 0]);
        assert!(!is_trivial_lri(&w));
        assert!(w.x_is_constant() && !w.y_is_constant());
    }

    #[test]
    fn swap_is_not_an_lri() {
        let gb = gbit::<Rational>();
        let g = groups(&gb, &gb);
        assert!(lri_decompose(&swap_map(3), &g).unwrap().is_none());
    }

    #[test]
    fn product_maps_are_trivial() {
        let gb = gbit::<Rational>();
        let g = groups(&gb, &gb);
        let t = product_map(&g.a.element(3).matrix, &g.b.element(5).matrix);
        let w = lri_decompose(&t, &g).unwrap().unwrap();
        assert!(is_trivial_lri(&w));
        assert_eq!(w.x[0].perm, g.a.element(3).perm);
    }

    #[test]
    fn non_normalizing_maps_are_errors() {
        let d1 = simplex::<Rational>(1);
        let g = groups(&d1, &d1);
        let t = Matrix::<Rational>::identity(4).scale(&q(2, 1));
        assert_eq!(lri_decompose(&t, &g).unwrap_err(), InteractionError::NotNormalizationPreserving);
        assert!(matches!(
            lri_decompose(&Matrix::<Rational>::identity(3), &g),
            Err(InteractionError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn theorem2_reports() {
        let gb = gbit::<Rational>();
        let r = verify_theorem2(&groups(&gb, &gb), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(r.verdict, Theorem2Verdict::Pass);
        assert_eq!((r.total, r.trivial), (64, 64));
        assert_eq!(r.broadcasters_checked, 64 * 8);

        let d1 = simplex::<Rational>(1);
        let r = verify_theorem2(&groups(&d1, &d1), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(r.verdict, Theorem2Verdict::Inapplicable);

        let r = verify_theorem2(&groups(&gb, &point()), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(r.verdict, Theorem2Verdict::Pass);
        assert_eq!(r.total, 8);
    }

    #[test]
    fn theorem2_budget() {
        let gb = gbit::<Rational>();
        let r = verify_theorem2(&groups(&gb, &gb), 100).unwrap();
        assert_eq!(r.verdict, Theorem2Verdict::BudgetExceeded);
    }
}
