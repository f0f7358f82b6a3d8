//! Exhaustive search for locally reversible interactions.
//!
//! A candidate is a choice of `X_b ∈ G_A` for every vertex `b` and
//! `Y_a ∈ G_B` for every vertex `a`; it prescribes the image of every product
//! vertex. The prescription extends to a linear map iff it respects every
//! linear relation among product vertices, and those relations are spanned
//! by `e_a ⊗ k` (`k` a relation of `B`'s vertices) and `k ⊗ e_b` (`k` a
//! relation of `A`'s vertices). The outer loop runs over `X` families in
//! parallel; the inner search fixes one `Y_a` at a time and checks the
//! relations of the first kind as soon as they are determined.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::dynamics::map_matrix;
use crate::geometry::matrix::{axpy, is_zero_vec, zero_vec};
use crate::geometry::{Field, Matrix, Rational};

use super::{LocalGroups, LriWitness};

#[derive(Debug, Clone)]
pub struct LriEnumeration<F: Field = Rational> {
    /// Interactions ordered by their composite vertex permutation.
    pub lris: Vec<LriWitness<F>>,
    /// False when the node budget ran out; `lris` is then a partial list.
    pub complete: bool,
    pub nodes: u64,
}

struct Context<'g, F: Field> {
    groups: &'g LocalGroups<F>,
    ker_a: Vec<Vec<F>>,
    ker_b: Vec<Vec<F>>,
    budget: u64,
    nodes: AtomicU64,
    exhausted: AtomicBool,
}

impl<F: Field> Context<'_, F> {
    fn tick(&self) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn relation_holds(&self, kernel: &[F], terms: &[usize]) -> bool {
        let ab = self.groups.composite();
        let mut acc = zero_vec::<F>(ab.ambient_dim());
        for (c, &k) in kernel.iter().zip(terms) {
            if !c.is_zero() {
                axpy(&mut acc, c, ab.vertex(k));
            }
        }
        is_zero_vec(&acc)
    }

    /// All relations in `kernels` hold for the composite vertices `terms`.
    fn relations_hold(&self, kernels: &[Vec<F>], terms: Vec<usize>, memo: &mut HashMap<Vec<usize>, bool>) -> bool {
        if kernels.is_empty() {
            return true;
        }
        if let Some(&ok) = memo.get(&terms) {
            return ok;
        }
        let ok = kernels.iter().all(|k| self.relation_holds(k, &terms));
        memo.insert(terms, ok);
        ok
    }

    /// `x_img[j][i]` is `X_{b_j}(a_i)`; `y_fam[i]` is the group index of
    /// `Y_{a_i}`.
    fn search(&self, x_fam: &[usize], x_img: &[Vec<usize>], y_fam: &mut Vec<usize>, used: &mut [bool], memo: &mut Memo, out: &mut Vec<LriWitness<F>>) {
        let (ga, gb) = (&self.groups.a, &self.groups.b);
        let ab = self.groups.composite();
        let nb = gb.space().vertex_count();
        let i = y_fam.len();
        if i == ga.space().vertex_count() {
            let relations_hold = (0..nb).all(|j| {
                let terms = (0..i).map(|ii| ab.pair_index(x_img[j][ii], gb.element(y_fam[ii]).perm[j])).collect();
                self.relations_hold(&self.ker_a, terms, &mut memo.a)
            });
            if relations_hold {
                out.push(self.witness(x_fam, y_fam));
            }
            return;
        }
        for yk in 0..gb.order() {
            if self.exhausted.load(Ordering::Relaxed) || !self.tick() {
                return;
            }
            let yp = &gb.element(yk).perm;
            let images: Vec<usize> = (0..nb).map(|j| ab.pair_index(x_img[j][i], yp[j])).collect();
            if images.iter().any(|&k| used[k]) {
                continue;
            }
            if !self.relations_hold(&self.ker_b, images.clone(), &mut memo.b) {
                continue;
            }
            for &k in &images {
                used[k] = true;
            }
            y_fam.push(yk);
            self.search(x_fam, x_img, y_fam, used, memo, out);
            y_fam.pop();
            for &k in &images {
                used[k] = false;
            }
        }
    }

    fn witness(&self, x_fam: &[usize], y_fam: &[usize]) -> LriWitness<F> {
        let (ga, gb) = (&self.groups.a, &self.groups.b);
        let ab = self.groups.composite();
        let perm: Vec<usize> = (0..ab.vertex_count())
            .map(|k| {
                let (i, j) = ab.pair_of(k);
                ab.pair_index(ga.element(x_fam[j]).perm[i], gb.element(y_fam[i]).perm[j])
            })
            .collect();
        LriWitness {
            composite: ab.clone(),
            matrix: map_matrix(ab, ab, &perm, true),
            perm,
            x: x_fam.iter().map(|&k| ga.element(k).clone()).collect(),
            y: y_fam.iter().map(|&k| gb.element(k).clone()).collect(),
        }
    }
}

/// Per-worker cache of relation checks, keyed by the composite vertices
/// involved.
#[derive(Default)]
struct Memo {
    a: HashMap<Vec<usize>, bool>,
    b: HashMap<Vec<usize>, bool>,
}

fn vertex_relations<F: Field>(space: &crate::statespace::StateSpace<F>) -> Vec<Vec<F>> {
    Matrix::from_columns(space.ambient_dim(), space.vertices()).nullspace()
}

/// Every locally reversible interaction of the two factors, or as many as
/// `budget` search nodes allow.
pub fn enumerate_lris<F: Field>(groups: &LocalGroups<F>, budget: u64) -> LriEnumeration<F> {
    let (ga, gb) = (&groups.a, &groups.b);
    let nb = gb.space().vertex_count();
    let ka = ga.order() as u64;
    let outer = (0..nb).try_fold(1u64, |acc, _| acc.checked_mul(ka));
    let ctx = Context {
        groups,
        ker_a: vertex_relations(ga.space()),
        ker_b: vertex_relations(gb.space()),
        budget,
        nodes: AtomicU64::new(0),
        exhausted: AtomicBool::new(false),
    };
    let Some(outer) = outer.filter(|&o| o <= budget) else {
        return LriEnumeration { lris: Vec::new(), complete: false, nodes: 0 };
    };
    let mut lris: Vec<LriWitness<F>> = (0..outer)
        .into_par_iter()
        .map_init(Memo::default, |memo, code| {
            let mut out = Vec::new();
            if ctx.exhausted.load(Ordering::Relaxed) || !ctx.tick() {
                return out;
            }
            let x_fam: Vec<usize> = (0..nb).map(|j| ((code / ka.pow(j as u32)) % ka) as usize).collect();
            let x_img: Vec<Vec<usize>> = x_fam.iter().map(|&k| ga.element(k).perm.clone()).collect();
            let mut used = vec![false; groups.composite().vertex_count()];
            ctx.search(&x_fam, &x_img, &mut Vec::new(), &mut used, memo, &mut out);
            out
        })
        .flatten_iter()
        .collect();
    lris.sort_by(|a, b| a.perm.cmp(&b.perm));
    lris.dedup_by(|a, b| a.perm == b.perm);
    LriEnumeration {
        lris,
        complete: !ctx.exhausted.load(Ordering::Relaxed),
        nodes: ctx.nodes.load(Ordering::Relaxed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interactions::is_trivial_lri;
    use crate::interactions::tests::groups;
    use crate::statespace::{gbit, point, simplex};

    #[test]
    fn bit_pairs_have_twelve() {
        let d1 = simplex::<Rational>(1);
        let e = enumerate_lris(&groups(&d1, &d1), 1_000_000);
        assert!(e.complete);
        assert_eq!(e.lris.len(), 12);
        assert_eq!(e.lris.iter().filter(|w| is_trivial_lri(w)).count(), 4);
        assert!(e.lris.iter().all(|w| w.verify()));
    }

    #[test]
    fn gbit_pairs_are_products() {
        let g = gbit::<Rational>();
        let e = enumerate_lris(&groups(&g, &g), 10_000_000);
        assert!(e.complete);
        assert_eq!(e.lris.len(), 64);
        assert!(e.lris.iter().all(is_trivial_lri));
    }

    #[test]
    fn point_factor() {
        let e = enumerate_lris(&groups(&point(), &gbit()), 1_000_000);
        assert_eq!(e.lris.len(), 8);
        assert!(e.lris.iter().all(is_trivial_lri));
    }

    #[test]
    fn budget_flags_partial_results() {
        let g = gbit::<Rational>();
        let e = enumerate_lris(&groups(&g, &g), 50);
        assert!(!e.complete);
        let e = enumerate_lris(&groups(&g, &g), 10);
        assert!(!e.complete);
        assert!(e.lris.is_empty());
    }
}
