//! Invariant-pruned search for vertex bijections that extend to linear maps.
//!
//! Every `u`-preserving linear bijection between two polytopes maps the
//! barycenter to the barycenter and transports the scatter form
//! `Q = Σ (v - c)(v - c)ᵀ`. The Gram values `(v_i - c)ᵀ Q⁻¹ (v_j - c)`,
//! computed on the affine hull, are therefore invariant and prune candidate
//! bijections. A candidate is fixed by the images of a reference tuple of
//! affinely independent vertices; all remaining images follow by linearity
//! and are looked up in the target.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::geometry::matrix::{axpy, independent_subset, sub, zero_vec, Matrix};
use crate::geometry::Field;
use crate::statespace::StateSpace;

/// Search ran out of budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExceeded(pub u64);

/// Pairwise invariant values of a space, in the affine-hull metric.
pub fn gram_invariants<F: Field>(space: &StateSpace<F>) -> Vec<Vec<F>> {
    let n = space.vertex_count();
    let c = space.barycenter();
    let diffs: Vec<Vec<F>> = space.vertices().iter().map(|v| sub(v, &c)).collect();
    let idx = independent_subset(&diffs);
    if idx.is_empty() {
        return vec![vec![F::zero(); n]; n];
    }
    let basis = Matrix::from_columns(space.ambient_dim(), &idx.iter().map(|&i| diffs[i].clone()).collect::<Vec<_>>());
    let li = basis.left_inverse().expect("independent directions");
    let coords: Vec<Vec<F>> = diffs.iter().map(|d| li.mul_vec(d)).collect();
    let k = idx.len();
    let mut q = Matrix::<F>::zeros(k, k);
    for x in &coords {
        for a in 0..k {
            for b in 0..k {
                let v = q.get(a, b).clone() + &(x[a].clone() * &x[b]);
                q.set(a, b, v);
            }
        }
    }
    let qinv = q.inverse().expect("scatter form is positive definite on the affine hull");
    let transformed: Vec<Vec<F>> = coords.iter().map(|x| qinv.mul_vec(x)).collect();
    (0..n)
        .map(|i| (0..n).map(|j| crate::geometry::matrix::dot(&coords[i], &transformed[j])).collect())
        .collect()
}

/// Gram values of one or two spaces mapped to shared integer colors.
struct Colored {
    src: Vec<Vec<u32>>,
    tgt: Vec<Vec<u32>>,
    src_sig: Vec<Vec<u32>>,
    tgt_sig: Vec<Vec<u32>>,
}

fn colorize<F: Field>(gs: &[Vec<F>], gt: &[Vec<F>]) -> Colored {
    let mut palette: Vec<F> = gs.iter().chain(gt).flatten().cloned().collect();
    palette.sort_by(|a, b| a.compare(b));
    palette.dedup_by(|a, b| a == b);
    let color = |x: &F| -> u32 {
        palette
            .binary_search_by(|p| if p == x { Ordering::Equal } else { p.compare(x) })
            .expect("value is in the palette") as u32
    };
    let conv = |g: &[Vec<F>]| -> Vec<Vec<u32>> { g.iter().map(|r| r.iter().map(color).collect()).collect() };
    let src = conv(gs);
    let tgt = conv(gt);
    let sig = |g: &[Vec<u32>]| -> Vec<Vec<u32>> {
        g.iter()
            .enumerate()
            .map(|(i, r)| {
                let mut s = r.clone();
                s.sort_unstable();
                s.insert(0, r[i]);
                s
            })
            .collect()
    };
    let src_sig = sig(&src);
    let tgt_sig = sig(&tgt);
    Colored { src, tgt, src_sig, tgt_sig }
}

/// Per-vertex invariant signature (diagonal Gram color followed by the sorted
/// row of colors); equal signatures are necessary for vertices in one orbit.
pub fn vertex_signatures<F: Field>(space: &StateSpace<F>) -> Vec<Vec<u32>> {
    let g = gram_invariants(space);
    colorize(&g, &g).src_sig
}

struct Search<'a, F: Field> {
    src: &'a StateSpace<F>,
    tgt: &'a StateSpace<F>,
    colors: Colored,
    order: Vec<usize>,
    budget: u64,
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
    want_all: bool,
}

impl<F: Field> Search<'_, F> {
    fn tick(&self) -> Result<(), BudgetExceeded> {
        if self.nodes.fetch_add(1, AtomicOrdering::Relaxed) >= self.budget {
            return Err(BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn compatible(&self, assigned: &[(usize, usize)], i: usize, j: usize) -> bool {
        self.colors.src_sig[i] == self.colors.tgt_sig[j]
            && assigned
                .iter()
                .all(|&(a, b)| b != j && self.colors.src[i][a] == self.colors.tgt[j][b])
    }

    /// Completes a bijection from reference images, or `None` if the implied
    /// linear map does not permute the vertices.
    fn complete(&self, images: &[usize]) -> Option<Vec<usize>> {
        let frame = self.src.frame();
        let n = self.src.vertex_count();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        for (k, &r) in frame.reference.iter().enumerate() {
            perm[r] = images[k];
            used[images[k]] = true;
        }
        for v in 0..n {
            if perm[v] != usize::MAX {
                continue;
            }
            let mut w = zero_vec::<F>(self.tgt.ambient_dim());
            for (k, c) in frame.coords[v].iter().enumerate() {
                axpy(&mut w, c, self.tgt.vertex(images[k]));
            }
            let j = self.tgt.vertex_index(&w)?;
            if used[j] {
                return None;
            }
            used[j] = true;
            perm[v] = j;
        }
        Some(perm)
    }

    fn extend(&self, assigned: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<usize>>) -> Result<(), BudgetExceeded> {
        if self.stop.load(AtomicOrdering::Relaxed) {
            return Ok(());
        }
        self.tick()?;
        let depth = assigned.len();
        if depth == self.order.len() {
            let images: Vec<usize> = assigned.iter().map(|&(_, j)| j).collect();
            if let Some(perm) = self.complete(&images) {
                out.push(perm);
                if !self.want_all {
                    self.stop.store(true, AtomicOrdering::Relaxed);
                }
            }
            return Ok(());
        }
        let i = self.order[depth];
        for j in 0..self.tgt.vertex_count() {
            if self.compatible(assigned, i, j) {
                assigned.push((i, j));
                self.extend(assigned, out)?;
                assigned.pop();
            }
        }
        Ok(())
    }
}

/// All (or the first) vertex bijections `src → tgt` extending to a linear
/// map, sorted lexicographically.
pub fn linear_bijections<F: Field>(
    src: &StateSpace<F>,
    tgt: &StateSpace<F>,
    want_all: bool,
    budget: u64,
) -> Result<Vec<Vec<usize>>, BudgetExceeded> {
    if src.vertex_count() != tgt.vertex_count() || src.span_rank() != tgt.span_rank() {
        return Ok(Vec::new());
    }
    let gs = gram_invariants(src);
    let gt = if std::ptr::eq(src, tgt) { gs.clone() } else { gram_invariants(tgt) };
    let colors = colorize(&gs, &gt);
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let search = Search {
        src,
        tgt,
        colors,
        order: src.frame().reference.clone(),
        budget,
        nodes: &nodes,
        stop: &stop,
        want_all,
    };
    let first = search.order[0];
    let roots: Vec<usize> = (0..tgt.vertex_count()).filter(|&j| search.compatible(&[], first, j)).collect();
    let branch = |j: usize| -> Result<Vec<Vec<usize>>, BudgetExceeded> {
        let mut out = Vec::new();
        search.extend(&mut vec![(first, j)], &mut out)?;
        Ok(out)
    };
    let mut perms: Vec<Vec<usize>> = if want_all {
        roots.par_iter().map(|&j| branch(j)).collect::<Result<Vec<_>, _>>()?.into_iter().flatten().collect()
    } else {
        let mut found = Vec::new();
        for &j in &roots {
            found.extend(branch(j)?);
            if !found.is_empty() {
                break;
            }
        }
        found
    };
    perms.sort();
    if !want_all {
        perms.truncate(1);
    }
    Ok(perms)
}

/// Matrix of the linear map sending vertex `i` of `src` to vertex `perm[i]`
/// of `tgt`. With `extend_identity`, the map is the identity on the orthogonal
/// complement of the source span (only meaningful for `src == tgt`).
pub fn map_matrix<F: Field>(src: &StateSpace<F>, tgt: &StateSpace<F>, perm: &[usize], extend_identity: bool) -> Matrix<F> {
    let frame = src.frame();
    let images: Vec<Vec<F>> = frame.reference.iter().map(|&r| tgt.vertex(perm[r]).to_vec()).collect();
    let w = Matrix::from_columns(tgt.ambient_dim(), &images);
    let m = w.mul(&frame.left_inverse);
    if extend_identity && !src.spans_ambient() {
        m.add(&frame.complement_projector())
    } else {
        m
    }
}
