//! Blockwise structure of an interaction between decomposable factors: each
//! product of irreducible components is carried onto another such product by
//! a product of local isomorphisms.

use crate::decompose::{irreducible_components, verify_map, Decomposition, Isomorphism};
use crate::dynamics::{map_matrix, vertex_permutation};
use crate::geometry::matrix::kron;
use crate::geometry::{Field, Matrix, Rational};

use super::{InteractionError, LocalGroups};

/// `T` restricted to `A_i ⊠ B_j` equals `X ⊗ Y` into `A_i' ⊠ B_j'`.
#[derive(Debug, Clone)]
pub struct BlockMap<F: Field = Rational> {
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub x: Isomorphism<F>,
    pub y: Isomorphism<F>,
}

#[derive(Debug, Clone)]
pub struct BlockStructure<F: Field = Rational> {
    pub components_a: Decomposition<F>,
    pub components_b: Decomposition<F>,
    /// One entry per block, in `(i, j)` lexicographic order.
    pub blocks: Vec<BlockMap<F>>,
    pub matrix: Matrix<F>,
}

impl<F: Field> BlockStructure<F> {
    /// Block permutation `(i, j) ↦ π(i, j)`.
    pub fn permutation(&self) -> Vec<((usize, usize), (usize, usize))> {
        self.blocks.iter().map(|b| (b.source, b.target)).collect()
    }

    pub fn is_block_preserving(&self) -> bool {
        self.blocks.iter().all(|b| b.source == b.target)
    }

    /// Rebuilds `T` from the block permutation and the per-block local maps.
    pub fn reassemble(&self) -> Matrix<F> {
        let (ca, cb) = (self.components_a.components(), self.components_b.components());
        let a = self.components_a.source();
        let b = self.components_b.source();
        let ab = crate::statespace::min_tensor(a, b);
        let (block_a, block_b) = (self.components_a.block_of(), self.components_b.block_of());
        let local = |comp: &[crate::decompose::Component<F>], k: usize, v: usize| comp[k].vertices.iter().position(|&x| x == v).unwrap();
        let frame = ab.frame();
        let images: Vec<Vec<F>> = frame
            .reference
            .iter()
            .map(|&r| {
                let (va, vb) = ab.pair_of(r);
                let (i, j) = (block_a[va], block_b[vb]);
                let bm = &self.blocks[i * cb.len() + j];
                let xa = bm.x.matrix.mul_vec(ca[i].space.vertex(local(ca, i, va)));
                let yb = bm.y.matrix.mul_vec(cb[j].space.vertex(local(cb, j, vb)));
                kron(&ca[bm.target.0].basis.mul_vec(&xa), &cb[bm.target.1].basis.mul_vec(&yb))
            })
            .collect();
        let w = Matrix::from_columns(ab.ambient_dim(), &images);
        let m = w.mul(&frame.left_inverse);
        if ab.spans_ambient() { m } else { m.add(&frame.complement_projector()) }
    }

    /// The reassembled map agrees with `T` on the composite.
    pub fn verify(&self) -> bool {
        let ab = crate::statespace::min_tensor(self.components_a.source(), self.components_b.source());
        let r = self.reassemble();
        if ab.spans_ambient() {
            r == self.matrix
        } else {
            ab.vertices().iter().all(|v| r.mul_vec(v) == self.matrix.mul_vec(v))
        }
    }
}

/// Splits a reversible `T` on `A ⊠ B` into blockwise product maps over the
/// irreducible components of `A` and `B`; `None` if some block is not sent
/// onto a single block by a product map.
pub fn conditional_structure<F: Field>(
    t: &Matrix<F>,
    groups: &LocalGroups<F>,
) -> Result<Option<BlockStructure<F>>, InteractionError> {
    let ab = groups.composite();
    let perm = vertex_permutation(ab, t).ok_or(InteractionError::NotReversible)?;
    let (a, b) = (groups.space_a(), groups.space_b());
    let (da, db) = (irreducible_components(a), irreducible_components(b));
    let (block_a, block_b) = (da.block_of(), db.block_of());
    let mut blocks = Vec::with_capacity(da.len() * db.len());
    for (i, ci) in da.components().iter().enumerate() {
        for (j, cj) in db.components().iter().enumerate() {
            let mut target = None;
            let mut xmap = vec![usize::MAX; ci.vertices.len()];
            let mut ymap = vec![usize::MAX; cj.vertices.len()];
            for (p, &va) in ci.vertices.iter().enumerate() {
                for (q, &vb) in cj.vertices.iter().enumerate() {
                    let (xa, yb) = ab.pair_of(perm[ab.pair_index(va, vb)]);
                    let here = (block_a[xa], block_b[yb]);
                    if *target.get_or_insert(here) != here {
                        return Ok(None);
                    }
                    if (xmap[p] != usize::MAX && xmap[p] != xa) || (ymap[q] != usize::MAX && ymap[q] != yb) {
                        return Ok(None);
                    }
                    xmap[p] = xa;
                    ymap[q] = yb;
                }
            }
            let (ti, tj) = target.expect("components are nonempty");
            let (ti_c, tj_c) = (&da.components()[ti], &db.components()[tj]);
            let to_local = |verts: &[usize], xs: &[usize]| -> Option<Vec<usize>> {
                xs.iter().map(|x| verts.iter().position(|v| v == x)).collect()
            };
            let (Some(xp), Some(yp)) = (to_local(&ti_c.vertices, &xmap), to_local(&tj_c.vertices, &ymap)) else {
                return Ok(None);
            };
            if xp.len() != ti_c.vertices.len() || yp.len() != tj_c.vertices.len() {
                return Ok(None);
            }
            let iso = |src: &crate::statespace::StateSpace<F>, tgt: &crate::statespace::StateSpace<F>, p: Vec<usize>| {
                let matrix = map_matrix(src, tgt, &p, false);
                verify_map(src, tgt, &matrix, &p).then(|| Isomorphism {
                    source: src.clone(),
                    target: tgt.clone(),
                    matrix,
                    perm: p,
                })
            };
            let (Some(x), Some(y)) = (iso(&ci.space, &ti_c.space, xp), iso(&cj.space, &tj_c.space, yp)) else {
                return Ok(None);
            };
            blocks.push(BlockMap { source: (i, j), target: (ti, tj), x, y });
        }
    }
    let structure = BlockStructure { components_a: da, components_b: db, blocks, matrix: t.clone() };
    debug_assert!(structure.verify());
    Ok(Some(structure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::DEFAULT_SEARCH_BUDGET;
    use crate::interactions::maps::{cnot, controlled_map, swap_map};
    use crate::interactions::tests::groups;
    use crate::statespace::{direct_sum, gbit, point, simplex};

    #[test]
    fn cnot_permutes_blocks() {
        let d1 = simplex::<Rational>(1);
        let s = conditional_structure(&cnot(), &groups(&d1, &d1)).unwrap().unwrap();
        assert_eq!(
            s.permutation(),
            vec![((0, 0), (0, 0)), ((0, 1), (0, 1)), ((1, 0), (1, 1)), ((1, 1), (1, 0))]
        );
        assert!(s.blocks.iter().all(|b| b.x.matrix.is_identity() && b.y.matrix.is_identity()));
        assert!(s.verify());
        assert!(!s.is_block_preserving());
    }

    #[test]
    fn product_on_irreducible_factors() {
        let g = gbit::<Rational>();
        let lg = groups(&g, &g);
        let (x, y) = (lg.a.element(1), lg.b.element(4));
        let s = conditional_structure(&x.matrix.kron(&y.matrix), &lg).unwrap().unwrap();
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].x.perm, x.perm);
        assert_eq!(s.blocks[0].y.perm, y.perm);
        assert!(s.verify());
    }

    #[test]
    fn controlled_rotation() {
        let pp = direct_sum(&point::<Rational>(), &point());
        let g = gbit::<Rational>();
        let lg = LocalGroups::compute(&pp, &g, DEFAULT_SEARCH_BUDGET).unwrap();
        let rotation = lg
            .b
            .elements()
            .iter()
            .find(|e| e.perm == vec![2, 0, 3, 1])
            .expect("quarter turn")
            .clone();
        let t = controlled_map(&pp, &g, &[Matrix::identity(3), rotation.matrix.clone()]).unwrap();
        let s = conditional_structure(&t, &lg).unwrap().unwrap();
        assert!(s.is_block_preserving());
        assert!(s.blocks[0].y.matrix.is_identity());
        assert_eq!(s.blocks[1].y.perm, rotation.perm);
        assert!(s.verify());
    }

    #[test]
    fn swap_has_no_block_product_form_but_is_reversible() {
        let g = gbit::<Rational>();
        assert!(conditional_structure(&swap_map(3), &groups(&g, &g)).unwrap().is_none());
        let d1 = simplex::<Rational>(1);
        let t = Matrix::<Rational>::identity(4).scale(&Rational::from_integer(2.into()));
        assert_eq!(conditional_structure(&t, &groups(&d1, &d1)).unwrap_err(), InteractionError::NotReversible);
    }
}
