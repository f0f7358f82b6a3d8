//! Reversible transformation groups of polytope state spaces, transitivity,
//! and the face-lattice automorphisms they induce.

pub mod search;

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::geometry::{Face, FaceLattice, Field, Matrix, Rational};
use crate::statespace::StateSpace;

pub use search::{gram_invariants, linear_bijections, map_matrix, vertex_signatures, BudgetExceeded};

/// Default cap on search nodes for symmetry and isomorphism searches.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("matrix is not a reversible transformation of '{0}'")]
    NotReversible(String),
    #[error("face lattice does not belong to this space")]
    LatticeMismatch,
}

impl From<BudgetExceeded> for DynamicsError {
    fn from(b: BudgetExceeded) -> Self {
        DynamicsError::BudgetExceeded(b.0)
    }
}

/// An invertible linear map that fixes the unit effect and permutes the
/// vertices of its space.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversibleMap<F: Field = Rational> {
    pub matrix: Matrix<F>,
    pub inverse: Matrix<F>,
    /// `perm[i]` is the index of the image of vertex `i`.
    pub perm: Vec<usize>,
}

impl<F: Field> ReversibleMap<F> {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        self.matrix.mul_vec(v)
    }
}

/// The complete finite group of reversible maps of a space.
#[derive(Debug, Clone)]
pub struct SymmetryGroup<F: Field = Rational> {
    space: StateSpace<F>,
    elements: Vec<ReversibleMap<F>>,
    generators: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

impl<F: Field> SymmetryGroup<F> {
    pub fn space(&self) -> &StateSpace<F> {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in canonical order (lexicographic vertex permutation; the
    /// identity comes first).
    pub fn elements(&self) -> &[ReversibleMap<F>] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ReversibleMap<F> {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Element index for a vertex permutation, if it belongs to the group.
    pub fn find_perm(&self, perm: &[usize]) -> Option<usize> {
        self.index.get(perm).copied()
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn compose_perm(outer: &[usize], inner: &[usize]) -> Vec<usize> {
        inner.iter().map(|&i| outer[i]).collect()
    }

    pub fn inverse_perm(p: &[usize]) -> Vec<usize> {
        let mut inv = vec![0; p.len()];
        for (i, &j) in p.iter().enumerate() {
            inv[j] = i;
        }
        inv
    }

    /// Orbit partition of the vertices, each orbit sorted, orbits ordered by
    /// their smallest vertex.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.space.vertex_count();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for v in 0..n {
            if seen[v] {
                continue;
            }
            let mut orbit: Vec<usize> = self.elements.iter().map(|g| g.perm[v]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &w in &orbit {
                seen[w] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }
}

fn generated_closure(gens: &[Vec<usize>], n: usize) -> HashSet<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = SymmetryGroup::<Rational>::compose_perm(g, &p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

/// Builds a group from an already-closed list of vertex permutations.
pub(crate) fn group_from_perms<F: Field>(space: &StateSpace<F>, mut perms: Vec<Vec<usize>>) -> SymmetryGroup<F> {
    perms.sort();
    let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let matrices: Vec<Matrix<F>> = perms.iter().map(|p| map_matrix(space, space, p, true)).collect();
    let elements = perms
        .iter()
        .zip(&matrices)
        .map(|(p, m)| {
            let inv = index[&SymmetryGroup::<F>::inverse_perm(p)];
            ReversibleMap { matrix: m.clone(), inverse: matrices[inv].clone(), perm: p.clone() }
        })
        .collect();
    let mut generators = Vec::new();
    let mut closure = generated_closure(&[], space.vertex_count());
    for (i, p) in perms.iter().enumerate() {
        if !closure.contains(p) {
            generators.push(i);
            let gens: Vec<Vec<usize>> = generators.iter().map(|&g| perms[g].clone()).collect();
            closure = generated_closure(&gens, space.vertex_count());
        }
    }
    SymmetryGroup { space: space.clone(), elements, generators, index }
}

/// Every linear map of the span that fixes `u` and permutes the vertices.
pub fn reversible_maps<F: Field>(space: &StateSpace<F>, budget: u64) -> Result<SymmetryGroup<F>, DynamicsError> {
    let perms = linear_bijections(space, space, true, budget)?;
    Ok(group_from_perms(space, perms))
}

/// Invertible, `u ∘ M = u`, and a permutation of the vertices.
pub fn is_reversible_map<F: Field>(space: &StateSpace<F>, m: &Matrix<F>) -> bool {
    vertex_permutation(space, m).is_some()
}

/// The vertex permutation of a reversible map, or `None` if `m` is not one.
pub fn vertex_permutation<F: Field>(space: &StateSpace<F>, m: &Matrix<F>) -> Option<Vec<usize>> {
    let d = space.ambient_dim();
    if m.rows() != d || m.cols() != d || m.rank() != d {
        return None;
    }
    if m.covec_mul(space.unit_effect()) != space.unit_effect() {
        return None;
    }
    let mut perm = Vec::with_capacity(space.vertex_count());
    let mut used = vec![false; space.vertex_count()];
    for v in space.vertices() {
        let j = space.vertex_index(&m.mul_vec(v))?;
        if used[j] {
            return None;
        }
        used[j] = true;
        perm.push(j);
    }
    Some(perm)
}

/// Single orbit on the pure states?
pub fn is_transitive<F: Field>(group: &SymmetryGroup<F>) -> bool {
    group.orbits().len() == 1
}

/// The face permutation induced by a reversible map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceAutomorphism {
    pub vertex_perm: Vec<usize>,
    /// `face_map[i]` is the lattice position of the image of face `i`.
    pub face_map: Vec<usize>,
}

impl FaceAutomorphism {
    pub fn is_identity(&self) -> bool {
        self.face_map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Cycle lengths of the induced permutation restricted to faces with the
    /// given number of vertices.
    pub fn cycle_type(&self, lattice: &FaceLattice, size: usize) -> Vec<usize> {
        let mut seen = vec![false; self.face_map.len()];
        let mut cycles = Vec::new();
        for (start, f) in lattice.faces().iter().enumerate() {
            if f.len() != size || seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.face_map[i];
                len += 1;
            }
            cycles.push(len);
        }
        cycles.sort_unstable();
        cycles
    }
}

/// `f ↦ T(f)` on the face lattice; checks that every image is a face of the
/// same size and that the map is a bijection.
pub fn induced_face_automorphism<F: Field>(
    space: &StateSpace<F>,
    map: &Matrix<F>,
    lattice: &FaceLattice,
) -> Result<FaceAutomorphism, DynamicsError> {
    if lattice.vertex_count() != space.vertex_count() {
        return Err(DynamicsError::LatticeMismatch);
    }
    let not_rev = || DynamicsError::NotReversible(space.label().to_string());
    let perm = vertex_permutation(space, map).ok_or_else(not_rev)?;
    let mut face_map = Vec::with_capacity(lattice.len());
    let mut hit = vec![false; lattice.len()];
    for f in lattice.faces() {
        let image: Face = f.permuted(&perm);
        let j = lattice.position(&image).ok_or_else(not_rev)?;
        if image.len() != f.len() || hit[j] {
            return Err(not_rev());
        }
        hit[j] = true;
        face_map.push(j);
    }
    Ok(FaceAutomorphism { vertex_perm: perm, face_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::field::q;
    use crate::geometry::{face_lattice, DEFAULT_SUBSET_CAP};
    use crate::statespace::{gbit, house, point, simplex};

    fn r(x: i64) -> Rational {
        q(x, 1)
    }

    #[test]
    fn group_orders() {
        assert_eq!(reversible_maps(&point::<Rational>(), DEFAULT_SEARCH_BUDGET).unwrap().order(), 1);
        assert_eq!(reversible_maps(&simplex::<Rational>(2), DEFAULT_SEARCH_BUDGET).unwrap().order(), 6);
        assert_eq!(reversible_maps(&gbit::<Rational>(), DEFAULT_SEARCH_BUDGET).unwrap().order(), 8);
    }

    #[test]
    fn elements_are_reversible_with_inverses() {
        let g = gbit::<Rational>();
        let group = reversible_maps(&g, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(group.element(0).is_identity());
        for e in group.elements() {
            assert!(e.matrix.mul(&e.inverse).is_identity());
            assert_eq!(vertex_permutation(&g, &e.matrix).as_deref(), Some(e.perm.as_slice()));
        }
        assert!(group.generators().len() <= 3);
    }

    #[test]
    fn reversibility_checks() {
        let d1 = simplex::<Rational>(1);
        let swap = Matrix::from_rows(&[vec![r(0), r(1)], vec![r(1), r(0)]]);
        assert!(is_reversible_map(&d1, &swap));
        let proj = Matrix::from_rows(&[vec![r(1), r(1)], vec![r(0), r(0)]]);
        assert!(!is_reversible_map(&d1, &proj));
        let g = gbit::<Rational>();
        let quarter = Matrix::from_rows(&[vec![r(0), r(-1), r(0)], vec![r(1), r(0), r(0)], vec![r(0), r(0), r(1)]]);
        assert!(is_reversible_map(&g, &quarter));
    }

    #[test]
    fn transitivity() {
        for s in [simplex::<Rational>(3), gbit()] {
            let group = reversible_maps(&s, DEFAULT_SEARCH_BUDGET).unwrap();
            assert!(is_transitive(&group));
        }
        let h = house::<Rational>();
        let group = reversible_maps(&h, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(!is_transitive(&group));
        let apex = h.vertex_index(&[r(0), r(2), r(1)]).unwrap();
        assert!(group.orbits().contains(&vec![apex]));
    }

    #[test]
    fn quarter_rotation_cycles_vertices_and_edges() {
        let g = gbit::<Rational>();
        let lattice = face_lattice(g.vertices(), DEFAULT_SUBSET_CAP).unwrap();
        let quarter = Matrix::from_rows(&[vec![r(0), r(-1), r(0)], vec![r(1), r(0), r(0)], vec![r(0), r(0), r(1)]]);
        let auto = induced_face_automorphism(&g, &quarter, &lattice).unwrap();
        assert_eq!(auto.cycle_type(&lattice, 1), vec![4]);
        assert_eq!(auto.cycle_type(&lattice, 2), vec![4]);
        let id = induced_face_automorphism(&g, &Matrix::identity(3), &lattice).unwrap();
        assert!(id.is_identity());
        let proj = Matrix::from_rows(&[vec![r(1), r(0), r(0)], vec![r(0), r(0), r(0)], vec![r(0), r(0), r(1)]]);
        assert!(induced_face_automorphism(&g, &proj, &lattice).is_err());
    }
}
