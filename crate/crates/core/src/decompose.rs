//! Direct-sum decomposition of state spaces into irreducible components,
//! isomorphism search, and the classical-subsystem factorization of
//! transitive decomposable spaces.
//!
//! Two vertex blocks can be split off as direct summands exactly when their
//! linear spans are independent (the unit effect keeps the origin out of
//! every affine hull, so the cone and the polytope decompose together). The
//! finest such partition is the set of connected components of the vector
//! matroid on the vertices, computed from fundamental circuits.

use thiserror::Error;

use crate::dynamics::{is_transitive, linear_bijections, map_matrix, DynamicsError, SymmetryGroup, DEFAULT_SEARCH_BUDGET};
use crate::geometry::matrix::{dot, echelon_basis, rank_of};
use crate::geometry::{Field, Matrix, Rational};
use crate::statespace::{min_tensor, simplex, SpaceError, StateSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("state space is not transitive under the supplied group")]
    NotTransitive,
    #[error("supplied group belongs to a different space")]
    GroupMismatch,
    #[error("component {0} is not isomorphic to component 0")]
    ComponentsNotIsomorphic(usize),
    #[error("vertex blocks do not have independent spans")]
    DependentBlocks,
    #[error("vertex blocks do not partition the vertex set")]
    NotAPartition,
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// One direct summand: its vertices in the parent, a basis of its span
/// (as columns), and the summand as a space in its own coordinates.
#[derive(Debug, Clone)]
pub struct Component<F: Field = Rational> {
    pub vertices: Vec<usize>,
    pub basis: Matrix<F>,
    pub space: StateSpace<F>,
}

impl<F: Field> Component<F> {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition<F: Field = Rational> {
    source: StateSpace<F>,
    components: Vec<Component<F>>,
}

impl<F: Field> Decomposition<F> {
    /// Builds a decomposition from an explicit vertex partition, checking
    /// that block spans are independent.
    pub fn from_blocks(space: &StateSpace<F>, blocks: Vec<Vec<usize>>) -> Result<Self, DecomposeError> {
        let mut seen = vec![false; space.vertex_count()];
        for &v in blocks.iter().flatten() {
            if v >= seen.len() || seen[v] {
                return Err(DecomposeError::NotAPartition);
            }
            seen[v] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(DecomposeError::NotAPartition);
        }
        let total: usize = blocks.iter().map(|b| block_rank(space, b)).sum();
        if total != space.span_rank() {
            return Err(DecomposeError::DependentBlocks);
        }
        let mut components = blocks
            .into_iter()
            .enumerate()
            .map(|(k, mut b)| {
                b.sort_unstable();
                extract(space, b, k)
            })
            .collect::<Result<Vec<_>, _>>()?;
        components.sort_by(|a, b| {
            (a.rank(), a.vertices.len(), &a.vertices).cmp(&(b.rank(), b.vertices.len(), &b.vertices))
        });
        for (k, c) in components.iter_mut().enumerate() {
            c.space = c.space.clone().relabeled(format!("{}#{}", space.label(), k));
        }
        Ok(Decomposition { source: space.clone(), components })
    }

    pub fn source(&self) -> &StateSpace<F> {
        &self.source
    }

    pub fn components(&self) -> &[Component<F>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.components.iter().map(|c| c.vertices.clone()).collect()
    }

    /// Component index of every vertex of the source.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.source.vertex_count()];
        for (k, c) in self.components.iter().enumerate() {
            for &v in &c.vertices {
                out[v] = k;
            }
        }
        out
    }

    /// Reassembles the components with direct sums (in component order).
    pub fn reassemble(&self) -> StateSpace<F> {
        let mut iter = self.components.iter();
        let first = iter.next().expect("nonempty decomposition").space.clone();
        iter.fold(first, |acc, c| crate::statespace::direct_sum(&acc, &c.space))
    }
}

fn block_rank<F: Field>(space: &StateSpace<F>, block: &[usize]) -> usize {
    rank_of(&block.iter().map(|&i| space.vertex(i).to_vec()).collect::<Vec<_>>())
}

fn extract<F: Field>(space: &StateSpace<F>, block: Vec<usize>, k: usize) -> Result<Component<F>, SpaceError> {
    let vectors: Vec<Vec<F>> = block.iter().map(|&i| space.vertex(i).to_vec()).collect();
    let basis = Matrix::from_columns(space.ambient_dim(), &echelon_basis(&vectors));
    let li = basis.left_inverse().expect("echelon basis is independent");
    let coords: Vec<Vec<F>> = vectors.iter().map(|v| li.mul_vec(v)).collect();
    let unit = basis.covec_mul(space.unit_effect());
    debug_assert!(coords.iter().all(|c| dot(&unit, c).is_one()));
    let component = StateSpace::new(coords, unit, format!("{}#{}", space.label(), k))?;
    Ok(Component { vertices: block, basis, space: component })
}

/// Finest partition of the vertices into blocks with independent spans.
pub fn irreducible_components<F: Field>(space: &StateSpace<F>) -> Decomposition<F> {
    let n = space.vertex_count();
    let frame = space.frame();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    // Fundamental circuits against the reference basis connect every
    // matroid component.
    for v in 0..n {
        for (k, c) in frame.coords[v].iter().enumerate() {
            if !c.is_zero() {
                let (a, b) = (find(&mut parent, v), find(&mut parent, frame.reference[k]));
                parent[a] = b;
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_block = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if root_block[r] == usize::MAX {
            root_block[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[root_block[r]].push(v);
    }
    Decomposition::from_blocks(space, blocks).expect("matroid components have independent spans")
}

/// A classical degree of freedom exists iff the space splits as a nontrivial
/// direct sum.
pub fn has_classical_dof<F: Field>(space: &StateSpace<F>) -> bool {
    irreducible_components(space).len() >= 2
}

/// Linear bijection between two spaces' vertex sets preserving the unit
/// effect. `matrix` maps the source ambient into the target ambient.
#[derive(Debug, Clone)]
pub struct Isomorphism<F: Field = Rational> {
    pub source: StateSpace<F>,
    pub target: StateSpace<F>,
    pub matrix: Matrix<F>,
    pub perm: Vec<usize>,
}

impl<F: Field> Isomorphism<F> {
    /// Re-checks vertex bijectivity and unit preservation.
    pub fn verify(&self) -> bool {
        verify_map(&self.source, &self.target, &self.matrix, &self.perm)
    }

    pub fn inverse(&self) -> Isomorphism<F> {
        let perm = SymmetryGroup::<F>::inverse_perm(&self.perm);
        Isomorphism {
            matrix: map_matrix(&self.target, &self.source, &perm, false),
            source: self.target.clone(),
            target: self.source.clone(),
            perm,
        }
    }
}

/// `matrix · v_i = w_{perm[i]}` for every source vertex, `perm` a bijection,
/// and `u_target ∘ matrix = u_source` on the source span.
pub fn verify_map<F: Field>(source: &StateSpace<F>, target: &StateSpace<F>, matrix: &Matrix<F>, perm: &[usize]) -> bool {
    if matrix.rows() != target.ambient_dim()
        || matrix.cols() != source.ambient_dim()
        || perm.len() != source.vertex_count()
        || source.vertex_count() != target.vertex_count()
    {
        return false;
    }
    let mut hit = vec![false; target.vertex_count()];
    for (i, &j) in perm.iter().enumerate() {
        if j >= hit.len() || hit[j] || matrix.mul_vec(source.vertex(i)) != target.vertex(j) {
            return false;
        }
        hit[j] = true;
    }
    let pulled = matrix.covec_mul(target.unit_effect());
    source.vertices().iter().all(|v| dot(&pulled, v).is_one())
}

pub fn spaces_isomorphic<F: Field>(a: &StateSpace<F>, b: &StateSpace<F>) -> Result<Option<Isomorphism<F>>, DynamicsError> {
    spaces_isomorphic_with_budget(a, b, DEFAULT_SEARCH_BUDGET)
}

pub fn spaces_isomorphic_with_budget<F: Field>(
    a: &StateSpace<F>,
    b: &StateSpace<F>,
    budget: u64,
) -> Result<Option<Isomorphism<F>>, DynamicsError> {
    let perms = linear_bijections(a, b, false, budget)?;
    Ok(perms.into_iter().next().map(|perm| Isomorphism {
        matrix: map_matrix(a, b, &perm, false),
        source: a.clone(),
        target: b.clone(),
        perm,
    }))
}

/// `S ≅ Δ_N ⊠ C` for a transitive decomposable space.
#[derive(Debug, Clone)]
pub struct ClassicalSubsystem<F: Field = Rational> {
    /// Index of the classical simplex `Δ_N`.
    pub n: usize,
    pub component: StateSpace<F>,
    /// Isomorphism from `Δ_N ⊠ C` onto the space.
    pub iso: Isomorphism<F>,
}

/// Factorizes a transitive space with `N + 1 ≥ 2` irreducible components as
/// `Δ_N ⊠ C`; `None` if the space is irreducible.
pub fn classical_subsystem<F: Field>(
    space: &StateSpace<F>,
    group: &SymmetryGroup<F>,
) -> Result<Option<ClassicalSubsystem<F>>, DecomposeError> {
    if group.space() != space {
        return Err(DecomposeError::GroupMismatch);
    }
    if !is_transitive(group) {
        return Err(DecomposeError::NotTransitive);
    }
    let dec = irreducible_components(space);
    if dec.len() < 2 {
        return Ok(None);
    }
    let c = dec.components()[0].space.clone();
    let product = min_tensor(&simplex(dec.len() - 1), &c);
    let dc = c.ambient_dim();
    let mut matrix = Matrix::zeros(space.ambient_dim(), product.ambient_dim());
    for (i, comp) in dec.components().iter().enumerate() {
        let iso = spaces_isomorphic(&c, &comp.space)?.ok_or(DecomposeError::ComponentsNotIsomorphic(i))?;
        matrix.write_block(0, i * dc, &comp.basis.mul(&iso.matrix));
    }
    let perm = product
        .vertices()
        .iter()
        .map(|v| space.vertex_index(&matrix.mul_vec(v)))
        .collect::<Option<Vec<usize>>>()
        .ok_or(DecomposeError::DependentBlocks)?;
    let iso = Isomorphism { source: product, target: space.clone(), matrix, perm };
    debug_assert!(iso.verify());
    Ok(Some(ClassicalSubsystem { n: dec.len() - 1, component: c, iso }))
}
