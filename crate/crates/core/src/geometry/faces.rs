//! Face lattices of polytopes given by their vertices.
//!
//! Faces are vertex-index sets stored as bitmasks. Enumeration tests every
//! subset with [`is_face`], so the vertex count is bounded by a configurable
//! subset cap.

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::hull::is_face;
use super::GeometryError;

/// Default cap on the number of vertex subsets examined.
pub const DEFAULT_SUBSET_CAP: u64 = 1 << 16;

/// A face, identified by the set of vertices it contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Face {
    mask: u64,
}

impl Face {
    pub fn from_mask(mask: u64) -> Self {
        Face { mask }
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Face { mask: indices.iter().fold(0, |m, &i| m | (1u64 << i)) }
    }

    pub fn empty() -> Self {
        Face { mask: 0 }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, vertex: usize) -> bool {
        self.mask >> vertex & 1 == 1
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    /// Image under a vertex permutation (`perm[i]` is the image of `i`).
    pub fn permuted(&self, perm: &[usize]) -> Face {
        Face::from_indices(&self.indices().iter().map(|&i| perm[i]).collect::<Vec<_>>())
    }

    /// Canonical order: by cardinality, then lexicographic on sorted indices.
    pub fn canonical_cmp(&self, other: &Face) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.indices().cmp(&other.indices()))
    }
}

#[derive(Debug, Clone)]
pub struct FaceLattice {
    vertex_count: usize,
    faces: Vec<Face>,
    index: HashMap<u64, usize>,
    joins: Vec<u32>,
}

impl FaceLattice {
    fn from_faces(vertex_count: usize, mut faces: Vec<Face>) -> Self {
        faces.sort_by(Face::canonical_cmp);
        let index: HashMap<u64, usize> = faces.iter().enumerate().map(|(i, f)| (f.mask, i)).collect();
        let n = faces.len();
        let mut joins = vec![0u32; n * n];
        for i in 0..n {
            for j in i..n {
                let union = faces[i].mask | faces[j].mask;
                // Faces are sorted by size, so the first face containing the
                // union is the smallest one, which is the intersection of all
                // faces containing it.
                let k = faces
                    .iter()
                    .position(|f| union & !f.mask == 0)
                    .expect("top face contains everything");
                joins[i * n + j] = k as u32;
                joins[j * n + i] = k as u32;
            }
        }
        FaceLattice { vertex_count, faces, index, joins }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn bottom(&self) -> Face {
        self.faces[0]
    }

    pub fn top(&self) -> Face {
        *self.faces.last().expect("lattice has a top")
    }

    pub fn position(&self, face: &Face) -> Option<usize> {
        self.index.get(&face.mask).copied()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.index.contains_key(&face.mask)
    }

    /// Minimal face containing both arguments. Panics if either is not a
    /// face of this lattice.
    pub fn join(&self, a: &Face, b: &Face) -> Face {
        let i = self.position(a).expect("first argument is not a face of this lattice");
        let j = self.position(b).expect("second argument is not a face of this lattice");
        self.faces[self.joins[i * self.faces.len() + j] as usize]
    }

    /// Minimal face containing an arbitrary vertex set.
    pub fn closure(&self, set: &Face) -> Face {
        *self
            .faces
            .iter()
            .find(|f| set.is_subset_of(f))
            .expect("top face contains everything")
    }

    /// Number of faces of each cardinality, indexed by vertex count.
    pub fn size_profile(&self) -> Vec<usize> {
        let mut counts = vec![0; self.vertex_count + 1];
        for f in &self.faces {
            counts[f.len()] += 1;
        }
        counts
    }
}

/// Enumerates every face by testing all vertex subsets.
pub fn face_lattice<F: Field>(gens: &[Vec<F>], subset_cap: u64) -> Result<FaceLattice, GeometryError> {
    let n = gens.len();
    let needed = if n >= 63 { u64::MAX } else { 1u64 << n };
    if n >= 63 || needed > subset_cap {
        return Err(GeometryError::SizeGuard { needed, cap: subset_cap });
    }
    let masks: Vec<u64> = (0..needed)
        .into_par_iter()
        .map(|mask| -> Result<Option<u64>, GeometryError> {
            let face = Face::from_mask(mask);
            Ok(is_face(gens, &face.indices())?.is_face.then_some(mask))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(FaceLattice::from_faces(n, masks.into_iter().map(Face::from_mask).collect()))
}
