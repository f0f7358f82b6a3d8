//! Brute-force oracles. They share no algorithmic code with the library:
//! elimination, hull membership, facets and symmetry are recomputed here by
//! exhaustive enumeration over small instances.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Signed, Zero};
use polygpt::{Rational, StateSpace};

pub type Vector = Vec<Rational>;

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(rows: &mut [Vector]) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..cols {
                    let d = &rows[r][k] * &f;
                    rows[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rref(&mut vectors.to_vec()).len()
}

/// Solves `Σ x_k cols[k] = target`, if solvable.
pub fn solve_combination(cols: &[Vector], target: &[Rational]) -> Option<Vector> {
    let n = cols.len();
    let mut rows: Vec<Vector> = (0..target.len())
        .map(|i| cols.iter().map(|c| c[i].clone()).chain([target[i].clone()]).collect())
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][n].clone();
    }
    Some(x)
}

/// Indices of a maximal independent subset, greedily in order.
pub fn greedy_basis(vectors: &[Vector]) -> Vec<usize> {
    let mut chosen: Vec<Vector> = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        chosen.push(v.clone());
        if rank(&chosen) == chosen.len() {
            idx.push(i);
        } else {
            chosen.pop();
        }
    }
    idx
}

/// Coordinates of every vertex in a basis of vertices.
pub fn vertex_coords(vertices: &[Vector]) -> (Vec<usize>, Vec<Vector>) {
    let basis = greedy_basis(vertices);
    let cols: Vec<Vector> = basis.iter().map(|&b| vertices[b].clone()).collect();
    let coords = vertices.iter().map(|v| solve_combination(&cols, v).expect("vertex lies in its own span")).collect();
    (basis, coords)
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Convex membership by Carathéodory: some affinely independent subset of at
/// most `rank` generators carries `p` with non-negative weights summing to 1.
pub fn brute_in_hull(p: &[Rational], gens: &[Vector]) -> bool {
    let lift = |v: &[Rational]| -> Vector { v.iter().cloned().chain([Rational::one()]).collect() };
    let lifted: Vec<Vector> = gens.iter().map(|g| lift(g)).collect();
    let target = lift(p);
    let r = rank(&lifted);
    for k in 1..=r {
        for s in subsets(gens.len(), k) {
            let cols: Vec<Vector> = s.iter().map(|&i| lifted[i].clone()).collect();
            if rank(&cols) < k {
                continue;
            }
            if let Some(x) = solve_combination(&cols, &target) {
                if x.iter().all(|w| !w.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

/// Every face as a vertex mask: intersections of facets, found from
/// hyperplanes through `rank - 1` independent vertices in span coordinates.
/// Vertices are assumed to lie on an affine hyperplane off the origin.
pub fn brute_faces(vertices: &[Vector]) -> BTreeSet<u64> {
    let n = vertices.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let (_, coords) = vertex_coords(vertices);
    let r = coords.first().map_or(0, Vec::len);
    let mut facets = BTreeSet::new();
    if r >= 2 {
        for s in subsets(n, r - 1) {
            let mut rows: Vec<Vector> = s.iter().map(|&i| coords[i].clone()).collect();
            if rank(&rows) < r - 1 {
                continue;
            }
            let pivots = rref(&mut rows);
            let free = (0..r).find(|c| !pivots.contains(c)).expect("one free column");
            let mut h = vec![Rational::zero(); r];
            h[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                h[pc] = -rows[row][free].clone();
            }
            let values: Vec<Rational> =
                coords.iter().map(|c| c.iter().zip(&h).map(|(a, b)| a * b).sum::<Rational>()).collect();
            let pos = values.iter().any(Signed::is_positive);
            let neg = values.iter().any(Signed::is_negative);
            if pos && neg {
                continue;
            }
            let mask = values.iter().enumerate().filter(|(_, v)| v.is_zero()).fold(0u64, |m, (i, _)| m | (1 << i));
            facets.insert(mask);
        }
    }
    let mut faces: BTreeSet<u64> = BTreeSet::from([all]);
    if n > 0 {
        faces.insert(0);
    }
    let mut frontier: Vec<u64> = vec![all];
    while let Some(f) = frontier.pop() {
        for &g in &facets {
            let m = f & g;
            if faces.insert(m) {
                frontier.push(m);
            }
        }
    }
    faces
}

/// Does the vertex permutation extend to a linear map of the span?
pub fn perm_is_linear(vertices: &[Vector], perm: &[usize]) -> bool {
    let (basis, coords) = vertex_coords(vertices);
    vertices.iter().enumerate().all(|(v, _)| {
        let dim = vertices[0].len();
        let mut image = vec![Rational::zero(); dim];
        for (k, &b) in basis.iter().enumerate() {
            for (x, y) in image.iter_mut().zip(&vertices[perm[b]]) {
                *x += &coords[v][k] * y;
            }
        }
        image == vertices[perm[v]]
    })
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All vertex permutations of a space that extend linearly, by trying every
/// permutation.
pub fn brute_symmetries(space: &StateSpace) -> Vec<Vec<usize>> {
    let vs = space.vertices().to_vec();
    let mut out: Vec<Vec<usize>> = permutations(vs.len()).into_iter().filter(|p| perm_is_linear(&vs, p)).collect();
    out.sort();
    out
}

/// All set partitions of `0..n`.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for x in 0..n {
        let mut next = Vec::new();
        for p in out {
            for b in 0..=p.len() {
                let mut q: Vec<Vec<usize>> = p.clone();
                if b == p.len() {
                    q.push(vec![x]);
                } else {
                    q[b].push(x);
                }
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// The finest vertex partition whose block spans add up to the whole span.
pub fn brute_decomposition(vertices: &[Vector]) -> BTreeSet<Vec<usize>> {
    let total = rank(vertices);
    let valid: Vec<Vec<Vec<usize>>> = set_partitions(vertices.len())
        .into_iter()
        .filter(|p| {
            p.iter().map(|b| rank(&b.iter().map(|&i| vertices[i].clone()).collect::<Vec<_>>())).sum::<usize>()
                == total
        })
        .collect();
    let most = valid.iter().map(Vec::len).max().expect("the trivial partition is valid");
    let finest: HashSet<BTreeSet<Vec<usize>>> =
        valid.into_iter().filter(|p| p.len() == most).map(|p| p.into_iter().collect()).collect();
    assert_eq!(finest.len(), 1, "finest valid partition is unique");
    finest.into_iter().next().unwrap()
}

/// Composite vertex permutations `(i, j) ↦ (x_j(i), y_i(j))` over every
/// choice of local families, kept when they extend linearly.
pub fn brute_lris(
    composite: &StateSpace,
    na: usize,
    nb: usize,
    group_a: &[Vec<usize>],
    group_b: &[Vec<usize>],
) -> BTreeSet<Vec<usize>> {
    let families = |group: &[Vec<usize>], len: usize| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|f: Vec<usize>| {
                    (0..group.len()).map(move |g| {
                        let mut h = f.clone();
                        h.push(g);
                        h
                    })
                })
                .collect();
        }
        out
    };
    let vs = composite.vertices().to_vec();
    let mut found = BTreeSet::new();
    for xs in families(group_a, nb) {
        for ys in families(group_b, na) {
            let mut perm = vec![0; na * nb];
            for i in 0..na {
                for j in 0..nb {
                    perm[i * nb + j] = group_a[xs[j]][i] * nb + group_b[ys[i]][j];
                }
            }
            let mut seen = perm.clone();
            seen.sort_unstable();
            if seen.windows(2).all(|w| w[0] != w[1]) && perm_is_linear(&vs, &perm) {
                found.insert(perm);
            }
        }
    }
    found
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

pub fn ints(v: &[i64]) -> Vector {
    v.iter().map(|&x| int(x)).collect()
}
