//! Dense vectors and matrices over a [`Field`].

use std::cmp::Ordering;
use std::fmt;

use super::field::Field;

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    F::dot(a, b)
}

pub fn add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

pub fn sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

pub fn scale<F: Field>(a: &[F], s: &F) -> Vec<F> {
    a.iter().map(|x| x.clone() * s).collect()
}

/// `acc += s * v`
pub fn axpy<F: Field>(acc: &mut [F], s: &F, v: &[F]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(s.clone() * x);
        }
    }
}

pub fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(F::is_zero)
}

pub fn zero_vec<F: Field>(n: usize) -> Vec<F> {
    vec![F::zero(); n]
}

pub fn unit_vec<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = zero_vec(n);
    v[i] = F::one();
    v
}

/// Kronecker product `a ⊗ b`, row-major in `a`.
pub fn kron<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.clone() * y);
        }
    }
    out
}

pub fn lex_cmp<F: Field>(a: &[F], b: &[F]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.compare(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    /// Builds from row vectors. Panics if rows are ragged.
    pub fn from_rows(rows: &[Vec<F>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Builds a `dim × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim, "column has wrong length");
            for (i, x) in col.iter().enumerate() {
                m.data[i * columns.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let t = other.transpose();
        let data = (0..self.rows)
            .flat_map(|i| (0..other.cols).map(move |j| (i, j)))
            .map(|(i, j)| F::dot(self.row(i), t.row(j)))
            .collect();
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Covector times matrix: `h ∘ M`.
    pub fn covec_mul(&self, h: &[F]) -> Vec<F> {
        assert_eq!(self.rows, h.len(), "dimension mismatch in covector product");
        let mut out = zero_vec(self.cols);
        for (i, hi) in h.iter().enumerate() {
            axpy(&mut out, hi, self.row(i));
        }
        out
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: add(&self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: sub(&self.data, &other.data),
        }
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: scale(&self.data, s) }
    }

    pub fn kron(&self, other: &Matrix<F>) -> Matrix<F> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a.clone() * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.data.clone();
        let (m, n) = (self.rows, self.cols);
        let mut prev = F::one();
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&r| !a[r * n + col].is_zero()) else {
                continue;
            };
            if p != rank {
                for j in 0..n {
                    a.swap(p * n + j, rank * n + j);
                }
            }
            let pivot = a[rank * n + col].clone();
            for r in rank + 1..m {
                let factor = a[r * n + col].clone();
                for j in col..n {
                    let v = (pivot.clone() * &a[r * n + j] - factor.clone() * &a[rank * n + j]) / &prev;
                    a[r * n + j] = v;
                }
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut a = self.clone();
        let (m, n) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..n {
                    a.data.swap(p * n + j, r * n + j);
                }
            }
            let inv = F::one() / a.get(r, col);
            for j in col..n {
                let v = a.get(r, j).clone() * &inv;
                a.set(r, j, v);
            }
            let pivot_row: Vec<F> = a.row(r).to_vec();
            for i in 0..m {
                if i == r {
                    continue;
                }
                let factor = a.get(i, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for (j, pv) in pivot_row.iter().enumerate().skip(col) {
                    if !pv.is_zero() {
                        let v = a.get(i, j).clone() - factor.clone() * pv;
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (a, pivots)
    }

    /// Some solution of `self · x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vec(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Basis of the right kernel `{x : self · x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = zero_vec(self.cols);
                x[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = -r.get(i, f).clone();
                }
                x
            })
            .collect()
    }

    /// Left inverse of a full-column-rank matrix, `(AᵀA)⁻¹Aᵀ`. It annihilates
    /// the orthogonal complement of the column space.
    pub fn left_inverse(&self) -> Option<Matrix<F>> {
        let t = self.transpose();
        t.mul(self).inverse().map(|g| g.mul(&t))
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix<F>) -> Matrix<F> {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn write_block(&mut self, r0: usize, c0: usize, block: &Matrix<F>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

/// Rank of a list of vectors (as rows).
pub fn rank_of<F: Field>(vectors: &[Vec<F>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors).rank()
}

/// Indices of a maximal linearly independent subfamily, chosen greedily in
/// order.
pub fn independent_subset<F: Field>(vectors: &[Vec<F>]) -> Vec<usize> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let dim = vectors[0].len();
    let m = Matrix::from_columns(dim, vectors);
    m.rref().1
}

/// Echelon basis (RREF rows) of the span of `vectors`.
pub fn echelon_basis<F: Field>(vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(vectors).rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::field::{q, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            &rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::<Rational>::identity(3).rank(), 3);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        // gbit vertices (±1, ±1, 1) as columns
        let g = m(&[&[1, 1, -1, -1], &[1, -1, 1, -1], &[1, 1, 1, 1]]);
        assert_eq!(g.rank(), 3);
    }

    #[test]
    fn rank_of_gbit_by_hand_reduction() {
        // Columns (1,1,1), (1,-1,1), (-1,1,1), (-1,-1,1). Subtracting column 1
        // from the others leaves (0,-2,0), (-2,0,0), (-2,-2,0): two independent
        // directions plus column 1 itself, so rank 3.
        let g = m(&[&[1, 1, -1, -1], &[1, -1, 1, -1], &[1, 1, 1, 1]]);
        assert_eq!(g.rank(), g.transpose().rank());
        assert_eq!(g.rref().1, vec![0, 1, 2]);
    }

    #[test]
    fn inverse_and_solve() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let x = a.solve(&[q(3, 1), q(2, 1)]).unwrap();
        assert_eq!(x, vec![q(1, 1), q(1, 1)]);
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert!(m(&[&[1, 2], &[2, 4]]).solve(&[q(1, 1), q(1, 1)]).is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 1, -1, -1], &[1, -1, 1, -1], &[1, 1, 1, 1]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&a.mul_vec(&ns[0])));
    }

    #[test]
    fn kron_matches_vector_kron() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let v = vec![q(1, 1), q(-1, 1)];
        let w = vec![q(2, 1), q(5, 1)];
        assert_eq!(a.kron(&b).mul_vec(&kron(&v, &w)), kron(&a.mul_vec(&v), &b.mul_vec(&w)));
    }

    #[test]
    fn left_inverse_recovers_coordinates() {
        let basis = m(&[&[1, 0], &[1, 1], &[0, 2]]);
        let li = basis.left_inverse().unwrap();
        assert!(li.mul(&basis).is_identity());
    }
}
