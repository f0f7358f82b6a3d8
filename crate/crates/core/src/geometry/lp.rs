//! Two-phase primal simplex over a [`Field`] with Bland's anti-cycling rule.
//!
//! In exact mode every pivot is carried out in rational arithmetic, so the
//! optimal points and infeasibility certificates it returns can be verified
//! by direct substitution.

use super::field::Field;
use super::matrix::{dot, zero_vec};

/// Result of `maximize c·x  s.t.  A x = b, x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum StandardOutcome<F> {
    Optimal { x: Vec<F>, value: F },
    /// `y` with `yᵀA ≥ 0` and `yᵀb < 0` (Farkas certificate).
    Infeasible { farkas: Vec<F> },
    Unbounded,
}

struct Tableau<F> {
    m: usize,
    width: usize,
    cells: Vec<F>,
    basis: Vec<usize>,
}

impl<F: Field> Tableau<F> {
    fn at(&self, i: usize, j: usize) -> &F {
        &self.cells[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> &F {
        self.at(i, self.width - 1)
    }

    fn pivot(&mut self, r: usize, c: usize, zrow: &mut [F]) {
        let w = self.width;
        let inv = F::one() / self.at(r, c);
        for j in 0..w {
            let v = self.cells[r * w + j].clone() * &inv;
            self.cells[r * w + j] = v;
        }
        let prow: Vec<F> = self.cells[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.cells[i * w + c].clone();
            if f.is_zero() {
                continue;
            }
            for (j, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    let v = self.cells[i * w + j].clone() - f.clone() * pv;
                    self.cells[i * w + j] = v;
                }
            }
        }
        let f = zrow[c].clone();
        if !f.is_zero() {
            for (j, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    zrow[j] -= &(f.clone() * pv);
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations on columns `0..ncols` until optimal. Returns
    /// false if unbounded.
    fn optimize(&mut self, zrow: &mut [F], ncols: usize) -> bool {
        loop {
            let Some(enter) = (0..ncols).find(|&j| zrow[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, F)> = None;
            for i in 0..self.m {
                let a = self.at(i, enter);
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i).clone() / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => match ratio.compare(lr) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => self.basis[i] < self.basis[*li],
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, enter, zrow);
        }
    }
}

/// Solves `maximize c·x s.t. A x = b, x ≥ 0` with `A` given by rows.
pub fn solve_standard<F: Field>(a: &[Vec<F>], b: &[F], c: &[F]) -> StandardOutcome<F> {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    let signs: Vec<bool> = b.iter().map(|x| x.is_negative()).collect();
    let width = n + m + 1;
    let mut cells = Vec::with_capacity(m * width);
    for i in 0..m {
        assert_eq!(a[i].len(), n, "constraint row has wrong length");
        for j in 0..n {
            cells.push(if signs[i] { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for k in 0..m {
            cells.push(if k == i { F::one() } else { F::zero() });
        }
        cells.push(if signs[i] { -b[i].clone() } else { b[i].clone() });
    }
    let mut t = Tableau { m, width, cells, basis: (n..n + m).collect() };

    // Phase 1: maximize -Σ artificials.
    let mut z = zero_vec::<F>(width);
    for j in 0..n {
        let mut s = F::zero();
        for i in 0..m {
            s -= t.at(i, j);
        }
        z[j] = s;
    }
    let mut total = F::zero();
    for i in 0..m {
        total -= t.rhs(i);
    }
    z[width - 1] = total;
    let bounded = t.optimize(&mut z, n + m);
    debug_assert!(bounded, "phase 1 is always bounded");
    if z[width - 1].is_negative() {
        let farkas = (0..m)
            .map(|i| {
                let y = z[n + i].clone() - &F::one();
                if signs[i] { -y } else { y }
            })
            .collect();
        return StandardOutcome::Infeasible { farkas };
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.m {
        if t.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !t.at(r, j).is_zero()) {
                t.pivot(r, j, &mut z);
                r += 1;
            } else {
                let w = t.width;
                t.cells.drain(r * w..(r + 1) * w);
                t.basis.remove(r);
                t.m -= 1;
            }
        } else {
            r += 1;
        }
    }

    // Phase 2 on the original columns; artificial columns are never entered.
    let mut z2 = zero_vec::<F>(width);
    for (j, cj) in c.iter().enumerate() {
        z2[j] = -cj.clone();
    }
    for i in 0..t.m {
        let bj = t.basis[i];
        if bj < n && !c[bj].is_zero() {
            let cb = c[bj].clone();
            for j in 0..width {
                let v = t.at(i, j);
                if !v.is_zero() {
                    z2[j] += &(cb.clone() * v);
                }
            }
        }
    }
    if !t.optimize(&mut z2, n) {
        return StandardOutcome::Unbounded;
    }
    let mut x = zero_vec::<F>(n);
    for i in 0..t.m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rhs(i).clone();
        }
    }
    let value = dot(c, &x);
    StandardOutcome::Optimal { x, value }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<F> {
    Optimal { x: Vec<F>, value: F },
    Infeasible,
    Unbounded,
}

/// General LP with free or nonnegative variables and mixed constraints;
/// always maximizes.
#[derive(Debug, Clone)]
pub struct LinearProgram<F> {
    free: Vec<bool>,
    objective: Vec<F>,
    rows: Vec<(Vec<F>, Relation, F)>,
}

impl<F: Field> LinearProgram<F> {
    /// `n` variables; `free[j]` marks unrestricted ones.
    pub fn new(free: Vec<bool>) -> Self {
        let n = free.len();
        LinearProgram { free, objective: zero_vec(n), rows: Vec::new() }
    }

    pub fn maximize(mut self, objective: Vec<F>) -> Self {
        assert_eq!(objective.len(), self.free.len());
        self.objective = objective;
        self
    }

    pub fn constraint(&mut self, coeffs: Vec<F>, rel: Relation, rhs: F) {
        assert_eq!(coeffs.len(), self.free.len());
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn solve(&self) -> LpOutcome<F> {
        // Column layout: one column per nonnegative variable, two per free
        // variable (positive and negative part), then one slack per
        // inequality.
        let mut col_of = Vec::with_capacity(self.free.len());
        let mut ncols = 0;
        for &f in &self.free {
            col_of.push(ncols);
            ncols += if f { 2 } else { 1 };
        }
        let n_structural = ncols;
        let n_slack = self.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let total = n_structural + n_slack;
        let mut a = Vec::with_capacity(self.rows.len());
        let mut b = Vec::with_capacity(self.rows.len());
        let mut slack = n_structural;
        for (coeffs, rel, rhs) in &self.rows {
            let mut row = zero_vec::<F>(total);
            for (j, x) in coeffs.iter().enumerate() {
                row[col_of[j]] = x.clone();
                if self.free[j] {
                    row[col_of[j] + 1] = -x.clone();
                }
            }
            match rel {
                Relation::Le => {
                    row[slack] = F::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -F::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            a.push(row);
            b.push(rhs.clone());
        }
        let mut c = zero_vec::<F>(total);
        for (j, x) in self.objective.iter().enumerate() {
            c[col_of[j]] = x.clone();
            if self.free[j] {
                c[col_of[j] + 1] = -x.clone();
            }
        }
        match solve_standard(&a, &b, &c) {
            StandardOutcome::Optimal { x, value } => {
                let vars = (0..self.free.len())
                    .map(|j| {
                        let p = x[col_of[j]].clone();
                        if self.free[j] { p - &x[col_of[j] + 1] } else { p }
                    })
                    .collect();
                LpOutcome::Optimal { x: vars, value }
            }
            StandardOutcome::Infeasible { .. } => LpOutcome::Infeasible,
            StandardOutcome::Unbounded => LpOutcome::Unbounded,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::field::{q, Rational};

    fn r(x: i64) -> Rational {
        q(x, 1)
    }

    #[test]
    fn small_optimum() {
        // max x + y  s.t. x + 2y <= 4, 3x + y <= 6
        let mut lp = LinearProgram::new(vec![false, false]).maximize(vec![r(1), r(1)]);
        lp.constraint(vec![r(1), r(2)], Relation::Le, r(4));
        lp.constraint(vec![r(3), r(1)], Relation::Le, r(6));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![q(8, 5), q(6, 5)]);
                assert_eq!(value, q(14, 5));
            }
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn infeasible_gives_farkas_certificate() {
        // x1 + x2 = 1 and x1 + x2 = 2 with x >= 0.
        let a = vec![vec![r(1), r(1)], vec![r(1), r(1)]];
        let b = vec![r(1), r(2)];
        match solve_standard(&a, &b, &[r(0), r(0)]) {
            StandardOutcome::Infeasible { farkas } => {
                for j in 0..2 {
                    let col: Rational = (0..2).map(|i| farkas[i].clone() * &a[i][j]).sum();
                    assert!(col >= r(0));
                }
                let yb: Rational = (0..2).map(|i| farkas[i].clone() * &b[i]).sum();
                assert!(yb < r(0));
            }
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn unbounded_and_free_variables() {
        let mut lp = LinearProgram::new(vec![true]).maximize(vec![r(1)]);
        lp.constraint(vec![r(1)], Relation::Ge, r(-3));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);

        let mut lp = LinearProgram::new(vec![true]).maximize(vec![r(-1)]);
        lp.constraint(vec![r(1)], Relation::Ge, r(-3));
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => assert_eq!(x, vec![r(-3)]),
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        let b = vec![r(1), r(2)];
        match solve_standard(&a, &b, &[r(1), r(0)]) {
            StandardOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![r(1), r(0)]);
                assert_eq!(value, r(1));
            }
            o => panic!("unexpected {o:?}"),
        }
    }
}
