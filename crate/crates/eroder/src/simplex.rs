//! Dense exact-rational simplex over `BigRational`.
//!
//! Standard form: minimize `c.x` subject to `A x = b`, `x >= 0`. Two-phase
//! method with Bland's pivoting rule, which cannot cycle, so every verdict
//! (Optimal / Infeasible / Unbounded) is exact. Problem sizes in this crate
//! are tiny (a few dozen variables), so no effort is spent on sparsity.

use crate::exact::Rat;
use num::{Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rat>>, // m rows, each ncols + 1 entries; rhs last
    cost: Vec<Rat>,      // reduced costs, ncols + 1 entries; last = -objective
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        debug_assert!(!piv.is_zero());
        for v in self.rows[row].iter_mut() {
            *v /= &piv;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering = lowest-index column with negative reduced
    /// cost, leaving = among minimal-ratio rows the one with the lowest
    /// basic-variable index. Returns false on unboundedness.
    fn run(&mut self, active_cols: usize) -> bool {
        loop {
            let entering = (0..active_cols).find(|&j| self.cost[j].is_negative());
            let entering = match entering {
                Some(j) => j,
                None => return true,
            };
            let mut leave: Option<usize> = None;
            let mut best: Option<Rat> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][entering];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && self.basis[i] < self.basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
            match leave {
                Some(i) => self.pivot(i, entering),
                None => return false,
            }
        }
    }
}

/// Minimize `objective . x` over `{x >= 0 : rows_i . x = rhs_i}`.
pub fn solve(rows: &[Vec<Rat>], rhs: &[Rat], objective: &[Rat]) -> LpOutcome {
    let m = rows.len();
    let n = objective.len();
    assert_eq!(rhs.len(), m);
    for r in rows {
        assert_eq!(r.len(), n);
    }

    // Phase 1: artificial variable per row, minimize their sum.
    let ncols = n + m;
    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        cost: vec![Rat::zero(); ncols + 1],
        basis: (n..n + m).collect(),
        ncols,
    };
    for i in 0..m {
        let negate = rhs[i].is_negative();
        let mut row: Vec<Rat> = Vec::with_capacity(ncols + 1);
        for j in 0..n {
            row.push(if negate { -&rows[i][j] } else { rows[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { Rat::from_integer(1.into()) } else { Rat::zero() });
        }
        row.push(if negate { -&rhs[i] } else { rhs[i].clone() });
        t.rows.push(row);
    }
    // Reduced costs for min(sum of artificials) with artificials basic.
    for j in 0..=ncols {
        let mut s = Rat::zero();
        for i in 0..m {
            s += &t.rows[i][j];
        }
        if j < n || j == ncols {
            t.cost[j] = -s;
        }
    }

    // Phase 1 objective is bounded below by 0, so run() cannot report
    // unboundedness here.
    let ok = t.run(n);
    debug_assert!(ok);
    if !t.cost[ncols].is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase 2: real objective, artificial columns frozen out.
    t.cost = vec![Rat::zero(); ncols + 1];
    for j in 0..n {
        t.cost[j] = objective[j].clone();
    }
    for i in 0..t.rows.len() {
        let cb = objective[t.basis[i]].clone();
        if cb.is_zero() {
            continue;
        }
        let row = t.rows[i].clone();
        for (v, p) in t.cost.iter_mut().zip(&row) {
            *v -= &cb * p;
        }
    }
    if !t.run(n) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![Rat::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(i).clone();
        }
    }
    let value = -t.cost[ncols].clone();
    LpOutcome::Optimal { x, value }
}

/// Find any `x >= 0` with `A x = b`, or report infeasibility.
pub fn feasible_point(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = rows.first().map_or(0, |r| r.len());
    match solve(rows, rhs, &vec![Rat::zero(); n]) {
        LpOutcome::Optimal { x, .. } => Some(x),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn optimal_basic() {
        // min -x1 - x2  s.t.  x1 + x2 + s = 4, x1 + 3x2 + t = 6
        let rows = vec![
            vec![rat_int(1), rat_int(1), rat_int(1), rat_int(0)],
            vec![rat_int(1), rat_int(3), rat_int(0), rat_int(1)],
        ];
        let rhs = vec![rat_int(4), rat_int(6)];
        let obj = vec![rat_int(-1), rat_int(-1), rat_int(0), rat_int(0)];
        match solve(&rows, &rhs, &obj) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(-4)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_system() {
        // x = 1 and x = 2 simultaneously
        let rows = vec![vec![rat_int(1)], vec![rat_int(1)]];
        let rhs = vec![rat_int(1), rat_int(2)];
        assert_eq!(feasible_point(&rows, &rhs), None);
    }

    #[test]
    fn unbounded_detected() {
        // min -x1 s.t. x1 - x2 = 0 (x1 can grow with x2)
        let rows = vec![vec![rat_int(1), rat_int(-1)]];
        let rhs = vec![rat_int(0)];
        let obj = vec![rat_int(-1), rat_int(0)];
        assert_eq!(solve(&rows, &rhs, &obj), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_handled() {
        // -x = -3 has the solution x = 3
        let rows = vec![vec![rat_int(-1)]];
        let rhs = vec![rat_int(-3)];
        let x = feasible_point(&rows, &rhs).unwrap();
        assert_eq!(x[0], rat_int(3));
    }

    #[test]
    fn fractional_solution_exact() {
        // x1 + 2x2 = 1, 3x1 + x2 = 1 -> x = (1/5, 2/5)
        let rows = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(3), rat_int(1)],
        ];
        let rhs = vec![rat_int(1), rat_int(1)];
        let x = feasible_point(&rows, &rhs).unwrap();
        assert_eq!(x, vec![rat(1, 5), rat(2, 5)]);
    }
}
