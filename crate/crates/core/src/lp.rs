//! Exact two-phase primal simplex over the rationals.
//!
//! Solves `min c·x` subject to rows `a·x >= b`, `x >= 0`, and optional
//! fixings `x_j = 0`. Bland's least-index rule prevents cycling.

use std::collections::HashSet;

use num::{BigInt, Signed, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::inequality::LinearInequality;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub num_vars: usize,
    pub rows: Vec<LinearInequality>,
    pub objective: Vec<Rational>,
    /// Variables forced to zero.
    pub fixed_zero: Vec<usize>,
    seen: HashSet<(Vec<i64>, i64)>,
}

impl LpProblem {
    pub fn new(objective: Vec<Rational>) -> Self {
        LpProblem {
            num_vars: objective.len(),
            rows: Vec::new(),
            objective,
            fixed_zero: Vec::new(),
            seen: HashSet::new(),
        }
    }

    /// Adds a row unless an identical normalized row is present. Returns whether it was new.
    pub fn add_row(&mut self, row: LinearInequality) -> Result<bool> {
        if row.dim() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, got: row.dim() });
        }
        let row = row.normalized();
        if !self.seen.insert((row.coeffs.clone(), row.rhs)) {
            return Ok(false);
        }
        self.rows.push(row);
        Ok(true)
    }

    pub fn fix_zero(&mut self, j: usize) {
        if !self.fixed_zero.contains(&j) {
            self.fixed_zero.push(j);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub value: Rational,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs; the last entry is minus the objective value.
    obj: Vec<Rational>,
    width: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..=self.width).filter(|&j| !prow[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                let d = &f * &prow[j];
                row[j] -= d;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Runs Bland-rule iterations over the columns accepted by `allowed`.
    fn optimize(&mut self, allowed: &dyn Fn(usize) -> bool) -> Result<()> {
        loop {
            let Some(c) = (0..self.width).find(|&j| allowed(j) && self.obj[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return Err(Error::Unbounded) };
            self.pivot(r, c);
        }
    }
}

/// Exact optimum of the problem, or `Infeasible` / `Unbounded`.
pub fn lp_solve(p: &LpProblem) -> Result<LpSolution> {
    let n = p.num_vars;
    if p.objective.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.objective.len() });
    }
    let m = p.rows.len();
    // Columns: structural 0..n, surplus n..n+m, artificial n+m..n+2m.
    let width = n + 2 * m;
    let mut rows = Vec::with_capacity(m);
    for (i, row) in p.rows.iter().enumerate() {
        if row.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.dim() });
        }
        let sign = if row.rhs < 0 { -1 } else { 1 };
        let mut t = vec![Rational::zero(); width + 1];
        for (j, &a) in row.coeffs.iter().enumerate() {
            if a != 0 {
                t[j] = Rational::from_integer(BigInt::from(sign * a));
            }
        }
        t[n + i] = Rational::from_integer(BigInt::from(-sign));
        t[n + m + i] = Rational::from_integer(BigInt::from(1));
        t[width] = Rational::from_integer(BigInt::from(sign * row.rhs));
        rows.push(t);
    }
    let mut obj = vec![Rational::zero(); width + 1];
    for row in &rows {
        for j in (0..n + m).chain(std::iter::once(width)) {
            if !row[j].is_zero() {
                obj[j] -= &row[j];
            }
        }
    }
    let mut tab = Tableau { rows, basis: (n + m..width).collect(), obj, width, pivots: 0 };
    let fixed = |j: usize| j < n && p.fixed_zero.contains(&j);

    tab.optimize(&|j| j < n + m && !fixed(j))?;
    if !tab.obj[width].is_zero() {
        return Err(Error::Infeasible);
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n + m {
            match (0..n + m).find(|&j| !fixed(j) && !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut obj = vec![Rational::zero(); width + 1];
    obj[..n].clone_from_slice(&p.objective);
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n && !p.objective[b].is_zero() {
            let cb = p.objective[b].clone();
            for j in 0..=width {
                if !tab.rows[i][j].is_zero() {
                    let d = &cb * &tab.rows[i][j];
                    obj[j] -= d;
                }
            }
        }
    }
    tab.obj = obj;
    tab.optimize(&|j| j < n + m && !fixed(j))?;

    let mut x = vec![Rational::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rhs(i).clone();
        }
    }
    let value = -tab.obj[width].clone();
    debug_assert_eq!(value, x.iter().zip(&p.objective).map(|(a, b)| a * b).sum::<Rational>());
    Ok(LpSolution { x, value, pivots: tab.pivots })
}
