//! Exact two-phase simplex over the rationals and the fractional packing
//! number.

use num_traits::{One, Signed, Zero};

use crate::cliques::maximal_cliques;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rational;

/// `maximize objective·x` subject to `rows[k]·x <= rhs[k]`,
/// `0 <= x_i <= upper[i]` (no upper bound when `None`).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    upper: Vec<Option<Rational>>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            rows: Vec::new(),
            rhs: Vec::new(),
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                found: coeffs.len(),
            });
        }
        self.rows.push(coeffs);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn set_upper(&mut self, var: usize, bound: Rational) {
        self.upper[var] = Some(bound);
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[Rational], &Rational)> {
        self.rows.iter().map(Vec::as_slice).zip(&self.rhs)
    }

    /// Returns the same program with its constraint rows permuted.
    pub fn with_row_order(&self, perm: &[usize]) -> Self {
        let mut lp = LinearProgram::new(self.objective.clone());
        lp.upper = self.upper.clone();
        for &k in perm {
            lp.rows.push(self.rows[k].clone());
            lp.rhs.push(self.rhs[k].clone());
        }
        lp
    }

    /// Checks `x` against every constraint exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let bounds_ok = x
            .iter()
            .zip(&self.upper)
            .all(|(xi, ub)| !xi.is_negative() && ub.as_ref().is_none_or(|u| xi <= u));
        bounds_ok
            && self.rows().all(|(row, b)| {
                let lhs: Rational = row.iter().zip(x).map(|(a, xi)| a * xi).sum();
                &lhs <= b
            })
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, xi)| c * xi).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
}

/// Solves `lp` exactly with a dense two-phase tableau and Bland's rule.
pub fn simplex_solve(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.num_vars();
    let mut rows: Vec<(Vec<Rational>, Rational)> =
        lp.rows().map(|(r, b)| (r.to_vec(), b.clone())).collect();
    for (i, ub) in lp.upper.iter().enumerate() {
        if let Some(u) = ub {
            let mut r = vec![Rational::zero(); n];
            r[i] = Rational::one();
            rows.push((r, u.clone()));
        }
    }
    let m = rows.len();
    let n_art = rows.iter().filter(|(_, b)| b.is_negative()).count();
    // Columns: structural | slack | artificial | rhs
    let width = n + m + n_art;
    let mut tab = Tableau {
        a: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        width,
    };
    let mut art = n + m;
    for (k, (coeffs, b)) in rows.into_iter().enumerate() {
        let mut row = vec![Rational::zero(); width + 1];
        let negate = b.is_negative();
        let sign = if negate {
            -Rational::one()
        } else {
            Rational::one()
        };
        for (j, c) in coeffs.into_iter().enumerate() {
            row[j] = &sign * c;
        }
        row[n + k] = sign.clone();
        row[width] = &sign * b;
        if negate {
            row[art] = Rational::one();
            tab.basis.push(art);
            art += 1;
        } else {
            tab.basis.push(n + k);
        }
        tab.a.push(row);
    }

    if n_art > 0 {
        let mut cost = vec![Rational::zero(); width];
        for c in cost.iter_mut().skip(n + m) {
            *c = -Rational::one();
        }
        tab.maximize(&cost, width)?;
        let phase1 = tab.objective(&cost);
        if phase1.is_negative() {
            return Err(Error::Infeasible);
        }
        tab.drive_out_artificials(n + m);
    }

    let mut cost = vec![Rational::zero(); width];
    cost[..n].clone_from_slice(&lp.objective);
    tab.maximize(&cost, n + m)?;

    let mut x = vec![Rational::zero(); n];
    for (row, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.a[row][width].clone();
        }
    }
    let value = lp.objective_value(&x);
    Ok(LpSolution { value, x })
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .zip(&self.a)
            .map(|(&b, row)| &cost[b] * &row[self.width])
            .sum()
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut r = cost[j].clone();
        for (&b, row) in self.basis.iter().zip(&self.a) {
            if !row[j].is_zero() && !cost[b].is_zero() {
                r -= &cost[b] * &row[j];
            }
        }
        r
    }

    /// Bland's rule primal simplex over columns `0..allowed`.
    fn maximize(&mut self, cost: &[Rational], allowed: usize) -> Result<()> {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_positive());
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[col];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for v in self.a[row].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.a[row].clone();
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// After a successful phase one, pivots zero-level artificials out of the
    /// basis where possible. Rows where that is impossible are redundant.
    fn drive_out_artificials(&mut self, first_art: usize) {
        for row in 0..self.a.len() {
            if self.basis[row] < first_art {
                continue;
            }
            if let Some(col) =
                (0..first_art).find(|&j| !self.basis.contains(&j) && !self.a[row][j].is_zero())
            {
                self.pivot(row, col);
            }
        }
    }
}

/// Fractional packing number `α*(G)`: maximize `Σ w_i` with `0 <= w_i <= 1`
/// and `Σ_{i∈c} w_i <= 1` for every maximal clique `c`.
pub fn fractional_packing_number(g: &Graph) -> Result<LpSolution> {
    simplex_solve(&packing_lp(g))
}

pub fn packing_lp(g: &Graph) -> LinearProgram {
    let n = g.n();
    let mut lp = LinearProgram::new(vec![Rational::one(); n]);
    for c in maximal_cliques(g) {
        let row = (0..n)
            .map(|v| {
                if c.contains(v) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        lp.add_row(row, Rational::one()).expect("row width matches");
    }
    for v in 0..n {
        lp.set_upper(v, Rational::one());
    }
    lp
}
