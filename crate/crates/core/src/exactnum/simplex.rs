//! Exact linear programming by the two-phase dense simplex method.
//!
//! All tableau arithmetic is rational, so optima and witnesses are exact.
//! Pivot selection follows Bland's rule (smallest eligible index for both
//! the entering column and, on ratio ties, the leaving basic variable),
//! which rules out cycling even on degenerate tableaus.

use super::Rational;
use num_traits::Zero;
use std::fmt;

/// Direction of optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Relation of a constraint row: `coeffs · x ≤ rhs` or `coeffs · x = rhs`.
/// A `≥` row is expressed by negating both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

/// One linear constraint over the program's variables.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint { coeffs, relation: Relation::Le, rhs }
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint { coeffs, relation: Relation::Eq, rhs }
    }
}

/// A linear program over free (sign-unrestricted) variables.
///
/// Sign restrictions are ordinary constraints; internally each variable is
/// split into a difference of nonnegative parts before the tableau is built.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn minimize(objective: Vec<Rational>, constraints: Vec<Constraint>) -> Self {
        LinearProgram { sense: Sense::Minimize, objective, constraints }
    }

    pub fn maximize(objective: Vec<Rational>, constraints: Vec<Constraint>) -> Self {
        LinearProgram { sense: Sense::Maximize, objective, constraints }
    }
}

/// Exact optimum together with an optimal point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub optimum: Rational,
    pub witness: Vec<Rational>,
}

/// Failure modes of [`solve_lp`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    Infeasible,
    Unbounded,
    Malformed(String),
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::Infeasible => write!(f, "linear program is infeasible"),
            LpError::Unbounded => write!(f, "linear program is unbounded"),
            LpError::Malformed(msg) => write!(f, "malformed linear program: {msg}"),
        }
    }
}

impl std::error::Error for LpError {}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    cost: Vec<Rational>,
    /// Negated current objective value of the minimized cost vector.
    cost_rhs: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_zero() {
            for entry in self.rows[r].iter_mut() {
                if !entry.is_zero() {
                    *entry *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nrows = self.rows.len();
        for i in 0..nrows {
            if i == r {
                continue;
            }
            let factor = self.rows[i][c].clone();
            if factor.is_zero() {
                continue;
            }
            for (entry, p) in self.rows[i].iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *entry -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        let factor = self.cost[c].clone();
        if !factor.is_zero() {
            for (entry, p) in self.cost.iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *entry -= &factor * p;
                }
            }
            self.cost_rhs -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations under Bland's rule over the first
    /// `active_cols` columns.  Returns `false` when an entering column with
    /// no positive row entry proves the program unbounded.
    fn optimize(&mut self, active_cols: usize) -> bool {
        loop {
            let Some(entering) = (0..active_cols).find(|&j| self.cost[j] < Rational::zero())
            else {
                return true;
            };
            let mut leaving: Option<usize> = None;
            let mut best_ratio: Option<Rational> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][entering];
                if *a <= Rational::zero() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best_ratio {
                    None => true,
                    Some(best) => {
                        ratio < *best
                            || (ratio == *best
                                && self.basis[i] < self.basis[leaving.expect("ratio set")])
                    }
                };
                if better {
                    best_ratio = Some(ratio);
                    leaving = Some(i);
                }
            }
            match leaving {
                Some(r) => self.pivot(r, entering),
                None => return false,
            }
        }
    }
}

/// Solves a linear program exactly.
///
/// Returns the optimum value and one optimal assignment of the original
/// (free) variables, or reports infeasibility/unboundedness exactly.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let n = lp.objective.len();
    for (i, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(LpError::Malformed(format!(
                "constraint {i} has {} coefficients, expected {n}",
                c.coeffs.len()
            )));
        }
    }
    let m = lp.constraints.len();
    let num_le = lp
        .constraints
        .iter()
        .filter(|c| c.relation == Relation::Le)
        .count();
    let split = 2 * n;
    let structural = split + num_le;

    // Assemble constraint rows over [x⁺ | x⁻ | slacks]; normalize each row
    // to a nonnegative right-hand side.
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let mut slack_basis: Vec<Option<usize>> = Vec::with_capacity(m);
    let mut slack_idx = 0;
    for c in &lp.constraints {
        let mut row = vec![Rational::zero(); structural];
        for (j, a) in c.coeffs.iter().enumerate() {
            if !a.is_zero() {
                row[j] = a.clone();
                row[n + j] = -a.clone();
            }
        }
        let mut b = c.rhs.clone();
        let mut slack_col = None;
        if c.relation == Relation::Le {
            let col = split + slack_idx;
            slack_idx += 1;
            row[col] = Rational::from_integer(1.into());
            slack_col = Some(col);
        }
        if b < Rational::zero() {
            for entry in row.iter_mut() {
                if !entry.is_zero() {
                    *entry = -entry.clone();
                }
            }
            b = -b;
            // The slack now enters with coefficient −1 and cannot start basic.
            slack_col = None;
        }
        rows.push(row);
        rhs.push(b);
        slack_basis.push(slack_col);
    }

    // Add one artificial column per row that lacks a ready-made basic slack.
    let art_rows: Vec<usize> = (0..m).filter(|&i| slack_basis[i].is_none()).collect();
    let total = structural + art_rows.len();
    for row in rows.iter_mut() {
        row.resize(total, Rational::zero());
    }
    let mut basis = vec![0usize; m];
    for (k, &i) in art_rows.iter().enumerate() {
        let col = structural + k;
        rows[i][col] = Rational::from_integer(1.into());
        basis[i] = col;
    }
    for (i, slack) in slack_basis.iter().enumerate() {
        if let Some(col) = *slack {
            basis[i] = col;
        }
    }

    let mut tab = Tableau {
        rows,
        rhs,
        cost: vec![Rational::zero(); total],
        cost_rhs: Rational::zero(),
        basis,
    };

    if !art_rows.is_empty() {
        // Phase one: minimize the sum of artificials.
        for col in structural..total {
            tab.cost[col] = Rational::from_integer(1.into());
        }
        for &i in &art_rows {
            let row = tab.rows[i].clone();
            let b = tab.rhs[i].clone();
            for (entry, p) in tab.cost.iter_mut().zip(row.iter()) {
                if !p.is_zero() {
                    *entry -= p;
                }
            }
            tab.cost_rhs -= &b;
        }
        let bounded = tab.optimize(total);
        debug_assert!(bounded, "phase one is bounded below by zero");
        if !tab.cost_rhs.is_zero() {
            return Err(LpError::Infeasible);
        }
        // Drive leftover artificials out of the basis; rows they cannot
        // leave are redundant and get dropped.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= structural {
                match (0..structural).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.rhs.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for row in tab.rows.iter_mut() {
            row.truncate(structural);
        }
    }

    // Phase two: minimize the (sense-normalized) objective.
    let mut cost = vec![Rational::zero(); structural];
    for (j, c) in lp.objective.iter().enumerate() {
        let c = match lp.sense {
            Sense::Minimize => c.clone(),
            Sense::Maximize => -c.clone(),
        };
        if !c.is_zero() {
            cost[j] = c.clone();
            cost[n + j] = -c;
        }
    }
    tab.cost = cost;
    tab.cost_rhs = Rational::zero();
    for i in 0..tab.rows.len() {
        let cb = tab.cost[tab.basis[i]].clone();
        if cb.is_zero() {
            continue;
        }
        let row = tab.rows[i].clone();
        let b = tab.rhs[i].clone();
        for (entry, p) in tab.cost.iter_mut().zip(row.iter()) {
            if !p.is_zero() {
                *entry -= &cb * p;
            }
        }
        tab.cost_rhs -= &cb * &b;
    }
    if !tab.optimize(structural) {
        return Err(LpError::Unbounded);
    }

    let mut vals = vec![Rational::zero(); structural];
    for (i, &col) in tab.basis.iter().enumerate() {
        vals[col] = tab.rhs[i].clone();
    }
    let witness: Vec<Rational> = (0..n).map(|j| &vals[j] - &vals[n + j]).collect();
    let minimized = -tab.cost_rhs.clone();
    let optimum = match lp.sense {
        Sense::Minimize => minimized,
        Sense::Maximize => -minimized,
    };
    Ok(LpSolution { optimum, witness })
}
