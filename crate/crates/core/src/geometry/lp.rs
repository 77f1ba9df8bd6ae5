//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! The programs solved here are tiny (a handful of polytope vertices plus one
//! slack per coordinate), so a full tableau is both the simplest and the most
//! predictable choice. Every variable is implicitly constrained to be
//! nonnegative.

use thiserror::Error;

/// Phase-one residual above which a program is declared infeasible
/// (scaled by `1 + max |rhs|`).
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Smallest tableau entry accepted as a pivot.
const PIVOT_TOL: f64 = 1e-9;
/// Reduced costs above `-OPTIMALITY_TOL` are treated as nonnegative. Much
/// smaller values let rounding noise pick entering columns.
const OPTIMALITY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("constraint {row} has {found} coefficients, expected {expected}")]
    Shape {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("simplex did not terminate within {0} pivots")]
    IterationLimit(usize),
    #[error("non-finite coefficient in linear program")]
    NonFinite,
    #[error("solver reported {0} for a program that is feasible and bounded by construction")]
    Unexpected(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    GreaterEq,
    Equal,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::LessEq => Relation::GreaterEq,
            Relation::GreaterEq => Relation::LessEq,
            Relation::Equal => Relation::Equal,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

/// `minimize c·x  subject to  A x (<=|>=|=) b,  x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn minimize(objective: Vec<f64>) -> Self {
        Self {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        let n = self.num_vars();
        for (row, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::Shape {
                    row,
                    expected: n,
                    found: c.coeffs.len(),
                });
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(LpError::NonFinite);
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite);
        }
        Tableau::build(self).run(&self.objective)
    }

    /// Solves a program known to be feasible and bounded, returning its optimum.
    pub fn solve_optimal(&self) -> Result<LpSolution, LpError> {
        match self.solve()? {
            LpOutcome::Optimal(s) => Ok(s),
            LpOutcome::Infeasible => Err(LpError::Unexpected("infeasibility")),
            LpOutcome::Unbounded => Err(LpError::Unexpected("unboundedness")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
    num_structural: usize,
    rhs_scale: f64,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars();
        // Normalize to nonnegative right-hand sides first.
        let normalized: Vec<(Vec<f64>, Relation, f64)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs < 0.0 {
                    (
                        c.coeffs.iter().map(|v| -v).collect(),
                        c.relation.flipped(),
                        -c.rhs,
                    )
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs)
                }
            })
            .collect();

        let num_slack = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Equal)
            .count();
        let num_art = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::LessEq)
            .count();
        let width = n + num_slack + num_art;

        let mut kinds = vec![ColumnKind::Structural; n];
        kinds.extend(std::iter::repeat_n(ColumnKind::Slack, num_slack));
        kinds.extend(std::iter::repeat_n(ColumnKind::Artificial, num_art));

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut next_slack, mut next_art) = (n, n + num_slack);
        let mut rhs_scale: f64 = 0.0;
        for (coeffs, relation, rhs) in normalized {
            let mut row = vec![0.0; width + 1];
            row[..n].copy_from_slice(&coeffs);
            row[width] = rhs;
            rhs_scale = rhs_scale.max(rhs);
            match relation {
                Relation::LessEq => {
                    row[next_slack] = 1.0;
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::GreaterEq => {
                    row[next_slack] = -1.0;
                    row[next_art] = 1.0;
                    basis.push(next_art);
                    next_slack += 1;
                    next_art += 1;
                }
                Relation::Equal => {
                    row[next_art] = 1.0;
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }

        Self {
            rows,
            basis,
            kinds,
            num_structural: n,
            rhs_scale,
        }
    }

    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn reduced_costs(&self, costs: &[f64]) -> Vec<f64> {
        let w = self.width();
        let mut reduced = vec![0.0; w + 1];
        reduced[..w].copy_from_slice(&costs[..w]);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = costs[b];
            if cb != 0.0 {
                for (r, v) in reduced.iter_mut().zip(row) {
                    *r -= cb * v;
                }
            }
        }
        reduced
    }

    fn pivot(&mut self, reduced: &mut [f64], pr: usize, pc: usize) {
        let p = self.rows[pr][pc];
        for v in self.rows[pr].iter_mut() {
            *v /= p;
        }
        self.rows[pr][pc] = 1.0;
        let pivot_row = self.rows[pr].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == pr {
                continue;
            }
            let f = row[pc];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[pc] = 0.0;
            }
        }
        let f = reduced[pc];
        if f != 0.0 {
            for (v, pv) in reduced.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            reduced[pc] = 0.0;
        }
        let rhs = self.width();
        for row in self.rows.iter_mut() {
            if row[rhs] < 0.0 && row[rhs] > -PIVOT_TOL {
                row[rhs] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    /// Returns `false` when the objective is unbounded below.
    fn simplex(&mut self, reduced: &mut [f64], allowed: &[bool]) -> Result<bool, LpError> {
        let rhs = self.width();
        let limit = 10_000 + 200 * (self.rows.len() + rhs);
        for _ in 0..limit {
            // Bland: lowest-index improving column enters.
            let Some(enter) = (0..rhs).find(|&j| allowed[j] && reduced[j] < -OPTIMALITY_TOL)
            else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[enter];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = row[rhs] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - PIVOT_TOL
                            || ((ratio - br).abs() <= PIVOT_TOL && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match leave {
                None => return Ok(false),
                Some((row, _)) => self.pivot(reduced, row, enter),
            }
        }
        Err(LpError::IterationLimit(limit))
    }

    fn run(mut self, objective: &[f64]) -> Result<LpOutcome, LpError> {
        let w = self.width();
        let has_artificial = self.kinds.contains(&ColumnKind::Artificial);

        if has_artificial {
            let phase1: Vec<f64> = self
                .kinds
                .iter()
                .map(|k| if *k == ColumnKind::Artificial { 1.0 } else { 0.0 })
                .collect();
            let mut reduced = self.reduced_costs(&phase1);
            let all = vec![true; w];
            if !self.simplex(&mut reduced, &all)? {
                // The phase-one objective is bounded below by zero.
                return Err(LpError::Unexpected("unbounded phase one"));
            }
            let residual = -reduced[w];
            if residual > FEASIBILITY_TOL * (1.0 + self.rhs_scale) {
                return Ok(LpOutcome::Infeasible);
            }
            self.expel_artificials();
        }

        let mut costs = vec![0.0; w];
        costs[..self.num_structural].copy_from_slice(objective);
        let mut reduced = self.reduced_costs(&costs);
        let allowed: Vec<bool> = self
            .kinds
            .iter()
            .map(|k| *k != ColumnKind::Artificial)
            .collect();
        if !self.simplex(&mut reduced, &allowed)? {
            return Ok(LpOutcome::Unbounded);
        }

        let mut x = vec![0.0; self.num_structural];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.num_structural {
                x[b] = row[w].max(0.0);
            }
        }
        let objective = x.iter().zip(objective).map(|(a, b)| a * b).sum();
        Ok(LpOutcome::Optimal(LpSolution { x, objective }))
    }

    /// Pivots zero-level artificial variables out of the basis, dropping rows
    /// that turn out to be linearly redundant.
    fn expel_artificials(&mut self) {
        let mut scratch = vec![0.0; self.width() + 1];
        let mut i = 0;
        while i < self.rows.len() {
            if self.kinds[self.basis[i]] != ColumnKind::Artificial {
                i += 1;
                continue;
            }
            let col = (0..self.width()).find(|&j| {
                self.kinds[j] != ColumnKind::Artificial && self.rows[i][j].abs() > 1e-9
            });
            match col {
                Some(j) => {
                    self.pivot(&mut scratch, i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}
