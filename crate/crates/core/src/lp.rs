//! Thin deterministic wrapper over the `microlp` simplex solver.

use microlp::{ComparisonOp, OptimizationDirection, Problem, SolveOutcome};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub(crate) enum Cmp {
    Le,
    Ge,
    Eq,
}

pub(crate) enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

/// A linear program over real variables with box bounds and sparse rows.
pub(crate) struct LinearProgram {
    maximize: bool,
    objective: Vec<f64>,
    bounds: Vec<(f64, f64)>,
    rows: Vec<(Vec<(usize, f64)>, Cmp, f64)>,
}

impl LinearProgram {
    pub(crate) fn new(maximize: bool) -> Self {
        LinearProgram {
            maximize,
            objective: Vec::new(),
            bounds: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub(crate) fn add_var(&mut self, cost: f64, lo: f64, hi: f64) -> usize {
        self.objective.push(cost);
        self.bounds.push((lo, hi));
        self.objective.len() - 1
    }

    pub(crate) fn add_row(&mut self, terms: Vec<(usize, f64)>, cmp: Cmp, rhs: f64) {
        self.rows.push((terms, cmp, rhs));
    }

    pub(crate) fn solve(&self) -> Result<LpOutcome> {
        let dir = if self.maximize {
            OptimizationDirection::Maximize
        } else {
            OptimizationDirection::Minimize
        };
        let mut problem = Problem::new(dir);
        let vars: Vec<_> = self
            .objective
            .iter()
            .zip(&self.bounds)
            .map(|(&c, &b)| problem.add_var(c, b))
            .collect();
        for (terms, cmp, rhs) in &self.rows {
            let expr: Vec<_> = terms
                .iter()
                .filter(|(_, c)| *c != 0.0)
                .map(|&(i, c)| (vars[i], c))
                .collect();
            let op = match cmp {
                Cmp::Le => ComparisonOp::Le,
                Cmp::Ge => ComparisonOp::Ge,
                Cmp::Eq => ComparisonOp::Eq,
            };
            problem.add_constraint(expr.as_slice(), op, *rhs);
        }
        match problem.solve() {
            Ok(SolveOutcome::Solution(sol)) => Ok(LpOutcome::Optimal {
                value: sol.objective(),
                x: vars.iter().map(|&v| sol.var_value_raw(v)).collect(),
            }),
            Ok(SolveOutcome::Interrupted(_)) => Err(Error::Lp("solve interrupted".into())),
            Err(microlp::Error::Infeasible) => Ok(LpOutcome::Infeasible),
            Err(microlp::Error::Unbounded) => Ok(LpOutcome::Unbounded),
            Err(e) => Err(Error::Lp(e.to_string())),
        }
    }
}
