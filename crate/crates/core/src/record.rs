//! Per-iteration telemetry and trace events shared by all optimizers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{CellId, Domain};

/// Counters and statistics at the end of one outer iteration (or SOO sweep).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub t: usize,
    pub n: usize,
    pub n_evals: usize,
    pub n_gp: usize,
    pub f_plus: f64,
    pub rho_t: usize,
    pub rho_bar: f64,
    pub xi: f64,
    pub xi_n: usize,
    pub elapsed_s: f64,
}

/// Structural events, in execution order.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    Divide {
        t: usize,
        depth: usize,
        cell: CellId,
        children: [CellId; 3],
    },
    /// A GP placeholder replaced by a true evaluation; counters are (N, N_gp).
    Resolve {
        t: usize,
        cell: CellId,
        before: (usize, usize),
        after: (usize, usize),
    },
    /// Step (iii) look-down for one candidate.
    Screen {
        t: usize,
        depth: usize,
        cell: CellId,
        xi: usize,
        ucb_calls: usize,
        rejected: bool,
    },
}

/// Outcome of a complete optimizer run.
#[derive(Debug, Clone)]
pub struct RunResult {
    /// Best truly evaluated point, in the caller's domain coordinates.
    pub best_point: Vec<f64>,
    pub f_plus: f64,
    pub records: Vec<IterationRecord>,
    pub trace: Vec<TraceEvent>,
    /// Objective calls actually made.
    pub evaluations: usize,
}

impl RunResult {
    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }
}

/// ρ̄_t: the largest prefix average of the per-iteration division counts.
pub fn rho_bar(rho_history: &[usize]) -> Result<f64> {
    if rho_history.is_empty() {
        return Err(Error::EmptyHistory);
    }
    let mut sum = 0usize;
    let mut best = f64::NEG_INFINITY;
    for (i, r) in rho_history.iter().enumerate() {
        sum += r;
        best = best.max(sum as f64 / (i + 1) as f64);
    }
    Ok(best)
}

/// Objective wrapper that works on the unit cube and maps into the real domain.
pub(crate) struct UnitObjective<F> {
    f: F,
    domain: Domain,
    calls: usize,
}

impl<F: FnMut(&[f64]) -> f64> UnitObjective<F> {
    pub(crate) fn new(f: F, domain: Domain) -> Self {
        Self {
            f,
            domain,
            calls: 0,
        }
    }

    pub(crate) fn eval(&mut self, u: &[f64]) -> Result<f64> {
        let x = self.domain.from_unit(u);
        let value = (self.f)(&x);
        self.calls += 1;
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective { point: x, value });
        }
        Ok(value)
    }

    pub(crate) fn calls(&self) -> usize {
        self.calls
    }

    pub(crate) fn domain(&self) -> &Domain {
        &self.domain
    }
}
