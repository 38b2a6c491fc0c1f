//! SOO and BaMSOO reference optimizers on the same ternary partition.
//!
//! One sweep visits depths 0..=min(depth(T), h_max(n)) (bounds fixed at the
//! start of the sweep) and divides the best leaf at each depth when its value
//! is at least the best value divided earlier in the sweep. SOO evaluates
//! every new child. BaMSOO evaluates a child only when its UCB reaches f⁺ and
//! otherwise stores the LCB as a placeholder, which is evaluated for real if
//! the leaf is ever selected.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp::{GpState, KernelParams};
use crate::partition::{CellValue, Domain, PartitionTree};
use crate::record::{rho_bar, IterationRecord, RunResult, TraceEvent, UnitObjective};

/// Depth cap as a function of the division count n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HmaxRule {
    /// ⌊√n⌋, at least 1.
    Sqrt,
    Constant(usize),
}

impl HmaxRule {
    pub fn h_max(&self, n: usize) -> usize {
        match self {
            HmaxRule::Sqrt => ((n as f64).sqrt().floor() as usize).max(1),
            HmaxRule::Constant(h) => (*h).max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SooConfig {
    pub hmax_rule: HmaxRule,
    pub eval_budget: Option<usize>,
    pub iter_budget: Option<usize>,
}

impl Default for SooConfig {
    fn default() -> Self {
        Self {
            hmax_rule: HmaxRule::Sqrt,
            eval_budget: Some(300),
            iter_budget: Some(200),
        }
    }
}

impl SooConfig {
    fn validate(&self) -> Result<()> {
        if self.eval_budget.is_none() && self.iter_budget.is_none() {
            return Err(Error::InvalidParameter(
                "at least one of the evaluation or iteration budgets must be set".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BamsooConfig {
    pub soo: SooConfig,
    pub eta: f64,
    pub kernel: KernelParams,
    pub refit: bool,
}

impl Default for BamsooConfig {
    fn default() -> Self {
        Self {
            soo: SooConfig::default(),
            eta: 0.05,
            kernel: KernelParams::default(),
            refit: true,
        }
    }
}

struct Gate {
    gp: GpState,
    eta: f64,
    refit: bool,
}

/// Sweep-based optimizer; `gate` is `None` for plain SOO.
pub struct Sweeper<F> {
    tree: PartitionTree,
    objective: UnitObjective<F>,
    gate: Option<Gate>,
    config: SooConfig,
    f_plus: f64,
    best_point: Vec<f64>,
    t: usize,
    rho_history: Vec<usize>,
    records: Vec<IterationRecord>,
    trace: Vec<TraceEvent>,
    started: Instant,
    stalled: bool,
}

impl<F: FnMut(&[f64]) -> f64> Sweeper<F> {
    pub fn soo(f: F, domain: Domain, config: SooConfig) -> Result<Self> {
        Self::new(f, domain, config, None)
    }

    pub fn bamsoo(f: F, domain: Domain, config: BamsooConfig) -> Result<Self> {
        if !(config.eta > 0.0 && config.eta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "eta must lie in (0, 1), got {}",
                config.eta
            )));
        }
        let gate = Gate {
            gp: GpState::new(config.kernel)?,
            eta: config.eta,
            refit: config.refit,
        };
        Self::new(f, domain, config.soo, Some(gate))
    }

    fn new(f: F, domain: Domain, config: SooConfig, mut gate: Option<Gate>) -> Result<Self> {
        config.validate()?;
        let started = Instant::now();
        let dim = domain.dim();
        let mut objective = UnitObjective::new(f, domain);
        let mut root_value = 0.0;
        let tree = PartitionTree::init(Domain::unit(dim), |c| {
            root_value = objective.eval(c)?;
            Ok(CellValue::evaluated(root_value))
        })?;
        let root = tree.level(0)[0].center.clone();
        if let Some(g) = gate.as_mut() {
            g.gp.add(root.clone(), root_value)?;
        }
        Ok(Self {
            tree,
            objective,
            gate,
            config,
            f_plus: root_value,
            best_point: root,
            t: 0,
            rho_history: Vec::new(),
            records: Vec::new(),
            trace: Vec::new(),
            started,
            stalled: false,
        })
    }

    pub fn tree(&self) -> &PartitionTree {
        &self.tree
    }

    pub fn f_plus(&self) -> f64 {
        self.f_plus
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    pub fn budget_exhausted(&self) -> bool {
        self.stalled
            || self
                .config
                .eval_budget
                .is_some_and(|b| self.tree.n_evals >= b)
            || self.config.iter_budget.is_some_and(|b| self.t >= b)
    }

    fn observe(&mut self, x: &[f64], y: f64) {
        if y > self.f_plus {
            self.f_plus = y;
            self.best_point = x.to_vec();
        }
    }

    /// One sweep over the admissible depths.
    pub fn iterate(&mut self) -> Result<&IterationRecord> {
        self.t += 1;
        let h_top = self
            .tree
            .depth()
            .min(self.config.hmax_rule.h_max(self.tree.n));
        let mut v_max = f64::NEG_INFINITY;
        let mut divisions = 0;
        for h in 0..=h_top {
            // select, resolving placeholders until a real value is on top
            let id = loop {
                let Some(cell) = self.tree.select_max_at_depth(h) else {
                    break None;
                };
                if !cell.gp_based {
                    break Some(cell.id);
                }
                let (id, center) = (cell.id, cell.center.clone());
                let y = self.objective.eval(&center)?;
                let before = (self.tree.n_evals, self.tree.n_gp);
                self.tree.resolve(id, y)?;
                if let Some(g) = self.gate.as_mut() {
                    g.gp.add(center.clone(), y)?;
                }
                self.observe(&center, y);
                self.trace.push(TraceEvent::Resolve {
                    t: self.t,
                    cell: id,
                    before,
                    after: (self.tree.n_evals, self.tree.n_gp),
                });
            };
            let Some(id) = id else { continue };
            let g = self.tree.get(id).ok_or(Error::NotLive(id))?.value;
            if g < v_max {
                continue;
            }
            v_max = g;

            let Self {
                tree,
                objective,
                gate,
                f_plus,
                best_point,
                ..
            } = self;
            let children = tree.divide(id, |x| {
                if let Some(g) = gate.as_mut() {
                    if g.gp.ucb(x, g.eta)? < *f_plus {
                        return Ok(CellValue::gp(g.gp.lcb(x, g.eta)?));
                    }
                }
                let y = objective.eval(x)?;
                if let Some(g) = gate.as_mut() {
                    g.gp.add(x.to_vec(), y)?;
                }
                if y > *f_plus {
                    *f_plus = y;
                    *best_point = x.to_vec();
                }
                Ok(CellValue::evaluated(y))
            })?;
            divisions += 1;
            self.trace.push(TraceEvent::Divide {
                t: self.t,
                depth: h,
                cell: id,
                children,
            });
        }
        if divisions == 0 {
            self.stalled = true;
        }
        if let Some(g) = self.gate.as_mut() {
            if g.refit {
                g.gp.refit()?;
            }
        }
        self.rho_history.push(divisions);
        self.records.push(IterationRecord {
            t: self.t,
            n: self.tree.n,
            n_evals: self.tree.n_evals,
            n_gp: self.tree.n_gp,
            f_plus: self.f_plus,
            rho_t: divisions,
            rho_bar: rho_bar(&self.rho_history)?,
            xi: 0.0,
            xi_n: 0,
            elapsed_s: self.started.elapsed().as_secs_f64(),
        });
        Ok(self.records.last().expect("record just pushed"))
    }

    pub fn run(mut self) -> Result<RunResult> {
        while !self.budget_exhausted() {
            self.iterate()?;
        }
        Ok(RunResult {
            best_point: self.objective.domain().from_unit(&self.best_point),
            f_plus: self.f_plus,
            evaluations: self.objective.calls(),
            records: self.records,
            trace: self.trace,
        })
    }
}

pub fn soo_run<F: FnMut(&[f64]) -> f64>(
    f: F,
    domain: &Domain,
    config: &SooConfig,
) -> Result<RunResult> {
    Sweeper::soo(f, domain.clone(), *config)?.run()
}

pub fn bamsoo_run<F: FnMut(&[f64]) -> f64>(
    f: F,
    domain: &Domain,
    config: &BamsooConfig,
) -> Result<RunResult> {
    Sweeper::bamsoo(f, domain.clone(), *config)?.run()
}
