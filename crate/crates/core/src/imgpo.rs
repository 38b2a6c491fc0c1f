//! Infinite-metric GP optimization.
//!
//! Each outer iteration walks the partition depths three times:
//!
//! 1. steps (i)-(ii): per depth, take the best cell and keep it only if it
//!    beats every shallower kept cell. GP placeholders picked here are
//!    evaluated first and the selection is redone.
//! 2. step (iii): look ξ levels below each kept cell (ξ is the offset to the
//!    next deeper kept cell, capped by ⌊min(Ξ, Ξ_max)⌋) and drop it if no UCB
//!    over its fully expanded subtree reaches that deeper cell's value. The
//!    first drop ends the pass.
//! 3. steps (iv)-(v): divide the survivors. A new outer child is evaluated
//!    only when its UCB reaches f⁺; otherwise it carries the UCB as a
//!    placeholder value.
//!
//! The search always runs on the unit cube; the objective sees points mapped
//! back into the caller's domain.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp::{GpState, KernelParams};
use crate::partition::{expanded_subtree_centers, CellId, CellValue, Domain, PartitionTree};
use crate::record::{IterationRecord, RunResult, TraceEvent, UnitObjective};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImgpoConfig {
    pub eta: f64,
    pub xi_max: usize,
    /// Stop at the first iteration boundary with N ≥ this.
    pub eval_budget: Option<usize>,
    /// Stop after this many outer iterations.
    pub iter_budget: Option<usize>,
    pub kernel: KernelParams,
    /// Refit the kernel hyperparameters at the end of every iteration.
    pub refit: bool,
}

impl Default for ImgpoConfig {
    fn default() -> Self {
        Self {
            eta: 0.05,
            xi_max: 4,
            eval_budget: Some(300),
            iter_budget: Some(200),
            kernel: KernelParams::default(),
            refit: true,
        }
    }
}

impl ImgpoConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "eta must lie in (0, 1), got {}",
                self.eta
            )));
        }
        if self.xi_max < 1 {
            return Err(Error::InvalidParameter("xi_max must be at least 1".into()));
        }
        if self.eval_budget.is_none() && self.iter_budget.is_none() {
            return Err(Error::InvalidParameter(
                "at least one of the evaluation or iteration budgets must be set".into(),
            ));
        }
        self.kernel.validate()
    }
}

/// Full optimizer state. Points are stored in unit-cube coordinates.
#[derive(Debug, Clone)]
pub struct ImgpoState {
    pub tree: PartitionTree,
    pub gp: GpState,
    pub f_plus: f64,
    pub best_point: Vec<f64>,
    /// Adaptive look-down cap Ξ.
    pub xi: f64,
    /// Largest ξ used so far, Ξ_n.
    pub xi_n: usize,
    pub t: usize,
    pub rho_history: Vec<usize>,
    pub records: Vec<IterationRecord>,
    pub trace: Vec<TraceEvent>,
}

impl ImgpoState {
    fn observe(&mut self, point: &[f64], value: f64) -> Result<()> {
        self.gp.add(point.to_vec(), value)?;
        if value > self.f_plus {
            self.f_plus = value;
            self.best_point = point.to_vec();
        }
        Ok(())
    }
}

/// Ξ update at the end of an iteration.
pub fn xi_update(xi: f64, improved: bool) -> f64 {
    if improved {
        xi + 4.0
    } else {
        (xi - 0.5).max(1.0)
    }
}

/// Re-entrant IMGPO driver: call [`Imgpo::iterate`] repeatedly or [`Imgpo::run`].
pub struct Imgpo<F> {
    state: ImgpoState,
    objective: UnitObjective<F>,
    config: ImgpoConfig,
    started: Instant,
}

impl<F: FnMut(&[f64]) -> f64> Imgpo<F> {
    /// Evaluates the domain center and sets up the tree and GP.
    pub fn new(f: F, domain: Domain, config: ImgpoConfig) -> Result<Self> {
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
        let mut gp = GpState::new(config.kernel)?;
        gp.add(root.clone(), root_value)?;
        Ok(Self {
            state: ImgpoState {
                tree,
                gp,
                f_plus: root_value,
                best_point: root,
                xi: 1.0,
                xi_n: 0,
                t: 0,
                rho_history: Vec::new(),
                records: Vec::new(),
                trace: Vec::new(),
            },
            objective,
            config,
            started,
        })
    }

    pub fn state(&self) -> &ImgpoState {
        &self.state
    }

    pub fn config(&self) -> &ImgpoConfig {
        &self.config
    }

    /// Objective calls made so far.
    pub fn evaluations(&self) -> usize {
        self.objective.calls()
    }

    pub fn best_point(&self) -> Vec<f64> {
        self.objective.domain().from_unit(&self.state.best_point)
    }

    /// True once a budget is spent or no live cell can be divided any more.
    pub fn budget_exhausted(&self) -> bool {
        self.config
            .eval_budget
            .is_some_and(|b| self.state.tree.n_evals >= b)
            || self.config.iter_budget.is_some_and(|b| self.state.t >= b)
            || !self.state.tree.has_divisible()
    }

    /// One outer iteration: steps (i)-(v), Ξ update, hyperparameter refit.
    pub fn iterate(&mut self) -> Result<&IterationRecord> {
        self.state.t += 1;
        let before = self.state.f_plus;

        let candidates = self.steps_i_ii()?;
        let candidates = self.step_iii(candidates)?;
        let rho = self.steps_iv_v(&candidates)?;

        let s = &mut self.state;
        s.xi = xi_update(s.xi, s.f_plus > before);
        if self.config.refit {
            s.gp.refit()?;
        }
        s.rho_history.push(rho);
        let rho_bar = crate::record::rho_bar(&s.rho_history)?;
        s.records.push(IterationRecord {
            t: s.t,
            n: s.tree.n,
            n_evals: s.tree.n_evals,
            n_gp: s.tree.n_gp,
            f_plus: s.f_plus,
            rho_t: rho,
            rho_bar,
            xi: s.xi,
            xi_n: s.xi_n,
            elapsed_s: self.started.elapsed().as_secs_f64(),
        });
        Ok(s.records.last().expect("record just pushed"))
    }

    /// Iterates until a budget is exhausted.
    pub fn run(mut self) -> Result<RunResult> {
        while !self.budget_exhausted() {
            self.iterate()?;
        }
        Ok(self.finish())
    }

    pub fn finish(self) -> RunResult {
        RunResult {
            best_point: self.objective.domain().from_unit(&self.state.best_point),
            f_plus: self.state.f_plus,
            evaluations: self.objective.calls(),
            records: self.state.records,
            trace: self.state.trace,
        }
    }

    /// Steps (i)-(ii): one candidate (or none) per depth.
    pub fn steps_i_ii(&mut self) -> Result<Vec<Option<CellId>>> {
        let s = &mut self.state;
        let depth = s.tree.depth();
        let mut candidates = vec![None; depth + 1];
        let mut v_max = f64::NEG_INFINITY;
        for (h, slot) in candidates.iter_mut().enumerate() {
            while let Some(cell) = s.tree.select_max_at_depth(h) {
                if cell.value < v_max {
                    break;
                }
                if !cell.gp_based {
                    v_max = cell.value;
                    *slot = Some(cell.id);
                    break;
                }
                let (id, center) = (cell.id, cell.center.clone());
                let value = self.objective.eval(&center)?;
                let before = (s.tree.n_evals, s.tree.n_gp);
                s.tree.resolve(id, value)?;
                s.observe(&center, value)?;
                s.trace.push(TraceEvent::Resolve {
                    t: s.t,
                    cell: id,
                    before,
                    after: (s.tree.n_evals, s.tree.n_gp),
                });
            }
        }
        Ok(candidates)
    }

    /// Step (iii): GP screening of the candidates.
    pub fn step_iii(&mut self, mut candidates: Vec<Option<CellId>>) -> Result<Vec<Option<CellId>>> {
        let s = &mut self.state;
        let cap = s.xi.min(self.config.xi_max as f64).floor() as usize;
        for h in 0..candidates.len() {
            let Some(id) = candidates[h] else { continue };
            let Some(xi) = (1..=cap).find(|k| candidates.get(h + k).is_some_and(Option::is_some))
            else {
                continue;
            };
            s.xi_n = s.xi_n.max(xi);
            let deeper = candidates[h + xi].expect("found above");
            let threshold = s.tree.get(deeper).ok_or(Error::NotLive(deeper))?.value;
            let centers = {
                let cell = s.tree.get(id).ok_or(Error::NotLive(id))?;
                expanded_subtree_centers(cell, xi)
            };
            let mut z = f64::NEG_INFINITY;
            for c in &centers {
                z = z.max(s.gp.ucb(c, self.config.eta)?);
            }
            let rejected = z < threshold;
            s.trace.push(TraceEvent::Screen {
                t: s.t,
                depth: h,
                cell: id,
                xi,
                ucb_calls: centers.len(),
                rejected,
            });
            if rejected {
                candidates[h] = None;
                break;
            }
        }
        Ok(candidates)
    }

    /// Steps (iv)-(v): divide surviving candidates with UCB-gated evaluation.
    /// Returns ρ_t, the number of divisions.
    pub fn steps_iv_v(&mut self, candidates: &[Option<CellId>]) -> Result<usize> {
        let eta = self.config.eta;
        let mut v_max = f64::NEG_INFINITY;
        let mut divisions = 0;
        for (h, id) in candidates.iter().enumerate() {
            let Some(id) = *id else { continue };
            let s = &mut self.state;
            let g = s.tree.get(id).ok_or(Error::NotLive(id))?.value;
            if g < v_max {
                continue;
            }
            let ImgpoState {
                tree,
                gp,
                f_plus,
                best_point,
                ..
            } = s;
            let objective = &mut self.objective;
            let children = tree.divide(id, |x| {
                let u = gp.ucb(x, eta)?;
                if u >= *f_plus {
                    let y = objective.eval(x)?;
                    gp.add(x.to_vec(), y)?;
                    if y > *f_plus {
                        *f_plus = y;
                        *best_point = x.to_vec();
                    }
                    v_max = v_max.max(y);
                    Ok(CellValue::evaluated(y))
                } else {
                    Ok(CellValue::gp(u))
                }
            })?;
            divisions += 1;
            s.trace.push(TraceEvent::Divide {
                t: s.t,
                depth: h,
                cell: id,
                children,
            });
        }
        Ok(divisions)
    }
}

/// Runs IMGPO on `f` over `domain` until a budget is exhausted.
pub fn run<F: FnMut(&[f64]) -> f64>(
    f: F,
    domain: &Domain,
    config: &ImgpoConfig,
) -> Result<RunResult> {
    Imgpo::new(f, domain.clone(), *config)?.run()
}
