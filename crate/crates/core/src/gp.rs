//! Exact noiseless Gaussian-process regression with a zero mean function.
//!
//! The kernel matrix is factored once and then extended one row at a time as
//! observations arrive, so adding the N-th point costs O(N²) instead of a full
//! refactorization. A relative diagonal jitter (`1e-10·σ²`, escalated by ×10
//! up to `1e-4·σ²`) keeps clustered partition centers factorable.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-4;
const REFINE_STEPS: usize = 3;
/// Refitting is skipped above this many observations.
pub const REFIT_CAP: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Matern52,
    Gaussian,
}

/// Isotropic stationary kernel hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub kind: KernelKind,
    /// Output scale σ; the prior variance is σ².
    pub sigma: f64,
    pub length_scale: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self {
            kind: KernelKind::Matern52,
            sigma: 1.0,
            length_scale: 0.25,
        }
    }
}

impl KernelParams {
    pub fn matern52(sigma: f64, length_scale: f64) -> Self {
        Self {
            kind: KernelKind::Matern52,
            sigma,
            length_scale,
        }
    }

    pub fn gaussian(sigma: f64, length_scale: f64) -> Self {
        Self {
            kind: KernelKind::Gaussian,
            sigma,
            length_scale,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.sigma) || !ok(self.length_scale) {
            return Err(Error::InvalidParameter(format!(
                "kernel sigma and length scale must be positive and finite (got {}, {})",
                self.sigma, self.length_scale
            )));
        }
        Ok(())
    }

    /// Correlation part of the kernel, i.e. κ/σ², from a squared distance.
    fn correlation(&self, sq_dist: f64) -> f64 {
        match self.kind {
            KernelKind::Matern52 => {
                // g(z) = (1 + z + z²/3)·exp(−z), z = √(5‖x−x'‖²/l)
                let z = (5.0 * sq_dist / self.length_scale).sqrt();
                (1.0 + z + z * z / 3.0) * (-z).exp()
            }
            KernelKind::Gaussian => {
                (-0.5 * sq_dist / (self.length_scale * self.length_scale)).exp()
            }
        }
    }

    #[inline]
    fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        self.sigma * self.sigma * self.correlation(sq_dist(a, b))
    }
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Covariance between two inputs.
pub fn kernel(x: &[f64], x2: &[f64], params: &KernelParams) -> Result<f64> {
    if x.len() != x2.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: x2.len(),
        });
    }
    params.validate()?;
    Ok(params.eval(x, x2))
}

/// Confidence multiplier ς_M = √(2·ln(π²M²/(12η))) for the M-th UCB call.
pub fn confidence_multiplier(m: u64, eta: f64) -> f64 {
    let m = m as f64;
    (2.0 * (PI * PI * m * m / (12.0 * eta)).ln()).sqrt()
}

/// Observed inputs and their exact function values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(points: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: values.len(),
            });
        }
        let mut data = Self::new();
        for (p, v) in points.into_iter().zip(values) {
            data.push(p, v)?;
        }
        Ok(data)
    }

    pub fn push(&mut self, point: Vec<f64>, value: f64) -> Result<()> {
        if let Some(first) = self.points.first() {
            if first.len() != point.len() {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    got: point.len(),
                });
            }
        }
        if self.points.contains(&point) {
            return Err(Error::DuplicatePoint { point });
        }
        self.points.push(point);
        self.values.push(value);
        Ok(())
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Lower-triangular Cholesky factor stored as packed rows (row i holds i+1 entries).
#[derive(Debug, Clone, Default)]
struct Cholesky {
    rows: Vec<Vec<f64>>,
}

impl Cholesky {
    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Solves L·v = b.
    fn forward(&self, b: &[f64]) -> Vec<f64> {
        let mut v = Vec::with_capacity(b.len());
        for (i, row) in self.rows.iter().enumerate() {
            let s: f64 = row[..i].iter().zip(&v).map(|(l, x)| l * x).sum();
            v.push((b[i] - s) / row[i]);
        }
        v
    }

    /// Solves Lᵀ·x = v in place.
    fn backward(&self, v: &mut [f64]) {
        let n = self.len();
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.rows[j][i] * v[j]).sum();
            v[i] = (v[i] - s) / self.rows[i][i];
        }
    }

    /// Appends a row given the new point's covariances with the existing
    /// points (`cross`) and its own diagonal entry. Returns false if the
    /// extended matrix is not numerically positive definite.
    fn try_append(&mut self, cross: &[f64], diag: f64) -> bool {
        let mut row = self.forward(cross);
        let d2 = diag - row.iter().map(|x| x * x).sum::<f64>();
        if !d2.is_finite() || d2 <= 0.0 {
            return false;
        }
        row.push(d2.sqrt());
        self.rows.push(row);
        true
    }

    fn log_det(&self) -> f64 {
        2.0 * self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r[i].ln())
            .sum::<f64>()
    }
}

/// Factors the correlation matrix (unit σ) of `points` with relative jitter,
/// escalating from `start` until it succeeds.
fn factor(points: &[Vec<f64>], params: &KernelParams, start: f64) -> Result<(Cholesky, f64)> {
    let mut jitter = start;
    loop {
        let mut chol = Cholesky::default();
        let ok = points.iter().enumerate().all(|(i, p)| {
            let cross: Vec<f64> = points[..i]
                .iter()
                .map(|q| params.correlation(sq_dist(p, q)))
                .collect();
            chol.try_append(&cross, 1.0 + jitter)
        });
        if ok {
            return Ok((chol, jitter));
        }
        jitter *= 10.0;
        if jitter > JITTER_MAX * (1.0 + 1e-9) {
            return Err(Error::Factorization {
                jitter: jitter / 10.0,
                size: points.len(),
            });
        }
    }
}

/// GP posterior state: data, hyperparameters, cached factor and the UCB call counter.
///
/// The factor is kept for the unit-σ correlation matrix so that changing σ
/// alone only rescales the posterior.
#[derive(Debug, Clone)]
pub struct GpState {
    data: Dataset,
    params: KernelParams,
    chol: Cholesky,
    /// (R + jI)⁻¹·y for the unit-σ correlation matrix R.
    alpha: Vec<f64>,
    jitter: f64,
    ucb_calls: u64,
}

impl GpState {
    pub fn new(params: KernelParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            data: Dataset::new(),
            params,
            chol: Cholesky::default(),
            alpha: Vec::new(),
            jitter: JITTER_START,
            ucb_calls: 0,
        })
    }

    pub fn with_data(data: Dataset, params: KernelParams) -> Result<Self> {
        let mut gp = Self::new(params)?;
        gp.data = data;
        gp.rebuild()?;
        Ok(gp)
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn ucb_calls(&self) -> u64 {
        self.ucb_calls
    }

    /// Current relative jitter level (multiplied by σ² on the diagonal).
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    fn rebuild(&mut self) -> Result<()> {
        let (chol, jitter) = factor(self.data.points(), &self.params, JITTER_START)?;
        self.chol = chol;
        self.jitter = jitter;
        self.update_alpha();
        Ok(())
    }

    /// α = R⁻¹y using the jittered factor, then a few steps of iterative
    /// refinement against the un-jittered R so the mean interpolates the data
    /// to near machine precision rather than to jitter·|α|.
    fn update_alpha(&mut self) {
        let y = self.data.values();
        let solve = |b: &[f64]| {
            let mut v = self.chol.forward(b);
            self.chol.backward(&mut v);
            v
        };
        let mut alpha = solve(y);
        let points = self.data.points();
        let residual = |alpha: &[f64]| -> Vec<f64> {
            points
                .iter()
                .zip(y)
                .map(|(p, yi)| {
                    yi - points
                        .iter()
                        .zip(alpha)
                        .map(|(q, a)| self.params.correlation(sq_dist(p, q)) * a)
                        .sum::<f64>()
                })
                .collect()
        };
        let norm = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut r = residual(&alpha);
        for _ in 0..REFINE_STEPS {
            let before = norm(&r);
            if before == 0.0 {
                break;
            }
            let candidate: Vec<f64> = alpha.iter().zip(solve(&r)).map(|(a, d)| a + d).collect();
            let r_next = residual(&candidate);
            if norm(&r_next) >= before {
                break;
            }
            alpha = candidate;
            r = r_next;
        }
        self.alpha = alpha;
    }

    /// Adds an exact observation and extends the factorization.
    pub fn add(&mut self, point: Vec<f64>, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective { point, value });
        }
        let cross: Vec<f64> = self
            .data
            .points()
            .iter()
            .map(|q| self.params.correlation(sq_dist(&point, q)))
            .collect();
        self.data.push(point, value)?;
        if self.chol.try_append(&cross, 1.0 + self.jitter) {
            self.update_alpha();
            return Ok(());
        }
        match factor(self.data.points(), &self.params, self.jitter * 10.0) {
            Ok((chol, jitter)) => {
                self.chol = chol;
                self.jitter = jitter;
                self.update_alpha();
                Ok(())
            }
            Err(e) => {
                // keep the state consistent with the previous factor
                self.data.points.pop();
                self.data.values.pop();
                Err(e)
            }
        }
    }

    pub fn set_params(&mut self, params: KernelParams) -> Result<()> {
        params.validate()?;
        if params.kind == self.params.kind && params.length_scale == self.params.length_scale {
            self.params = params;
            return Ok(());
        }
        let old = std::mem::replace(&mut self.params, params);
        if let Err(e) = self.rebuild() {
            self.params = old;
            self.rebuild()?;
            return Err(e);
        }
        Ok(())
    }

    /// Posterior mean and variance at `x`. With no data this is the prior (0, σ²).
    pub fn posterior(&self, x: &[f64]) -> Result<(f64, f64)> {
        let s2 = self.params.sigma * self.params.sigma;
        if self.data.is_empty() {
            return Ok((0.0, s2));
        }
        let dim = self.data.points()[0].len();
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: x.len(),
            });
        }
        let k: Vec<f64> = self
            .data
            .points()
            .iter()
            .map(|q| self.params.correlation(sq_dist(x, q)))
            .collect();
        let mu = k.iter().zip(&self.alpha).map(|(a, b)| a * b).sum::<f64>();
        let v = self.chol.forward(&k);
        let var = 1.0 - v.iter().map(|a| a * a).sum::<f64>();
        Ok((mu, (s2 * var).max(0.0)))
    }

    /// U(x|D) = μ(x) + ς_M·σ(x); increments the call counter first.
    pub fn ucb(&mut self, x: &[f64], eta: f64) -> Result<f64> {
        self.ucb_calls += 1;
        let (mu, var) = self.posterior(x)?;
        Ok(mu + confidence_multiplier(self.ucb_calls, eta) * var.sqrt())
    }

    /// L(x|D) = μ(x) − ς_M·σ(x); shares the call counter with [`GpState::ucb`].
    pub fn lcb(&mut self, x: &[f64], eta: f64) -> Result<f64> {
        self.ucb_calls += 1;
        let (mu, var) = self.posterior(x)?;
        Ok(mu - confidence_multiplier(self.ucb_calls, eta) * var.sqrt())
    }

    /// Empirical-Bayes refit of (σ, l). Skipped above [`REFIT_CAP`] observations.
    pub fn refit(&mut self) -> Result<()> {
        if self.data.len() > REFIT_CAP {
            return Ok(());
        }
        let fitted = fit_hyperparameters(&self.data, &self.params);
        self.set_params(fitted)
    }
}

/// Length-scale dependent pieces of the log marginal likelihood:
/// yᵀR⁻¹y and log det R for the unit-σ correlation matrix R (with jitter).
#[derive(Debug, Clone, Copy)]
struct LmlTerms {
    quad: f64,
    log_det: f64,
    n: usize,
}

impl LmlTerms {
    fn compute(data: &Dataset, params: &KernelParams) -> Result<Self> {
        let (chol, _) = factor(data.points(), params, JITTER_START)?;
        let v = chol.forward(data.values());
        Ok(Self {
            quad: v.iter().map(|a| a * a).sum(),
            log_det: chol.log_det(),
            n: data.len(),
        })
    }

    fn at_sigma(&self, sigma: f64) -> f64 {
        let s2 = sigma * sigma;
        let n = self.n as f64;
        -0.5 * self.quad / s2 - 0.5 * (self.log_det + n * s2.ln()) - 0.5 * n * (2.0 * PI).ln()
    }
}

/// log p(y | X, θ) = −½·yᵀK⁻¹y − ½·log det K − (N/2)·log 2π.
pub fn log_marginal_likelihood(data: &Dataset, params: &KernelParams) -> Result<f64> {
    params.validate()?;
    if data.is_empty() {
        return Err(Error::InvalidParameter(
            "log marginal likelihood needs at least one observation".into(),
        ));
    }
    Ok(LmlTerms::compute(data, params)?.at_sigma(params.sigma))
}

/// Deterministic log-space grid search over (σ, l) around `current`, followed
/// by one refinement pass at half the step. Never returns parameters with a
/// lower likelihood than `current`.
pub fn fit_hyperparameters(data: &Dataset, current: &KernelParams) -> KernelParams {
    if data.len() < 2 || current.validate().is_err() {
        return *current;
    }
    let mut cache: Vec<(f64, Option<LmlTerms>)> = Vec::new();
    let mut terms_for = |l: f64| -> Option<LmlTerms> {
        if let Some((_, t)) = cache.iter().find(|(cl, _)| *cl == l) {
            return *t;
        }
        let p = KernelParams {
            length_scale: l,
            ..*current
        };
        let t = LmlTerms::compute(data, &p).ok();
        cache.push((l, t));
        t
    };

    let mut best = *current;
    let mut best_lml = match terms_for(current.length_scale) {
        Some(t) => t.at_sigma(current.sigma),
        None => f64::NEG_INFINITY,
    };

    let mut search =
        |centre: KernelParams, offsets: &[f64], best: &mut KernelParams, best_lml: &mut f64| {
            for &b in offsets {
                let l = centre.length_scale * 10f64.powf(b);
                let Some(t) = terms_for(l) else { continue };
                for &a in offsets {
                    let sigma = centre.sigma * 10f64.powf(a);
                    let lml = t.at_sigma(sigma);
                    if lml.is_finite() && lml > *best_lml {
                        *best_lml = lml;
                        *best = KernelParams {
                            sigma,
                            length_scale: l,
                            ..*current
                        };
                    }
                }
            }
        };

    search(
        *current,
        &[-1.0, -0.5, 0.0, 0.5, 1.0],
        &mut best,
        &mut best_lml,
    );
    let centre = best;
    search(centre, &[-0.25, 0.0, 0.25], &mut best, &mut best_lml);
    best
}
