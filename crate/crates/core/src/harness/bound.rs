//! Exponential simple-regret bound for IMGPO given the run's counters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs of the regret bound. `p` may be `f64::INFINITY` (then D^{1/p} = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// Scale L of the semi-metric ℓ(x, x') ≤ L‖x − x'‖_p^α.
    pub l: f64,
    pub alpha: f64,
    pub p: f64,
    pub c: f64,
    pub dim: usize,
    /// β = sup ½‖x − x'‖_∞ over the domain.
    pub beta: f64,
    pub rho_bar: f64,
    pub xi_n: f64,
    pub n_evals: f64,
    pub n_gp: f64,
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && !v.is_nan();
        if !(pos(self.l) && pos(self.alpha) && pos(self.c) && pos(self.beta) && pos(self.rho_bar))
            || self.p < 1.0
            || self.dim == 0
            || self.xi_n < 0.0
            || self.n_evals < 0.0
            || self.n_gp < 0.0
        {
            return Err(Error::InvalidParameter(format!(
                "invalid bound parameters {self:?}"
            )));
        }
        Ok(())
    }

    /// λ = 3^(−α/(2·C·D·ρ̄)).
    pub fn lambda(&self) -> f64 {
        3f64.powf(-self.alpha / (2.0 * self.c * self.dim as f64 * self.rho_bar))
    }
}

/// r_N ≤ L(3βD^{1/p})^α · exp(−α[(N+N_gp)/(2CDρ̄) − Ξ_n − 2]·ln 3).
pub fn theorem1_bound(p: &BoundParams) -> f64 {
    let d = p.dim as f64;
    let d_root = if p.p.is_infinite() {
        1.0
    } else {
        d.powf(1.0 / p.p)
    };
    let prefactor = p.l * (3.0 * p.beta * d_root).powf(p.alpha);
    let bracket = (p.n_evals + p.n_gp) / (2.0 * p.c * d * p.rho_bar) - p.xi_n - 2.0;
    prefactor * (-p.alpha * bracket * 3f64.ln()).exp()
}
