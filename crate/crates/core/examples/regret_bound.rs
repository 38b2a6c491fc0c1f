//! Evaluating the exponential regret bound from a finished run's counters.
//!
//! cargo run --example regret_bound

use imgpo::harness::{self, theorem1_bound, Algorithm, BoundParams, ExperimentConfig};

fn main() -> imgpo::Result<()> {
    let cfg = ExperimentConfig {
        budget_evals: 200,
        ..ExperimentConfig::new(Algorithm::Imgpo, "sin1")
    };
    let outcome = harness::run_experiment(&cfg)?;
    let last = &outcome.summary.last;

    // Illustrative smoothness constants: ℓ(x, x') = ‖x − x'‖_∞ on [0,1].
    let params = BoundParams {
        l: 1.0,
        alpha: 1.0,
        p: f64::INFINITY,
        c: 1.0,
        dim: 1,
        beta: 0.5,
        rho_bar: last.rho_bar,
        xi_n: last.xi_n as f64,
        n_evals: last.n_evals as f64,
        n_gp: last.n_gp as f64,
    };
    params.validate()?;
    println!(
        "N={} N_gp={} ρ̄={:.3} Ξ_n={} -> λ={:.4}, bound={:.3e}, observed regret={:.3e}",
        last.n_evals,
        last.n_gp,
        last.rho_bar,
        last.xi_n,
        params.lambda(),
        theorem1_bound(&params),
        last.regret
    );
    Ok(())
}
