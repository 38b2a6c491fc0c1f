//! Noiseless GP regression: posterior, UCB and empirical-Bayes refit.
//!
//! cargo run --example gp_regression

use imgpo::gp::{log_marginal_likelihood, Dataset};
use imgpo::{GpState, KernelParams};

fn main() -> imgpo::Result<()> {
    let f = |x: f64| (6.0 * x).sin() + 0.5 * x;
    let xs = [0.05, 0.2, 0.35, 0.5, 0.7, 0.9];
    let data = Dataset::from_parts(
        xs.iter().map(|&x| vec![x]).collect(),
        xs.iter().map(|&x| f(x)).collect(),
    )?;

    let mut gp = GpState::with_data(data, KernelParams::matern52(1.0, 0.25))?;
    println!(
        "initial {:?}, log ML {:.4}",
        gp.params(),
        log_marginal_likelihood(gp.data(), gp.params())?
    );
    gp.refit()?;
    println!(
        "fitted  {:?}, log ML {:.4}",
        gp.params(),
        log_marginal_likelihood(gp.data(), gp.params())?
    );

    println!(
        "{:>6} {:>9} {:>9} {:>9} {:>9}",
        "x", "f(x)", "mean", "sd", "ucb"
    );
    for i in 0..=10 {
        let x = i as f64 / 10.0;
        let (mu, var) = gp.posterior(&[x])?;
        let ucb = gp.ucb(&[x], 0.05)?;
        println!(
            "{x:>6.2} {:>9.4} {mu:>9.4} {:>9.4} {ucb:>9.4}",
            f(x),
            var.sqrt()
        );
    }
    println!("UCB calls so far: {}", gp.ucb_calls());
    Ok(())
}
