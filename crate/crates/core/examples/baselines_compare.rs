//! IMGPO against SOO and BaMSOO on the same benchmark and budget.
//!
//! cargo run --example baselines_compare [benchmark] [evaluations]

use imgpo::baselines::{bamsoo_run, soo_run, BamsooConfig, SooConfig};
use imgpo::benchfns;
use imgpo::imgpo::run;
use imgpo::ImgpoConfig;

fn main() -> imgpo::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "branin".into());
    let budget: usize = args
        .next()
        .map(|s| s.parse().expect("evaluation budget"))
        .unwrap_or(150);
    let bench = benchfns::get(&name)?;
    let f = |x: &[f64]| bench.evaluate(x);
    let domain = bench.domain();

    let soo = SooConfig {
        eval_budget: Some(budget),
        iter_budget: None,
        ..Default::default()
    };
    let results = [
        ("soo", soo_run(f, &domain, &soo)?),
        (
            "bamsoo",
            bamsoo_run(
                f,
                &domain,
                &BamsooConfig {
                    soo,
                    ..Default::default()
                },
            )?,
        ),
        (
            "imgpo",
            run(
                f,
                &domain,
                &ImgpoConfig {
                    eval_budget: Some(budget),
                    iter_budget: None,
                    ..Default::default()
                },
            )?,
        ),
    ];
    println!("{name}: f* = {}", bench.f_star);
    for (alg, r) in &results {
        let last = r.last().expect("at least one iteration");
        println!(
            "{alg:<7} N={:>4} N_gp={:>4} f+={:>14.8} regret={:.3e} time={:.3}s",
            last.n_evals,
            last.n_gp,
            r.f_plus,
            bench.regret(r.f_plus)?,
            last.elapsed_s
        );
    }
    Ok(())
}
