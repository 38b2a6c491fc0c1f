//! Stepping IMGPO on Sin1 and watching divisions, screening and placeholders.
//!
//! cargo run --example imgpo_sin1

use imgpo::{benchfns, Imgpo, ImgpoConfig, TraceEvent};

fn main() -> imgpo::Result<()> {
    let sin1 = benchfns::get("sin1")?;
    let config = ImgpoConfig {
        eval_budget: Some(60),
        ..Default::default()
    };
    let mut opt = Imgpo::new(|x: &[f64]| sin1.evaluate(x), sin1.domain(), config)?;
    let mut seen = 0;
    while !opt.budget_exhausted() {
        let rec = opt.iterate()?.clone();
        let trace = &opt.state().trace;
        for e in &trace[seen..] {
            match e {
                TraceEvent::Divide {
                    depth,
                    cell,
                    children,
                    ..
                } => {
                    println!("  divide cell {cell} (depth {depth}) -> {children:?}")
                }
                TraceEvent::Resolve { cell, .. } => println!("  evaluate placeholder cell {cell}"),
                TraceEvent::Screen {
                    depth,
                    cell,
                    xi,
                    rejected,
                    ..
                } => {
                    println!(
                        "  screen cell {cell} (depth {depth}) ξ={xi}: {}",
                        if *rejected { "rejected" } else { "kept" }
                    )
                }
            }
        }
        seen = trace.len();
        println!(
            "t={:>2} n={:>3} N={:>3} N_gp={:>3} f+={:.10} regret={:.2e} ρ̄={:.2} Ξ={:.1}",
            rec.t,
            rec.n,
            rec.n_evals,
            rec.n_gp,
            rec.f_plus,
            sin1.regret(rec.f_plus)?,
            rec.rho_bar,
            rec.xi
        );
    }
    println!(
        "best x = {:?}, known optimum x* = {:?}",
        opt.best_point(),
        sin1.x_star.unwrap()
    );
    Ok(())
}
