//! Running a small algorithm × benchmark suite in parallel and saving CSV.
//!
//! cargo run --example experiment_suite [output-prefix]

use imgpo::benchfns;
use imgpo::harness::{self, Algorithm, ExperimentConfig};

fn main() -> imgpo::Result<()> {
    let pairs: Vec<(Algorithm, String)> = [Algorithm::Imgpo, Algorithm::Soo, Algorithm::Bamsoo]
        .into_iter()
        .flat_map(|a| {
            benchfns::names()
                .into_iter()
                .map(move |f| (a, f.to_string()))
        })
        .collect();
    let base = ExperimentConfig {
        budget_evals: 100,
        ..ExperimentConfig::new(Algorithm::Imgpo, "sin1")
    };
    let rows = harness::run_suite(&pairs, &base);
    print!("{}", harness::suite_table(&rows));
    if let Some(prefix) = std::env::args().nth(1) {
        let path = harness::with_ext(prefix.as_ref(), "csv");
        harness::write_suite_csv(&path, &rows)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
