use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use imgpo::harness::{self, Algorithm, Overrides};

#[derive(Parser)]
#[command(
    name = "imgpo",
    version,
    about = "IMGPO / SOO / BaMSOO benchmark runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one benchmark.
    Run(Knobs),
    /// Run every algorithm × benchmark pair and print a table.
    Suite(Knobs),
}

#[derive(Args)]
struct Knobs {
    /// imgpo, soo or bamsoo (comma-separated for `suite`)
    #[arg(long)]
    alg: Option<String>,
    /// Benchmark name (comma-separated for `suite`)
    #[arg(long = "fn")]
    function: Option<String>,
    #[arg(long)]
    budget_evals: Option<usize>,
    #[arg(long)]
    budget_iters: Option<usize>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    xi_max: Option<usize>,
    #[arg(long)]
    sigma0: Option<f64>,
    #[arg(long)]
    length0: Option<f64>,
    /// Output prefix for <prefix>.csv and <prefix>.json
    #[arg(long)]
    out: Option<PathBuf>,
    /// Key/value (TOML) config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write elapsed_s as 0 so repeated runs produce identical files.
    #[arg(long)]
    no_timing: bool,
}

impl Knobs {
    fn overrides(&self) -> imgpo::Result<Overrides> {
        let flags = Overrides {
            alg: self.alg.clone(),
            function: self.function.clone(),
            budget_evals: self.budget_evals,
            budget_iters: self.budget_iters,
            eta: self.eta,
            xi_max: self.xi_max,
            sigma0: self.sigma0,
            length0: self.length0,
            out: self.out.clone(),
            timing: self.no_timing.then_some(false),
        };
        Ok(match &self.config {
            Some(path) => Overrides::load(path)?.merged_with(flags),
            None => flags,
        })
    }
}

fn split(list: &str) -> Vec<String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn run(knobs: &Knobs) -> imgpo::Result<()> {
    let cfg = knobs.overrides()?.resolve()?;
    let outcome = harness::run_experiment(&cfg)?;
    println!("{}", harness::summary_line(&outcome.summary));
    Ok(())
}

fn suite(knobs: &Knobs) -> imgpo::Result<()> {
    let o = knobs.overrides()?;
    // Omitted lists mean every algorithm / every registered benchmark.
    let algs = o
        .alg
        .as_deref()
        .map(split)
        .unwrap_or_else(|| ["imgpo", "soo", "bamsoo"].map(String::from).to_vec());
    let fns = o.function.as_deref().map(split).unwrap_or_else(|| {
        imgpo::benchfns::names()
            .into_iter()
            .map(String::from)
            .collect()
    });
    let mut pairs = Vec::new();
    for a in &algs {
        let alg: Algorithm = a.parse()?;
        for f in &fns {
            pairs.push((alg, f.clone()));
        }
    }
    let base = o.apply_knobs(harness::ExperimentConfig::new(Algorithm::Imgpo, "sin1"));
    let rows = harness::run_suite(&pairs, &base);
    print!("{}", harness::suite_table(&rows));
    if let Some(prefix) = &o.out {
        harness::write_suite_csv(&harness::with_ext(prefix, "csv"), &rows)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Run(k) => run(k),
        Command::Suite(k) => suite(k),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
