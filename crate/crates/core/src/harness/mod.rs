//! Experiment runner: budgets, telemetry rows, CSV/JSON output and suites.

mod bound;
mod config;

pub use bound::{theorem1_bound, BoundParams};
pub use config::{Algorithm, ExperimentConfig, Overrides};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{bamsoo_run, soo_run, BamsooConfig, HmaxRule, SooConfig};
use crate::benchfns::{self, log10_regret, Benchmark};
use crate::error::{Error, Result};
use crate::gp::KernelParams;
use crate::imgpo::{self, ImgpoConfig};
use crate::record::{IterationRecord, RunResult};

pub const CSV_HEADER: &str =
    "t,n,N,N_gp,f_plus,regret,log10_regret,rho_t,rho_bar,xi,xi_n,elapsed_s";

/// One CSV row: iteration telemetry plus regret against the known optimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub t: usize,
    pub n: usize,
    #[serde(rename = "N")]
    pub n_evals: usize,
    #[serde(rename = "N_gp")]
    pub n_gp: usize,
    pub f_plus: f64,
    pub regret: f64,
    pub log10_regret: f64,
    pub rho_t: usize,
    pub rho_bar: f64,
    pub xi: f64,
    pub xi_n: usize,
    pub elapsed_s: f64,
}

impl RunRecord {
    pub fn from_iteration(rec: &IterationRecord, bench: &Benchmark, timing: bool) -> Result<Self> {
        let regret = bench.regret(rec.f_plus)?;
        Ok(Self {
            t: rec.t,
            n: rec.n,
            n_evals: rec.n_evals,
            n_gp: rec.n_gp,
            f_plus: rec.f_plus,
            regret,
            log10_regret: log10_regret(regret),
            rho_t: rec.rho_t,
            rho_bar: rec.rho_bar,
            xi: rec.xi,
            xi_n: rec.xi_n,
            elapsed_s: if timing { rec.elapsed_s } else { 0.0 },
        })
    }
}

/// End-of-run summary written as `<prefix>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub alg: Algorithm,
    #[serde(rename = "fn")]
    pub function: String,
    pub best_point: Vec<f64>,
    /// Final-row fields; the run's root evaluation alone gives t = 0.
    #[serde(flatten)]
    pub last: RunRecord,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub config: ExperimentConfig,
    pub records: Vec<RunRecord>,
    pub summary: Summary,
    pub result: RunResult,
}

fn dispatch(cfg: &ExperimentConfig, bench: &Benchmark) -> Result<RunResult> {
    let domain = bench.domain();
    let f = |x: &[f64]| bench.evaluate(x);
    let kernel = KernelParams::matern52(cfg.sigma0, cfg.length0);
    let soo = SooConfig {
        hmax_rule: HmaxRule::Sqrt,
        eval_budget: Some(cfg.budget_evals),
        iter_budget: Some(cfg.budget_iters),
    };
    match cfg.alg {
        Algorithm::Imgpo => imgpo::run(
            f,
            &domain,
            &ImgpoConfig {
                eta: cfg.eta,
                xi_max: cfg.xi_max,
                eval_budget: Some(cfg.budget_evals),
                iter_budget: Some(cfg.budget_iters),
                kernel,
                refit: true,
            },
        ),
        Algorithm::Soo => soo_run(f, &domain, &soo),
        Algorithm::Bamsoo => bamsoo_run(
            f,
            &domain,
            &BamsooConfig {
                soo,
                eta: cfg.eta,
                kernel,
                refit: true,
            },
        ),
    }
}

/// Runs one configured experiment, writing `<out>.csv` / `<out>.json` if requested.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let bench = benchfns::get(&cfg.function)?;
    let result = dispatch(cfg, bench)?;
    let records = result
        .records
        .iter()
        .map(|r| RunRecord::from_iteration(r, bench, cfg.timing))
        .collect::<Result<Vec<_>>>()?;
    let last = match records.last() {
        Some(r) => r.clone(),
        None => {
            let regret = bench.regret(result.f_plus)?;
            RunRecord {
                t: 0,
                n: 1,
                n_evals: result.evaluations,
                n_gp: 0,
                f_plus: result.f_plus,
                regret,
                log10_regret: log10_regret(regret),
                rho_t: 0,
                rho_bar: 0.0,
                xi: if cfg.alg == Algorithm::Imgpo {
                    1.0
                } else {
                    0.0
                },
                xi_n: 0,
                elapsed_s: 0.0,
            }
        }
    };
    let summary = Summary {
        alg: cfg.alg,
        function: bench.name.to_string(),
        best_point: result.best_point.clone(),
        last,
    };
    if let Some(prefix) = &cfg.out {
        write_csv(&with_ext(prefix, "csv"), &records)?;
        write_json(&with_ext(prefix, "json"), &summary)?;
    }
    Ok(ExperimentOutcome {
        config: cfg.clone(),
        records,
        summary,
        result,
    })
}

pub fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// CSV text for a run; the header row is always present.
pub fn records_to_csv(records: &[RunRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    let mut out = String::with_capacity(body.len() + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    out.push_str(std::str::from_utf8(&body).map_err(|e| Error::Io(e.to_string()))?);
    Ok(out)
}

pub fn parse_csv(text: &str) -> Result<Vec<RunRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| Error::Io(e.to_string())))
        .collect()
}

pub fn write_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    std::fs::write(path, records_to_csv(records)?)?;
    Ok(())
}

pub fn write_json(path: &Path, summary: &Summary) -> Result<()> {
    let text = serde_json::to_string_pretty(summary).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// One row of a suite: the summary of a finished run or the error it hit.
#[derive(Debug, Clone)]
pub struct SuiteRow {
    pub alg: Algorithm,
    pub function: String,
    pub outcome: std::result::Result<Summary, Error>,
}

/// Runs every (algorithm, benchmark) pair in parallel with the knobs of
/// `base`. Rows come back in input order; failures are kept per row. Output
/// files are not written per run; use [`write_suite_csv`] for the combined table.
pub fn run_suite(pairs: &[(Algorithm, String)], base: &ExperimentConfig) -> Vec<SuiteRow> {
    pairs
        .par_iter()
        .map(|(alg, function)| {
            let cfg = ExperimentConfig {
                alg: *alg,
                function: function.clone(),
                out: None,
                ..base.clone()
            };
            SuiteRow {
                alg: *alg,
                function: function.clone(),
                outcome: run_experiment(&cfg).map(|o| o.summary),
            }
        })
        .collect()
}

pub const SUITE_CSV_HEADER: &str =
    "alg,fn,status,t,n,N,N_gp,f_plus,regret,log10_regret,rho_bar,xi_n,elapsed_s";

pub fn suite_csv(rows: &[SuiteRow]) -> String {
    let mut out = String::from(SUITE_CSV_HEADER);
    out.push('\n');
    for row in rows {
        match &row.outcome {
            Ok(s) => {
                let r = &s.last;
                let _ = writeln!(
                    out,
                    "{},{},ok,{},{},{},{},{},{},{},{},{},{}",
                    row.alg,
                    row.function,
                    r.t,
                    r.n,
                    r.n_evals,
                    r.n_gp,
                    r.f_plus,
                    r.regret,
                    r.log10_regret,
                    r.rho_bar,
                    r.xi_n,
                    r.elapsed_s
                );
            }
            Err(e) => {
                let msg = e.to_string().replace([',', '\n'], ";");
                let _ = writeln!(out, "{},{},error: {msg},,,,,,,,,,", row.alg, row.function);
            }
        }
    }
    out
}

pub fn write_suite_csv(path: &Path, rows: &[SuiteRow]) -> Result<()> {
    std::fs::write(path, suite_csv(rows))?;
    Ok(())
}

/// Fixed-width text table of final regrets and wall times.
pub fn suite_table(rows: &[SuiteRow]) -> String {
    let mut out = format!(
        "{:<8} {:<12} {:>5} {:>5} {:>14} {:>12} {:>8} {:>5} {:>10}\n",
        "alg", "fn", "N", "N_gp", "f_plus", "log10_regret", "rho_bar", "xi_n", "time_s"
    );
    for row in rows {
        match &row.outcome {
            Ok(s) => {
                let r = &s.last;
                let _ = writeln!(
                    out,
                    "{:<8} {:<12} {:>5} {:>5} {:>14.8} {:>12.3} {:>8.3} {:>5} {:>10.3}",
                    row.alg,
                    row.function,
                    r.n_evals,
                    r.n_gp,
                    r.f_plus,
                    r.log10_regret,
                    r.rho_bar,
                    r.xi_n,
                    r.elapsed_s
                );
            }
            Err(e) => {
                let _ = writeln!(out, "{:<8} {:<12} error: {e}", row.alg, row.function);
            }
        }
    }
    out
}

/// One-line summary printed after a run.
pub fn summary_line(s: &Summary) -> String {
    let r = &s.last;
    format!(
        "{} on {}: t={} n={} N={} N_gp={} f+={:.10} log10(regret)={:.3} rho_bar={:.3} xi_n={} time={:.3}s",
        s.alg, s.function, r.t, r.n, r.n_evals, r.n_gp, r.f_plus, r.log10_regret, r.rho_bar, r.xi_n, r.elapsed_s
    )
}
