use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Imgpo,
    Soo,
    Bamsoo,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Imgpo => "imgpo",
            Algorithm::Soo => "soo",
            Algorithm::Bamsoo => "bamsoo",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "imgpo" => Ok(Algorithm::Imgpo),
            "soo" => Ok(Algorithm::Soo),
            "bamsoo" => Ok(Algorithm::Bamsoo),
            _ => Err(Error::UnknownAlgorithm(s.to_string())),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One algorithm/benchmark run with every knob resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub alg: Algorithm,
    pub function: String,
    pub budget_evals: usize,
    pub budget_iters: usize,
    pub eta: f64,
    pub xi_max: usize,
    pub sigma0: f64,
    pub length0: f64,
    /// Output prefix; `<prefix>.csv` and `<prefix>.json` are written when set.
    pub out: Option<PathBuf>,
    /// Record wall-clock time; when false `elapsed_s` is written as 0.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(alg: Algorithm, function: &str) -> Self {
        Self {
            alg,
            function: function.to_string(),
            budget_evals: 300,
            budget_iters: 200,
            eta: 0.05,
            xi_max: 4,
            sigma0: 1.0,
            length0: 0.25,
            out: None,
            timing: true,
        }
    }
}

/// Partial settings from a config file or command-line flags.
///
/// The file format is TOML key/value pairs using the flag names, e.g.
///
/// ```toml
/// alg = "imgpo"
/// fn = "branin"
/// budget-evals = 200
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Overrides {
    pub alg: Option<String>,
    #[serde(rename = "fn")]
    pub function: Option<String>,
    pub budget_evals: Option<usize>,
    pub budget_iters: Option<usize>,
    pub eta: Option<f64>,
    pub xi_max: Option<usize>,
    pub sigma0: Option<f64>,
    pub length0: Option<f64>,
    pub out: Option<PathBuf>,
    pub timing: Option<bool>,
}

impl Overrides {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// `self` with every field set in `top` replaced.
    pub fn merged_with(self, top: Overrides) -> Overrides {
        Overrides {
            alg: top.alg.or(self.alg),
            function: top.function.or(self.function),
            budget_evals: top.budget_evals.or(self.budget_evals),
            budget_iters: top.budget_iters.or(self.budget_iters),
            eta: top.eta.or(self.eta),
            xi_max: top.xi_max.or(self.xi_max),
            sigma0: top.sigma0.or(self.sigma0),
            length0: top.length0.or(self.length0),
            out: top.out.or(self.out),
            timing: top.timing.or(self.timing),
        }
    }

    /// Applies the knobs (everything except alg/fn) on top of `base`.
    pub fn apply_knobs(&self, mut base: ExperimentConfig) -> ExperimentConfig {
        if let Some(v) = self.budget_evals {
            base.budget_evals = v;
        }
        if let Some(v) = self.budget_iters {
            base.budget_iters = v;
        }
        if let Some(v) = self.eta {
            base.eta = v;
        }
        if let Some(v) = self.xi_max {
            base.xi_max = v;
        }
        if let Some(v) = self.sigma0 {
            base.sigma0 = v;
        }
        if let Some(v) = self.length0 {
            base.length0 = v;
        }
        if let Some(v) = &self.out {
            base.out = Some(v.clone());
        }
        if let Some(v) = self.timing {
            base.timing = v;
        }
        base
    }

    /// Resolves a single-run configuration; `alg` and `fn` are required.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let alg: Algorithm = self
            .alg
            .as_deref()
            .ok_or_else(|| Error::Config("missing `alg`".into()))?
            .parse()?;
        let function = self
            .function
            .as_deref()
            .ok_or_else(|| Error::Config("missing `fn`".into()))?;
        crate::benchfns::get(function)?;
        Ok(self.apply_knobs(ExperimentConfig::new(alg, function)))
    }
}
