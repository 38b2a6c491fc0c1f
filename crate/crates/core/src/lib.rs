//! Infinite-metric Gaussian-process optimization (IMGPO).
//!
//! A derivative-free global optimizer for expensive deterministic functions
//! on a box. It combines a hierarchical ternary partition, which considers
//! every possible smoothness bound at once, with a noiseless GP whose upper
//! confidence bound screens candidates and skips unpromising evaluations.
//!
//! The crate also ships the SOO and BaMSOO baselines, a registry of standard
//! benchmark functions, and an experiment harness that writes per-iteration
//! CSV telemetry.
//!
//! ```no_run
//! use imgpo::{benchfns, imgpo::{run, ImgpoConfig}};
//!
//! let branin = benchfns::get("branin").unwrap();
//! let result = run(|x| branin.evaluate(x), &branin.domain(), &ImgpoConfig::default()).unwrap();
//! println!("best {:?} -> {}", result.best_point, result.f_plus);
//! ```

pub mod baselines;
pub mod benchfns;
pub mod error;
pub mod gp;
pub mod harness;
pub mod imgpo;
pub mod partition;
pub mod record;

pub use error::{Error, Result};
pub use gp::{GpState, KernelKind, KernelParams};
pub use imgpo::{Imgpo, ImgpoConfig};
pub use partition::{Domain, PartitionTree};
pub use record::{rho_bar, IterationRecord, RunResult, TraceEvent};
