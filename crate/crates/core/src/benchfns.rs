//! Benchmark objectives, oriented for maximization.
//!
//! Branin, Rosenbrock, Hartmann and Shekel are minimization problems in
//! their usual form and are negated here. Known optima were certified by a
//! dense grid search followed by local refinement.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::partition::Domain;

#[derive(Debug, Clone, Copy)]
pub struct Benchmark {
    pub name: &'static str,
    pub dim: usize,
    bounds: &'static [(f64, f64)],
    evaluate: fn(&[f64]) -> f64,
    pub f_star: f64,
    pub x_star: Option<&'static [f64]>,
}

impl Benchmark {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        (self.evaluate)(x)
    }

    pub fn bounds(&self) -> &'static [(f64, f64)] {
        self.bounds
    }

    pub fn domain(&self) -> Domain {
        Domain::from_bounds(self.bounds).expect("registered bounds are valid")
    }

    /// Simple regret f* − f⁺, clamped at zero.
    pub fn regret(&self, f_plus: f64) -> Result<f64> {
        regret(self, f_plus)
    }
}

pub fn regret(benchmark: &Benchmark, f_plus: f64) -> Result<f64> {
    if f_plus > benchmark.f_star + 1e-9 {
        return Err(Error::RegretBelowZero {
            f_plus,
            f_star: benchmark.f_star,
        });
    }
    Ok((benchmark.f_star - f_plus).max(0.0))
}

/// log₁₀ of the regret with a floor of 1e-16.
pub fn log10_regret(regret: f64) -> f64 {
    regret.max(1e-16).log10()
}

fn sin1_scalar(x: f64) -> f64 {
    ((13.0 * x).sin() * (27.0 * x).sin() + 1.0) / 2.0
}

fn sin1(x: &[f64]) -> f64 {
    sin1_scalar(x[0])
}

fn sin2(x: &[f64]) -> f64 {
    sin1_scalar(x[0]) * sin1_scalar(x[1])
}

fn peaks(v: &[f64]) -> f64 {
    let (x, y) = (v[0], v[1]);
    3.0 * (1.0 - x).powi(2) * (-x * x - (y + 1.0).powi(2)).exp()
        - 10.0 * (x / 5.0 - x.powi(3) - y.powi(5)) * (-x * x - y * y).exp()
        - (-(x + 1.0).powi(2) - y * y).exp() / 3.0
}

fn rosenbrock2(v: &[f64]) -> f64 {
    let (x, y) = (v[0], v[1]);
    -((1.0 - x).powi(2) + 100.0 * (y - x * x).powi(2))
}

fn branin(v: &[f64]) -> f64 {
    let (x1, x2) = (v[0], v[1]);
    let b = 5.1 / (4.0 * PI * PI);
    let c = 5.0 / PI;
    let t = 1.0 / (8.0 * PI);
    -((x2 - b * x1 * x1 + c * x1 - 6.0).powi(2) + 10.0 * (1.0 - t) * x1.cos() + 10.0)
}

const HARTMANN_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];

const HARTMANN3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];

const HARTMANN3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.0381, 0.5743, 0.8828],
];

const HARTMANN6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];

const HARTMANN6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

fn hartmann<const D: usize>(x: &[f64], a: &[[f64; D]; 4], p: &[[f64; D]; 4]) -> f64 {
    (0..4)
        .map(|i| {
            let e: f64 = (0..D).map(|j| a[i][j] * (x[j] - p[i][j]).powi(2)).sum();
            HARTMANN_ALPHA[i] * (-e).exp()
        })
        .sum()
}

fn hartmann3(x: &[f64]) -> f64 {
    hartmann(x, &HARTMANN3_A, &HARTMANN3_P)
}

fn hartmann6(x: &[f64]) -> f64 {
    hartmann(x, &HARTMANN6_A, &HARTMANN6_P)
}

const SHEKEL_BETA: [f64; 5] = [0.1, 0.2, 0.2, 0.4, 0.4];
const SHEKEL_C: [[f64; 4]; 5] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
];

fn shekel5(x: &[f64]) -> f64 {
    SHEKEL_C
        .iter()
        .zip(SHEKEL_BETA)
        .map(|(c, b)| {
            let d: f64 = c.iter().zip(x).map(|(ci, xi)| (xi - ci).powi(2)).sum();
            1.0 / (d + b)
        })
        .sum()
}

pub const BENCHMARKS: [Benchmark; 8] = [
    Benchmark {
        name: "sin1",
        dim: 1,
        bounds: &[(0.0, 1.0)],
        evaluate: sin1,
        f_star: 0.975599143811575,
        x_star: Some(&[0.867526208106832]),
    },
    Benchmark {
        name: "sin2",
        dim: 2,
        bounds: &[(0.0, 1.0), (0.0, 1.0)],
        evaluate: sin2,
        f_star: 0.975599143811575 * 0.975599143811575,
        x_star: Some(&[0.867526208106832, 0.867526208106832]),
    },
    Benchmark {
        name: "peaks",
        dim: 2,
        bounds: &[(-3.0, 3.0), (-3.0, 3.0)],
        evaluate: peaks,
        f_star: 8.10621358944234,
        x_star: Some(&[-0.009317587209483408, 1.5813679637939222]),
    },
    Benchmark {
        name: "rosenbrock2",
        dim: 2,
        bounds: &[(-5.0, 10.0), (-5.0, 10.0)],
        evaluate: rosenbrock2,
        f_star: 0.0,
        x_star: Some(&[1.0, 1.0]),
    },
    Benchmark {
        name: "branin",
        dim: 2,
        bounds: &[(-5.0, 10.0), (0.0, 15.0)],
        evaluate: branin,
        // −5/(4π), attained at (π, 2.275)
        f_star: -0.3978873577297384,
        x_star: Some(&[PI, 2.275]),
    },
    Benchmark {
        name: "hartmann3",
        dim: 3,
        bounds: &[(0.0, 1.0), (0.0, 1.0), (0.0, 1.0)],
        evaluate: hartmann3,
        f_star: 3.862779787332663,
        x_star: Some(&[0.11458888122541287, 0.5556488954739371, 0.8525469842172746]),
    },
    Benchmark {
        name: "hartmann6",
        dim: 6,
        bounds: &[(0.0, 1.0); 6],
        evaluate: hartmann6,
        f_star: 3.3223680114155147,
        x_star: Some(&[
            0.20168950909365746,
            0.15001069354111374,
            0.4768739729250998,
            0.2753324275220782,
            0.3116516172395686,
            0.6573005345536702,
        ]),
    },
    Benchmark {
        name: "shekel5",
        dim: 4,
        bounds: &[(0.0, 10.0); 4],
        evaluate: shekel5,
        f_star: 10.153199679058229,
        x_star: Some(&[
            4.000037152376549,
            4.000133278657566,
            4.000037151057555,
            4.000133277090425,
        ]),
    },
];

pub fn names() -> Vec<&'static str> {
    BENCHMARKS.iter().map(|b| b.name).collect()
}

pub fn get(name: &str) -> Result<&'static Benchmark> {
    BENCHMARKS
        .iter()
        .find(|b| b.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownBenchmark {
            name: name.to_string(),
            known: names().join(", "),
        })
}
