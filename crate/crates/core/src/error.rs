use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate domain in dimension {dim}: lower {lower} must be below upper {upper}")]
    DegenerateDomain { dim: usize, lower: f64, upper: f64 },

    #[error("domain bound in dimension {dim} is not finite")]
    NonFiniteDomain { dim: usize },

    #[error("kernel matrix is not positive definite even with jitter {jitter:e} (N = {size})")]
    Factorization { jitter: f64, size: usize },

    #[error("point {point:?} is already in the dataset")]
    DuplicatePoint { point: Vec<f64> },

    #[error("objective returned non-finite value {value} at {point:?}")]
    NonFiniteObjective { point: Vec<f64>, value: f64 },

    #[error("cell {0} is not live in the partition tree")]
    NotLive(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown benchmark `{name}`; known: {known}")]
    UnknownBenchmark { name: String, known: String },

    #[error("unknown algorithm `{0}`; known: imgpo, soo, bamsoo")]
    UnknownAlgorithm(String),

    #[error("best value {f_plus} exceeds the known optimum {f_star}")]
    RegretBelowZero { f_plus: f64, f_star: f64 },

    #[error("rho history is empty")]
    EmptyHistory,

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
