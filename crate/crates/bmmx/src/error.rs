use thiserror::Error;

/// Errors produced by the bmmx library.
#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error(
        "exact enumeration unavailable for n = {n} (cap {cap}); \
         import a distance table or estimate a log-Z grid instead"
    )]
    EnumerationCap { n: usize, cap: usize },

    #[error("normalizing-constant source incompatible: {0}")]
    ZSourceMismatch(String),

    #[error("alpha = {alpha} outside grid range [{min}, {max}]; no extrapolation")]
    GridRange { alpha: f64, min: f64, max: f64 },

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: u64,
        msg: String,
    },

    #[error("malformed file {path}: {msg}")]
    Format { path: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
