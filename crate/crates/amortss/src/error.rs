use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("innovation covariance is singular and data lie outside its range at t={t}")]
    SingularInnovation { t: usize },
    #[error("transition matrix is not stable (spectral radius {rho})")]
    Unstable { rho: f64 },
    #[error("standard deviation must be positive, got {0}")]
    NonPositiveStd(f64),
    #[error("unknown model id '{0}'")]
    UnknownModel(String),
    #[error("benchmark needs at least one run")]
    EmptyBenchmark,
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("checkpoint is malformed: {0}")]
    BadCheckpoint(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
