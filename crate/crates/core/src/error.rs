use thiserror::Error;

/// Errors raised by simulation, quadrature and estimation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("circulant embedding failed: eigenvalue {value:e} below tolerance {tolerance:e}")]
    EmbeddingFailure { value: f64, tolerance: f64 },

    #[error("covariance factorization failed: {0}")]
    Factorization(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("Hermite rank undetermined: all coefficients up to order {kmax} are below {tol:e}")]
    RankUndetermined { kmax: usize, tol: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("grid mismatch: {0}")]
    Grid(String),

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_hurst_open_unit(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("Hurst parameter {h} must lie in (0, 1)")))
    }
}

pub(crate) fn check_hurst_long_memory(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.5 && h < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("H must lie in (0.5, 1), got {h}")))
    }
}
