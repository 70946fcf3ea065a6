use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("focal point: u2({t_prime}) = {u2} leaves the first focal cell")]
    FocalPoint { t_prime: f64, u2: f64 },

    #[error("accuracy error: {0}")]
    Accuracy(String),

    #[error("under-resolved: {0}")]
    UnderResolved(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("stability criterion violated: {0}")]
    Stability(String),

    #[error("window overflow: edge density {edge_density:e} exceeds {limit:e}")]
    WindowOverflow { edge_density: f64, limit: f64 },

    #[error("regime violation: {0}")]
    Regime(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),
}

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {v}")))
    }
}
