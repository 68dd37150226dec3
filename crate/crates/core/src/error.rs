use std::path::PathBuf;

/// Errors raised by the estimators, generators and the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    Empty,

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("size mismatch: {0}")]
    Mismatch(String),

    #[error("bootstrap variance is zero; the Studentized statistic is undefined")]
    DegenerateVariance,

    #[error("continued fraction for I_x({a}, {b}) at x = {x} did not converge in {iterations} iterations")]
    NoConvergence {
        a: f64,
        b: f64,
        x: f64,
        iterations: usize,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config {path}: {source}")]
    Config {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
