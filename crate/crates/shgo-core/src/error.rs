//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong outside of programmer contract violations
/// (those panic with a message instead).
#[derive(Debug, Error)]
pub enum Error {
    #[error("exact integer overflow: {0}")]
    Overflow(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown element symbol '{0}'")]
    UnknownElement(String),

    #[error("element '{0}' missing from basis set")]
    MissingBasisElement(String),

    #[error("angular momentum {0} exceeds the supported maximum {1}")]
    AngularMomentumTooHigh(usize, usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("tensor file corrupt: {0}")]
    CorruptTensor(String),

    #[error("quadrature failed to converge: requested {requested:e}, achieved {achieved:e}")]
    QuadratureNoConvergence { requested: f64, achieved: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed tensor header: {0}")]
    Header(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
