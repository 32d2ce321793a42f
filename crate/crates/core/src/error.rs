//! Error type shared by every module.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value violates a constraint.
    #[error("config error ({key}): {reason}")]
    Config { key: String, reason: String },

    /// An iterative numerical method did not reach its target.
    #[error("numeric error: {reason} (best estimate {estimate:e}, error bound {bound:e})")]
    Numeric {
        reason: String,
        estimate: f64,
        bound: f64,
    },

    /// A bit string has the wrong length for the configured symbol.
    #[error("framing error: expected {expected} bits, got {got}")]
    Framing { expected: usize, got: usize },

    /// The arctangent denominator vanishes for the pair (m, j).
    #[error("degenerate geometry for transmit antenna {m}, receive pair {j}")]
    DegenerateGeometry { m: usize, j: usize },

    /// Waist matching has no real solution.
    #[error("no matching waist for OAM state {state} at z = {z} m")]
    NoMatchingWaist { state: i32, z: f64 },

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Bad command-line or preset usage.
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code for the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. }
            | Error::NoMatchingWaist { .. }
            | Error::DegenerateGeometry { .. } => 2,
            Error::Numeric { .. } | Error::Domain(_) => 3,
            _ => 1,
        }
    }
}
