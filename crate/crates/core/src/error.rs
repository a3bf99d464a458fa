//! Error types shared across the toolkit.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// File or stream access failed.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Input data does not match the feature schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// An argument or value is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numeric procedure failed (non-convergence, divergence, non-finite values).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A configuration file or run configuration is invalid.
    #[error("config error: {0}")]
    Config(String),

    /// A report file has an incompatible schema version.
    #[error("report version mismatch: found {found}, expected {expected}")]
    Version { found: u32, expected: u32 },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code this error maps to: 2 for usage/config problems,
    /// 1 for runtime/numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_) | Error::Config(_) | Error::Version { .. } => 2,
            Error::Io { .. } | Error::Domain(_) | Error::Numeric(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
