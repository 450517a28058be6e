//! Error types shared across the library.
//!
//! Every fallible operation returns [`Result`]; the variants map onto the
//! CLI's exit-code contract (config = 2, data = 3, resource = 4).

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum MineError {
    /// The caller asked for something contradictory or out of range.
    #[error("configuration error: {0}")]
    Config(String),

    /// The input data is malformed or violates a documented precondition.
    #[error("data error: {0}")]
    Data(String),

    /// A resource cap (level width, recursion depth, enumeration size) was hit.
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// A dual view was requested for a space that has no unique maximum.
    #[error("not dualizable: {0}")]
    NotDualizable(String),

    /// Underlying I/O failure, annotated with the path involved.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, MineError>;

impl MineError {
    /// Helper for `Config` with formatted text.
    pub fn config(msg: impl Into<String>) -> Self {
        MineError::Config(msg.into())
    }

    /// Helper for `Data` with formatted text.
    pub fn data(msg: impl Into<String>) -> Self {
        MineError::Data(msg.into())
    }

    /// Helper for `Resource` with formatted text.
    pub fn resource(msg: impl Into<String>) -> Self {
        MineError::Resource(msg.into())
    }
}
