//! Crate-wide error type. Parse problems, domain violations and exceeded
//! enumeration caps are separated because the command line maps them to
//! distinct exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed descriptor or unsupported syntax in user input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally valid input outside the supported domain
    /// (for example a non-reduced system passed to the Chevalley builder).
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration hit its element or depth cap and was abandoned.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    /// A verified internal invariant failed. This is a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
