//! Library side of the command-line front end: the circuit file format, the
//! bundled example circuits, the builder benchmark, and text rendering.

use thiserror::Error;

pub mod bench;
pub mod examples;
pub mod file;
pub mod render;

/// Command-level failures, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad invocation (exit 1).
    #[error("{0}")]
    Usage(String),
    /// Parse, validation, or dimension failure (exit 2).
    #[error("{0}")]
    Invalid(String),
    /// Resource guard tripped (exit 3).
    #[error("{0}")]
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}
