//! Library half of the `ifm` command-line tool, split out so integration
//! tests can exercise the exact strings the binary emits.

pub mod commands;
pub mod report;
pub mod verify;

use std::fmt;

/// Anything wrong with the requested invocation (exit code 2 territory).
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ifm_core::IfmError> for CliError {
    fn from(e: ifm_core::IfmError) -> Self {
        CliError::Invalid(e.to_string())
    }
}
