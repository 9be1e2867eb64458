//! Library half of the `rigidgerb` command-line tool: input documents,
//! command implementations and report rendering.

use std::fmt;

pub mod commands;
pub mod input;
pub mod output;
pub mod verify;

/// Errors that stop a command before a report can be produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    /// The input does not parse or does not describe a valid object.
    Schema(String),
    /// The input is valid but outside what the algorithms handle.
    Unsupported(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "schema error: {}", m),
            CliError::Unsupported(m) => write!(f, "unsupported: {}", m),
            CliError::Failure(m) => write!(f, "error: {}", m),
        }
    }
}

impl std::error::Error for CliError {}
