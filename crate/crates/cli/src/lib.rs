//! Command-line front end for the `ciani` library: single-curve analysis,
//! exhaustive censuses over F_{p^2}, extension-field scans and plane counts.

pub mod args;
pub mod census;
pub mod commands;
pub mod grammar;
pub mod render;

use thiserror::Error;

pub use args::{Cli, Command};
pub use commands::run;

/// Version of every machine-readable output format.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest number of triples a scan may visit without `--yes-i-know`.
pub const SCAN_BUDGET: u128 = 10_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] grammar::ParseError),
    #[error(transparent)]
    Field(#[from] ciani::FieldError),
    #[error("{0}")]
    Budget(String),
    #[error("invariant violation: {0}")]
    Violation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Budget(_) => 3,
            _ => 2,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
