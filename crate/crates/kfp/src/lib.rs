//! Command-line front end, file formats and reports for `kfp-core`.
//!
//! Exit codes: 0 success, 1 input or numerical error, 2 the hypothesis of
//! the requested check fails, 3 no admissible constant up to `--Cmax`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod export;
pub mod potential_file;
pub mod report;

use potential_file::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Hypothesis(String),
    #[error("{0}")]
    NotFound(String),
    /// The reader of standard output went away.
    #[error("broken pipe")]
    BrokenPipe,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::BrokenPipe => 0,
            CliError::Hypothesis(_) => 2,
            CliError::NotFound(_) => 3,
        }
    }
}

impl From<kfp_core::Error> for CliError {
    fn from(e: kfp_core::Error) -> Self {
        use kfp_core::Error as E;
        match &e {
            E::AssumptionFailed { points } => {
                let list: Vec<String> = points.iter().map(|p| format!("{p:?}")).collect();
                CliError::Hypothesis(format!("{e}: {}", list.join(", ")))
            }
            E::HypothesisViolated => CliError::Hypothesis(e.to_string()),
            E::NotFound { .. } => CliError::NotFound(e.to_string()),
            E::NonConvergence { cells } => {
                let list: Vec<String> = cells.iter().map(|p| format!("{p:?}")).collect();
                CliError::Input(format!("{e}; offending cells: {}", list.join(", ")))
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::BrokenPipe;
        }
        CliError::Input(e.to_string())
    }
}
