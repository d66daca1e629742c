use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Ok = 0,
    Violation = 1,
    Input = 2,
    Budget = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn of_error(e: &qrlab::Error) -> Self {
        if e.is_input_error() {
            ExitStatus::Input
        } else if e.is_budget_error() {
            ExitStatus::Budget
        } else {
            ExitStatus::Violation
        }
    }

    /// Combines entry outcomes: violations dominate, then input errors, then budgets.
    pub fn worst(self, other: Self) -> Self {
        let rank = |s: ExitStatus| match s {
            ExitStatus::Ok => 0,
            ExitStatus::Budget => 1,
            ExitStatus::Input => 2,
            ExitStatus::Violation => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("corpus file {path}: {message}")]
    Corpus { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] qrlab::Error),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Io { .. } | CliError::Corpus { .. } => ExitStatus::Input,
            CliError::Core(e) => ExitStatus::of_error(e),
        }
    }
}
