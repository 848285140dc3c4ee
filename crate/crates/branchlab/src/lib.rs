//! Formats, sampling, verification suites and the command-line frontend
//! for `branchlab-core`.

pub mod commands;
pub mod formats;
pub mod sample;
pub mod suites;

use branchlab_core::Budget;

pub use branchlab_core as core;

pub const BUDGET_ENV: &str = "BRANCHLAB_BUDGET";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] branchlab_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 3 for an exceeded budget, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(branchlab_core::Error::BudgetExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

/// The element budget, overridable through `BRANCHLAB_BUDGET`.
pub fn budget_from_env() -> Result<Budget, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Budget::new)
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV} must be a non-negative integer, got {s:?}"))),
        Err(_) => Ok(Budget::default()),
    }
}
