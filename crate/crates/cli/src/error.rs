//! Errors and their process exit codes.

use optcode::construct::ConstructError;
use optcode::convcode::CodeError;
use optcode::exactla::LinalgError;
use optcode::gf::GfError;
use optcode::superreg::SuperregError;
use thiserror::Error;

/// Exit code when the checked property holds.
pub const EXIT_PASS: i32 = 0;
/// Exit code when the checked property is false.
pub const EXIT_FALSE: i32 = 1;
/// Exit code for usage, input and parse errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit code when a computation budget or size cap is exceeded.
pub const EXIT_BUDGET: i32 = 3;
/// Exit code when a certification hypothesis fails.
pub const EXIT_HYPOTHESIS: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Hypothesis(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Json(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Hypothesis(_) => EXIT_HYPOTHESIS,
        }
    }
}

impl From<GfError> for CliError {
    fn from(e: GfError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SuperregError> for CliError {
    fn from(e: SuperregError) -> Self {
        match e {
            SuperregError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::HypothesisFailed(_) => CliError::Hypothesis(e.to_string()),
            ConstructError::BudgetExceeded(_) | ConstructError::NoVerifiableField { .. } => {
                CliError::Budget(e.to_string())
            }
            ConstructError::Code(c) => c.into(),
            ConstructError::Superreg(s) => s.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}
