use serde::Serialize;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Solver(#[from] sqrtpot::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{failed} of {total} validation cases failed")]
    Validation { failed: usize, total: usize },
}

/// Machine-readable error record written to stderr.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => EXIT_VALIDATION,
            CliError::Solver(e) if e.is_numerical() => EXIT_NUMERICAL,
            // bad input, unwritable output path, unbound state, ...
            _ => EXIT_DOMAIN,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Solver(e) => e.kind(),
            CliError::Io { .. } => "io",
            CliError::Validation { .. } => "validation",
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord {
            error: self.kind(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
