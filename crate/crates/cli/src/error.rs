use std::path::PathBuf;

use casimir_friction::{Error as CoreError, QuadratureError};
use thiserror::Error;

/// Process exit status for malformed input.
pub const EXIT_PARSE: i32 = 2;
/// Process exit status for a missed accuracy target or a failed check.
pub const EXIT_ACCURACY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed configuration or trajectory input; `location` is
    /// `file:line` when the line is known.
    #[error("{location}: {message}")]
    Parse { location: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] CoreError),
    #[error("{failed} of {total} verification checks failed")]
    VerifyFailed { failed: usize, total: usize },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } | Self::Usage(_) => EXIT_PARSE,
            Self::VerifyFailed { .. } => EXIT_ACCURACY,
            Self::Compute(e) if is_accuracy(e) => EXIT_ACCURACY,
            _ => 1,
        }
    }
}

fn is_accuracy(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::Accuracy { .. } | CoreError::Quadrature(QuadratureError::NotConverged { .. })
    )
}
