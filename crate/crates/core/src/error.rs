use std::path::PathBuf;

use thiserror::Error;

use crate::dataset::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("training set failed validation: {0}")]
    Validation(ValidationReport),

    #[error("training set has a single class; nearest enemies are undefined")]
    NoEnemies,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{dataset}: {algorithm} produced an inconsistent subset (point {counterexample} misclassified)")]
    Inconsistent {
        dataset: String,
        algorithm: String,
        counterexample: usize,
    },

    #[error("{dataset}: {algorithm} selected different subsets across repeats")]
    Nondeterministic { dataset: String, algorithm: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
