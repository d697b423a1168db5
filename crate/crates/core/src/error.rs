use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across ingestion, fitting, evaluation and the command layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },

    #[error("invariant violated ({context}): {reason}")]
    InvariantViolation { context: String, reason: String },

    #[error("no trial rows in {0}")]
    EmptyFile(PathBuf),

    #[error("trials out of order for subject {subject}, block {block}: {reason}")]
    OrderingError {
        subject: String,
        block: u32,
        reason: String,
    },

    #[error("subject {subject} has {available} trials, need at least {required}")]
    TooFewTrials {
        subject: String,
        available: usize,
        required: usize,
    },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("length mismatch: {left} predictions vs {right} responses")]
    LengthMismatch { left: usize, right: usize },

    #[error("cannot compute a metric over zero trials")]
    Empty,

    #[error("subject {0} has no catch trials")]
    NoCatchTrials(String),

    #[error("invalid experiment descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("no fitted parameters found for subject {subject} under {dir}")]
    MissingParams { subject: String, dir: PathBuf },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invariant(context: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvariantViolation {
            context: context.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    ///
    /// Configuration problems exit with 3, everything else that stems from the
    /// input data or the files on disk exits with 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidDescriptor(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
