use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input matrix or graph violates a structural contract (symmetry, hollowness, shape).
    #[error("validation error: {0}")]
    Validation(String),

    /// Argument outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unsupported design: {0}")]
    UnsupportedDesign(String),

    #[error("incomplete design: no matrix for subject `{subject}`, condition `{condition}`")]
    IncompleteDesign { subject: String, condition: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("data error in {}: entry ({row}, {col}) = {value}: {reason}", file.display())]
    Data {
        file: PathBuf,
        row: usize,
        col: usize,
        value: f64,
        reason: String,
    },

    /// Rescaling or a test statistic is undefined for the given input.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("i/o error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 3,
            _ => 2,
        }
    }
}
