use std::path::PathBuf;

/// Errors raised anywhere in the toolkit.
///
/// Row numbers in ingestion errors are 1-based data rows (the header is not
/// counted); column names are the schema feature names.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("missing value at row {row}, column `{column}`")]
    MissingValue { row: usize, column: String },

    #[error("unknown category `{value}` at row {row}, column `{column}`")]
    UnknownCategory {
        row: usize,
        column: String,
        value: String,
    },

    #[error("malformed input{}: {message}", .row.map(|r| format!(" at row {r}")).unwrap_or_default())]
    Malformed { row: Option<usize>, message: String },

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("insufficient rows: need {needed}, have {available}")]
    InsufficientRows { needed: usize, available: usize },

    #[error("index {index} out of range for dataset of {len} rows")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("reference dataset needs at least {needed} rows, has {available}")]
    EmptyReference { needed: usize, available: usize },

    #[error("empty vector")]
    EmptyVector,

    #[error("insufficient training data: {0}")]
    InsufficientData(String),

    #[error("both classes must be present (members: {members}, non-members: {non_members})")]
    DegenerateLabels { members: usize, non_members: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("requested {requested} records but only {available} are available")]
    CountExceedsDataset { requested: usize, available: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("run failed after {completed} completed targets: {message}")]
    RunFailed { completed: usize, message: String },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(row: Option<usize>, message: impl Into<String>) -> Self {
        Error::Malformed {
            row,
            message: message.into(),
        }
    }

    /// True for errors caused by the input data rather than by the caller or
    /// the environment.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::MissingValue { .. }
                | Error::UnknownCategory { .. }
                | Error::Malformed { .. }
                | Error::SchemaMismatch(_)
                | Error::InvalidSchema(_)
                | Error::InsufficientRows { .. }
                | Error::IndexOutOfRange { .. }
                | Error::EmptyReference { .. }
                | Error::InsufficientData(_)
                | Error::CountExceedsDataset { .. }
                | Error::Csv(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
