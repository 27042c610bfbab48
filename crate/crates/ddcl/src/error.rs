//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by ingestion, curriculum construction, training and the
/// experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: ragged row: expected {expected} cells, found {found}")]
    RaggedRow {
        path: PathBuf,
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },

    #[error("unknown label column {column:?} (header: {header:?})")]
    UnknownLabelColumn { column: String, header: Vec<String> },

    #[error("row {row}, column {column} ({name}): cannot parse {value:?} as a number")]
    BadCell {
        row: usize,
        column: usize,
        name: String,
        value: String,
    },

    #[error("row {row}: missing label value")]
    MissingLabel { row: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("training failed: {0}")]
    Train(String),

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("run {run} failed: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
