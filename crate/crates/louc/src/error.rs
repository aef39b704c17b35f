//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("annotator not found: {0}")]
    AnnotatorNotFound(String),

    #[error("question not found: {0}")]
    QuestionNotFound(String),

    #[error("no record for annotator {annotator} on question {question}")]
    RecordNotFound { annotator: String, question: String },

    /// A question subset references a question the annotator never answered.
    #[error("annotator {annotator} did not answer question {question} in the requested subset")]
    SubsetNotCovered { annotator: String, question: String },

    /// A question has no recorded answers, so its mean response time is undefined.
    #[error("question {0} has no recorded answers")]
    QuestionUnanswered(String),

    #[error("{0} is undefined over an empty question subset")]
    EmptySubset(&'static str),

    #[error("undefined measure: {0}")]
    UndefinedMeasure(String),

    #[error("degenerate subset: {0}")]
    DegenerateSubset(String),

    #[error("degenerate cohort: {0}")]
    DegenerateCohort(String),

    #[error("{name} out of range: {value} (expected {expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Dataset construction rejected data that violates an integrity rule.
    #[error("dataset integrity violation: {0}")]
    Integrity(String),

    #[error("{path}: row {row}: {reason}")]
    Ingest {
        path: PathBuf,
        row: usize,
        reason: String,
    },

    #[error("{path}: missing required column '{column}'")]
    MissingColumn { path: PathBuf, column: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
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
