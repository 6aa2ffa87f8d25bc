use std::path::PathBuf;

use crate::corpus::Network;

/// Errors produced by the analytics library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("line {line}: unparseable timestamp {value:?}")]
    Timestamp { line: usize, value: String },

    #[error("duplicate post id {id:?} on lines {first_line} and {second_line}")]
    DuplicatePostId {
        id: String,
        first_line: usize,
        second_line: usize,
    },

    #[error("duplicate post id {id:?} for network {network}")]
    DuplicateId { network: Network, id: String },

    #[error("line {line}: unknown label {value:?}")]
    UnknownLabel { line: usize, value: String },

    #[error("line {line}: unknown network {value:?}")]
    UnknownNetwork { line: usize, value: String },

    #[error("duplicate label for ({network}, {user_id}) on line {line}")]
    DuplicateLabel {
        network: Network,
        user_id: String,
        line: usize,
    },

    #[error("invalid event {name:?}: {reason}")]
    InvalidEvent { name: String, reason: String },

    #[error("cannot parse URL {url:?}: {reason}")]
    InvalidUrl { url: String, reason: String },

    #[error("line {line}: malformed URL mapping: {reason}")]
    MalformedUrlMap { line: usize, reason: String },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no comparable fields between the two identities")]
    NoComparableFields,

    #[error("no labeled users found in corpus")]
    NoLabeledUsers,

    #[error("dataset needs at least one row per class; found only {0}")]
    SingleClass(&'static str),

    #[error("expected a {expected} dataset, got {actual}")]
    WrongNetwork { expected: Network, actual: Network },

    #[error("feature {0:?} is not part of the schema")]
    MissingFeature(String),

    #[error("feature vector does not match the model schema: {0}")]
    SchemaMismatch(String),

    #[error("class {class} has {count} rows, fewer than the {folds} folds requested")]
    ClassTooSmall {
        class: &'static str,
        count: usize,
        folds: usize,
    },

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("no relevant post found for event {0:?}")]
    NoRelevantPost(String),

    #[error("infeasible synthetic configuration: {0}")]
    InfeasibleConfig(String),

    #[error("unsupported model format version {0}")]
    ModelVersion(u32),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
