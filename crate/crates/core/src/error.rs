use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("position {position} out of range for sequence of length {len}")]
    Position { position: usize, len: usize },

    #[error("invalid span ({i}, {j}) for sequence of length {len}")]
    Span { i: usize, j: usize, len: usize },

    #[error("unknown unit {0:?}")]
    UnknownUnit(String),

    #[error("unknown document {0:?}")]
    UnknownDocument(String),

    #[error("corpus statistics are frozen")]
    StatsFrozen,

    #[error("vector store is frozen")]
    StoreFrozen,

    #[error("empty gazetteer entry at index {0}")]
    EmptyEntry(usize),

    #[error("gazetteer has no entries")]
    EmptyGazetteer,

    #[error("invalid pattern {name:?}: {source}")]
    Pattern {
        name: String,
        #[source]
        source: regex::Error,
    },

    #[error("dataset must contain both classes (correct: {positives}, incorrect: {negatives})")]
    SingleClass { positives: usize, negatives: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("class counts are all zero")]
    EmptyCounts,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("malformed vector store: {0}")]
    StoreFormat(String),

    #[error("unsupported model version {0}")]
    ModelVersion(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
