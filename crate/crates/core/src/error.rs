use thiserror::Error;

/// Errors raised by the domain operations. Variant names double as the
/// error names reported by the command-line driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("CycleError: order relation has a directed cycle through {}", .witness.join(" < "))]
    Cycle { witness: Vec<String> },

    #[error("UnknownLabel: no element named `{0}`")]
    UnknownLabel(String),

    #[error("DuplicateLabel: element `{0}` declared twice")]
    DuplicateLabel(String),

    #[error("TooLarge: {what} has size {size}, bound is {bound}")]
    TooLarge {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("EmptyPoset: operation needs at least one element")]
    EmptyPoset,

    #[error("IndexOutOfRange: index {index} outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("ParseError at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),

    #[error("NotAnIdeal: mark violates the hereditary/saturation conditions")]
    NotAnIdeal,

    #[error("NoTail: diagram has no periodic tail")]
    NoTail,

    #[error("NotAForest: some element has a down-set that is not a chain")]
    NotAForest,

    #[error("InvalidDefector: {0}")]
    InvalidDefector(String),

    #[error("NotClosed: set {0:?} is not closed (not an up-set)")]
    NotClosed(Vec<String>),

    #[error("FactorizationMismatch: {0}")]
    FactorizationMismatch(String),

    #[error("IncompleteRelabeling: {0}")]
    IncompleteRelabeling(String),

    #[error("InvalidSpace: {0}")]
    InvalidSpace(String),

    #[error("JsonError: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
