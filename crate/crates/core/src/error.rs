use thiserror::Error;

/// Errors raised by the engine. Law violations and probe failures are
/// reported as data in law reports; these are construction errors.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum KanError {
    #[error("base context mismatch: {0}")]
    CtxMismatch(String),
    #[error("boundary mismatch: {0}")]
    Boundary(String),
    #[error("candidate is incompatible with the universal property: {0}")]
    IncompatibleCandidate(String),
    #[error("factorization failure: {0}")]
    FactorizationFailure(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("source mismatch: {0}")]
    SourceMismatch(String),
    #[error("no natural transformation exists")]
    EmptySolution,
    #[error("object too large to enumerate: {0}")]
    TooLarge(String),
    #[error("invalid group or monoid table: {0}")]
    InvalidTable(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("unlawful structure: {0}")]
    Unlawful(String),
    #[error("parse error at {line}:{column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("unresolved reference: {0}")]
    Unresolved(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, KanError>;
