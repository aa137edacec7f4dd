use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no such edge {0}-{1}")]
    NoSuchEdge(usize, usize),
    #[error("no such vertex {0}")]
    NoSuchVertex(usize),
    #[error("vertex {0} is not suppressible (degree {1})")]
    NotSuppressible(usize, usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("vertex label {0} exceeds the 128-vertex cap")]
    LabelTooLarge(usize),
    #[error("not an orientation: {0}")]
    NotAnOrientation(String),
    #[error("not a tangle: {0}")]
    NotATangle(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("mismatched graphs: {0}")]
    Mismatch(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("chain too short: {0}")]
    ChainTooShort(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}
