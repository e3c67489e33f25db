use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex index {index} out of range for a graph with {num_vertices} vertices")]
    VertexOutOfRange { index: usize, num_vertices: usize },
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("parity mismatch: expected {expected:?}, found {found:?}")]
    ParityMismatch { expected: crate::graphcore::Parity, found: crate::graphcore::Parity },
    #[error("operation {op} is not defined in {parity:?} parity")]
    WrongParity { op: &'static str, parity: crate::graphcore::Parity },
    #[error("capacity exceeded in cell (v={v}, e={e}): {what}")]
    Capacity { v: usize, e: usize, what: String },
    #[error("image term {graph} is not in the codomain basis")]
    NotInBasis { graph: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
