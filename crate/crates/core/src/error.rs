use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("inexact division: ({num}) / ({den})")]
    InexactDivision { num: String, den: String },
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("bead move {from} -> {to} is illegal")]
    IllegalMove { from: i64, to: i64 },
    #[error("Jantzen search exceeded depth limit {0}")]
    DepthLimit(usize),
    #[error("block mismatch: {0}")]
    BlockMismatch(String),
    #[error("triangularity failure for {mu} at n = {n}: {detail}")]
    Triangularity { mu: String, n: usize, detail: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
