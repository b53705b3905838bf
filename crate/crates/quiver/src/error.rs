//! Error types shared across the engine.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("query syntax error at {pos}: {msg}")]
    QuerySyntax { pos: usize, msg: String },

    #[error("unsupported query feature: {0}")]
    Unsupported(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("direction-driven planning requires a constant-free query; use degree-driven planning")]
    DirectionPlanWithConstants,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("worker accessed {kind} {index} outside its node assignment")]
    AssignmentMiss { kind: &'static str, index: u32 },

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
