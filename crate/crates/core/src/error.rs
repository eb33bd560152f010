use thiserror::Error;

use crate::planar::EdgeId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("edge {edge} occurs {count} times (expected 2)")]
    EdgeMultiplicity { edge: EdgeId, count: usize },
    #[error("inconsistent orientation: {0}")]
    Orientation(String),
    #[error("non-planar gluing: {0}")]
    NonPlanar(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
    #[error("time limit of {0:?} exceeded")]
    Timeout(std::time::Duration),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
