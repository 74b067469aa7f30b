use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search budget of {budget} nodes exceeded")]
    Budget { budget: u64 },
    #[error("no sample with girth >= {girth} after {attempts} attempts at n = {n}")]
    RejectionCap { n: usize, girth: u32, attempts: u64 },
    #[error("no integer x with 0.454n < x <= 0.45537n for n = {n}{hint}")]
    EmptyWindow { n: u64, hint: String },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
