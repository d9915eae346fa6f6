use thiserror::Error;

/// Failure modes shared by every module of the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },
    #[error("quadrature failed to converge: {0}")]
    Convergence(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("coefficient table: {0}")]
    Table(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("truncation budget exhausted: {0}")]
    Truncation(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

