use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Operands act on different qubit counts.
    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// An operation was asked to materialize something beyond its size ceiling.
    #[error("capacity exceeded: {what} supports n <= {limit}, got n = {n}")]
    Capacity {
        what: &'static str,
        limit: usize,
        n: usize,
    },

    /// A precondition of an operation was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A numerical integrity check failed (e.g. imaginary residue too large).
    #[error("numerical integrity: {0}")]
    Numerical(String),

    /// A text Hamiltonian file failed to parse.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A file's contents disagree with its own declared schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// An optimization run produced a non-finite cost.
    #[error("optimizer diverged: {0}")]
    Diverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn check_same_n(left: usize, right: usize) -> Result<()> {
        if left == right {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left, right })
        }
    }
}
