//! Crate-wide error type.
//!
//! Every fallible operation in the library returns [`Error`]. The variants
//! mirror the failure classes that matter to callers: dimension mismatches,
//! bad arguments, malformed input files, correlation data that cannot be
//! evaluated, and witness constructions that cannot succeed. The CLI maps
//! these onto its exit-code contract (`2` usage, `4` data).

use thiserror::Error;

/// Errors produced by the witness construction and evaluation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must act on the same number of qubits do not.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A file or string could not be parsed. `line` is 1-based when known.
    #[error("parse error{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse {
        /// 1-based line number in the offending input, when known.
        line: Option<u64>,
        /// Description of what was malformed.
        msg: String,
    },

    /// Parsed data violates an invariant (e.g. a correlation outside [-1, 1]).
    #[error("validation error: {0}")]
    Validation(String),

    /// Correlation data is missing or unusable for the requested evaluation.
    #[error("data error: {0}")]
    Data(String),

    /// The witness construction cannot produce a usable witness.
    #[error("construction error: {0}")]
    Construction(String),

    /// An underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Convenience constructor for parse errors without a line number.
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse { line: None, msg: msg.into() }
    }

    /// Convenience constructor for parse errors with a 1-based line number.
    pub fn parse_at(line: u64, msg: impl Into<String>) -> Self {
        Error::Parse { line: Some(line), msg: msg.into() }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
