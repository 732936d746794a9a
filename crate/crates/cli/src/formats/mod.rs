//! File formats: the OR-Library-style sparse QUBO text format, the
//! whitespace QAPLIB format, and the native versioned JSON documents.

pub mod bqp;
pub mod native;
pub mod qaplib;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("expected {expected} numbers, found {found}")]
    TokenCount { expected: usize, found: usize },
    #[error("token '{token}' is not a number")]
    BadToken { token: String },
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Invalid(String),
}
