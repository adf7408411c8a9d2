//! Error type shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CcksError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invariant violation in field `{field}`: {msg}")]
    Invariant { field: String, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

impl CcksError {
    pub fn domain(msg: impl Into<String>) -> Self {
        CcksError::Domain(msg.into())
    }
    pub fn usage(msg: impl Into<String>) -> Self {
        CcksError::Usage(msg.into())
    }
    pub fn invariant(field: impl Into<String>, msg: impl Into<String>) -> Self {
        CcksError::Invariant {
            field: field.into(),
            msg: msg.into(),
        }
    }
}
