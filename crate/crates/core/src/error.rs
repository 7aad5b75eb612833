use std::io;

use thiserror::Error;

/// Errors raised by graph construction, counting and file handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A computation would exceed its configured budget.
    #[error("resource limit: {reason}{}", hint.as_ref().map(|h| format!(" ({h})")).unwrap_or_default())]
    Resource { reason: String, hint: Option<String> },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn resource(reason: impl Into<String>) -> Self {
        Error::Resource { reason: reason.into(), hint: None }
    }

    pub(crate) fn resource_with_hint(reason: impl Into<String>, hint: impl Into<String>) -> Self {
        Error::Resource { reason: reason.into(), hint: Some(hint.into()) }
    }

    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::Parse { line, reason: reason.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
