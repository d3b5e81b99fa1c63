use serde_json::Value as Json;
use thiserror::Error;

use crate::iri::Iri;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Stable machine-readable error codes shared by the API and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ErrorCode {
    NotFound,
    ValidationError,
    ConstraintViolation,
    Forbidden,
    Gone,
    Conflict,
    SpecError,
    UnmappedEntityError,
    CrosswalkError,
    RenderError,
    FormatError,
    ImportError,
    IoError,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::NotFound => "NotFound",
            ErrorCode::ValidationError => "ValidationError",
            ErrorCode::ConstraintViolation => "ConstraintViolation",
            ErrorCode::Forbidden => "Forbidden",
            ErrorCode::Gone => "Gone",
            ErrorCode::Conflict => "Conflict",
            ErrorCode::SpecError => "SpecError",
            ErrorCode::UnmappedEntityError => "UnmappedEntityError",
            ErrorCode::CrosswalkError => "CrosswalkError",
            ErrorCode::RenderError => "RenderError",
            ErrorCode::FormatError => "FormatError",
            ErrorCode::ImportError => "ImportError",
            ErrorCode::IoError => "IoError",
        }
    }
}

impl std::fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("not found: {0}")]
    NotFound(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("forbidden: {0}")]
    Forbidden(String),

    /// The anchor was soft-deleted. Carries the provenance record that stays
    /// accessible after deletion.
    #[error("gone: {message}")]
    Gone { message: String, metadata: Box<Json> },

    #[error("conflict: {0}")]
    Conflict(String),

    #[error("invalid crosswalk spec: {0}")]
    Spec(String),

    #[error("no entity mapping for <{0}>")]
    UnmappedEntity(Iri),

    #[error("crosswalk failed: {0}")]
    Crosswalk(String),

    #[error("render failed: {0}")]
    Render(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: u64, column: u64, message: String },

    #[error("import failed: {}", .offending.join("; "))]
    Import { offending: Vec<String> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn code(&self) -> ErrorCode {
        match self {
            Error::NotFound(_) => ErrorCode::NotFound,
            Error::Validation(_) => ErrorCode::ValidationError,
            Error::ConstraintViolation(_) => ErrorCode::ConstraintViolation,
            Error::Forbidden(_) => ErrorCode::Forbidden,
            Error::Gone { .. } => ErrorCode::Gone,
            Error::Conflict(_) => ErrorCode::Conflict,
            Error::Spec(_) => ErrorCode::SpecError,
            Error::UnmappedEntity(_) => ErrorCode::UnmappedEntityError,
            Error::Crosswalk(_) => ErrorCode::CrosswalkError,
            Error::Render(_) => ErrorCode::RenderError,
            Error::Format(_) | Error::Syntax { .. } => ErrorCode::FormatError,
            Error::Import { .. } => ErrorCode::ImportError,
            Error::Io(_) => ErrorCode::IoError,
        }
    }

    /// Structured payload for API error envelopes.
    pub fn details(&self) -> Option<Json> {
        match self {
            Error::Gone { metadata, .. } => Some((**metadata).clone()),
            Error::Syntax { line, column, .. } => {
                Some(serde_json::json!({ "line": line, "column": column }))
            }
            Error::Import { offending } => Some(serde_json::json!({ "offending": offending })),
            Error::UnmappedEntity(iri) => Some(serde_json::json!({ "iri": iri.as_str() })),
            _ => None,
        }
    }
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub(crate) fn violation(msg: impl Into<String>) -> Error {
    Error::ConstraintViolation(msg.into())
}
