use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use rosetta_core::ErrorCode;
use serde::Serialize;

/// Error envelope shared by every endpoint and the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    pub status: u16,
    pub code: ErrorCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError { status: status_of(code).as_u16(), code, message: message.into(), details: None }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::ValidationError, message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::NotFound, message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::IoError, message)
    }

    pub fn with_details(mut self, details: serde_json::Value) -> Self {
        self.details = Some(details);
        self
    }

    /// Process exit status used by the CLI.
    pub fn exit_code(&self) -> u8 {
        exit_code(self.code)
    }
}

pub fn status_of(code: ErrorCode) -> StatusCode {
    match code {
        ErrorCode::NotFound => StatusCode::NOT_FOUND,
        ErrorCode::ValidationError
        | ErrorCode::ConstraintViolation
        | ErrorCode::SpecError
        | ErrorCode::UnmappedEntityError
        | ErrorCode::CrosswalkError
        | ErrorCode::FormatError
        | ErrorCode::ImportError => StatusCode::BAD_REQUEST,
        ErrorCode::Forbidden => StatusCode::FORBIDDEN,
        ErrorCode::Gone => StatusCode::GONE,
        ErrorCode::Conflict => StatusCode::CONFLICT,
        ErrorCode::RenderError | ErrorCode::IoError => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

pub fn exit_code(code: ErrorCode) -> u8 {
    match code {
        ErrorCode::IoError => 1,
        ErrorCode::NotFound => 3,
        ErrorCode::ValidationError => 4,
        ErrorCode::ConstraintViolation => 5,
        ErrorCode::Forbidden => 6,
        ErrorCode::Gone => 7,
        ErrorCode::Conflict => 8,
        ErrorCode::SpecError => 9,
        ErrorCode::UnmappedEntityError => 10,
        ErrorCode::CrosswalkError => 11,
        ErrorCode::RenderError => 12,
        ErrorCode::FormatError => 13,
        ErrorCode::ImportError => 14,
    }
}

impl From<rosetta_core::Error> for ApiError {
    fn from(e: rosetta_core::Error) -> Self {
        let details = e.details();
        ApiError { details, ..ApiError::new(e.code(), e.to_string()) }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for ApiError {}
