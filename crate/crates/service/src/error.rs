use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use seedmask::raster::SeedPoint;
use serde::Serialize;

/// Error body: `{"error": kind, "message": text}` plus `seed`/`index` for
/// seed errors.
#[derive(Debug)]
pub enum ApiError {
    UnknownProject(String),
    UnknownImage(String),
    ProjectExists(String),
    SeedOutOfBounds { index: usize, seed: SeedPoint, message: String },
    BadRequest(String),
    Internal(String),
    Store(seedmask::Error),
}

#[derive(Serialize)]
struct Body<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<SeedPoint>,
}

impl ApiError {
    fn kind(&self) -> (StatusCode, &'static str) {
        match self {
            ApiError::UnknownProject(_) => (StatusCode::NOT_FOUND, "unknown_project"),
            ApiError::UnknownImage(_) => (StatusCode::NOT_FOUND, "unknown_image"),
            ApiError::ProjectExists(_) => (StatusCode::CONFLICT, "project_exists"),
            ApiError::SeedOutOfBounds { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "seed_out_of_bounds"),
            ApiError::BadRequest(_) => (StatusCode::BAD_REQUEST, "bad_request"),
            ApiError::Internal(_) => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
            ApiError::Store(seedmask::Error::InvalidParameter(_)) => (StatusCode::BAD_REQUEST, "invalid_parameter"),
            ApiError::Store(_) => (StatusCode::INTERNAL_SERVER_ERROR, "store_failure"),
        }
    }

    fn message(&self) -> String {
        match self {
            ApiError::UnknownProject(p) => format!("no project named `{p}`"),
            ApiError::UnknownImage(i) => format!("no image with id `{i}`"),
            ApiError::ProjectExists(p) => format!("project `{p}` already exists"),
            ApiError::SeedOutOfBounds { message, .. } => message.clone(),
            ApiError::BadRequest(m) | ApiError::Internal(m) => m.clone(),
            ApiError::Store(e) => e.to_string(),
        }
    }
}

impl From<seedmask::Error> for ApiError {
    fn from(e: seedmask::Error) -> Self {
        ApiError::Store(e)
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message())
    }
}

impl std::error::Error for ApiError {}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, kind) = self.kind();
        let (index, seed) = match &self {
            ApiError::SeedOutOfBounds { index, seed, .. } => (Some(*index), Some(*seed)),
            _ => (None, None),
        };
        let body = Body {
            error: kind,
            message: self.message(),
            index,
            seed,
        };
        (status, Json(body)).into_response()
    }
}
