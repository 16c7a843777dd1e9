//! HTTP backend for interactive click-point annotation.
//!
//! | method | path                         | purpose                                  |
//! |--------|------------------------------|------------------------------------------|
//! | GET    | `/projects`                  | list projects                            |
//! | POST   | `/projects`                  | create a project and import its images   |
//! | GET    | `/image/{id}?project=p`      | source image as PNG                      |
//! | POST   | `/preview`                   | run a pipeline on working seeds          |
//! | POST   | `/save`                      | persist the session to the project store |
//! | GET    | `/export/{id}.{png,pgm}?project=p[&method=m]` | mask raster         |
//!
//! Previews update the in-memory session only. Saves are serialized per
//! project; different projects never wait on each other.

mod api;
mod error;
mod routes;
mod session;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::routing::{get, post};
use axum::Router;

pub use api::{
    CreateProject, Diagnostic, ImportImage, PreviewRequest, PreviewResponse, ProjectList, ProjectSummary,
    SaveRequest, SaveResponse,
};
pub use error::ApiError;
pub use session::{Registry, Session, SessionHandle};

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    /// Directory holding one sub-directory per project.
    pub projects_dir: PathBuf,
    /// Per-seed pixel cap for previews; `None` is unbounded.
    pub pixel_budget: Option<usize>,
}

impl ServiceConfig {
    pub fn new(projects_dir: impl Into<PathBuf>) -> Self {
        Self {
            projects_dir: projects_dir.into(),
            pixel_budget: Some(4_000_000),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AppState {
    pub(crate) registry: Arc<Registry>,
    pub(crate) pixel_budget: Option<usize>,
}

impl AppState {
    pub fn new(config: &ServiceConfig) -> Self {
        Self {
            registry: Arc::new(Registry::new(&config.projects_dir)),
            pixel_budget: config.pixel_budget,
        }
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/projects", get(routes::list_projects).post(routes::create_project))
        .route("/image/{id}", get(routes::image))
        .route("/preview", post(routes::preview))
        .route("/save", post(routes::save))
        .route("/export/{file}", get(routes::export))
        .with_state(state)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(&config))).await
}
