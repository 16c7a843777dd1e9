use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::Json;
use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use seedmask::io::{self, ImageFormat};
use seedmask::raster::GrayImage;
use seedmask::store::{validate_id, Project, PROJECT_FILE};
use seedmask::weaklabel::{floodfill_pipeline_bounded, region_grow_all_bounded, Method};
use serde::Deserialize;

use crate::api::*;
use crate::error::ApiError;
use crate::session::SessionHandle;
use crate::AppState;

type ApiResult<T> = Result<T, ApiError>;

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(format!("worker failed: {e}")))
}

async fn summary(name: &str, handle: &SessionHandle) -> ProjectSummary {
    let s = handle.lock().await;
    ProjectSummary {
        name: name.to_string(),
        images: s.stored.images.iter().map(|e| e.id.clone()).collect(),
        dirty: s.dirty,
        error: None,
    }
}

pub async fn list_projects(State(state): State<AppState>) -> ApiResult<Json<ProjectList>> {
    let mut projects = Vec::new();
    for name in state.registry.list()? {
        let registry = state.registry.clone();
        let lookup = name.clone();
        match blocking(move || registry.get(&lookup)).await? {
            Ok(handle) => projects.push(summary(&name, &handle).await),
            Err(e) => projects.push(ProjectSummary {
                name,
                images: Vec::new(),
                dirty: false,
                error: Some(e.to_string()),
            }),
        }
    }
    Ok(Json(ProjectList { projects }))
}

fn import(img: &ImportImage) -> ApiResult<GrayImage> {
    match (&img.data_base64, &img.source) {
        (Some(data), None) => {
            let bytes = BASE64
                .decode(data)
                .map_err(|e| ApiError::BadRequest(format!("image `{}`: invalid base64: {e}", img.id)))?;
            io::decode(&bytes).map_err(|e| ApiError::BadRequest(format!("image `{}`: {e}", img.id)))
        }
        (None, Some(path)) => Ok(io::load_gray(std::path::Path::new(path))?),
        _ => Err(ApiError::BadRequest(format!(
            "image `{}` needs exactly one of data_base64 or source",
            img.id
        ))),
    }
}

pub async fn create_project(
    State(state): State<AppState>,
    Json(req): Json<CreateProject>,
) -> ApiResult<(StatusCode, Json<ProjectSummary>)> {
    validate_id(&req.name).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let root = state.registry.project_root(&req.name)?;
    if root.join(PROJECT_FILE).exists() {
        return Err(ApiError::ProjectExists(req.name));
    }
    let registry = state.registry.clone();
    let name = req.name.clone();
    let handle = blocking(move || -> ApiResult<SessionHandle> {
        let images = req.images.iter().map(import).collect::<ApiResult<Vec<_>>>()?;
        let mut project = Project::new(&req.name);
        if let Some(p) = req.params {
            project.params = p;
        }
        for (entry, img) in req.images.iter().zip(&images) {
            project.add_image(&root, &entry.id, img, ImageFormat::Png)?;
        }
        registry.create(&req.name, root, project)
    })
    .await??;
    Ok((StatusCode::CREATED, Json(summary(&name, &handle).await)))
}

#[derive(Deserialize)]
pub struct ProjectQuery {
    project: String,
}

pub async fn image(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<ProjectQuery>,
) -> ApiResult<impl IntoResponse> {
    let handle = state.registry.get(&q.project)?;
    let img = handle.lock().await.image(&id)?;
    let png = blocking(move || io::encode_png(&img)).await?;
    Ok(([(header::CONTENT_TYPE, "image/png")], png))
}

pub async fn preview(State(state): State<AppState>, Json(req): Json<PreviewRequest>) -> ApiResult<Json<PreviewResponse>> {
    let handle = state.registry.get(&req.project)?;
    let (img, mut params, ticket) = {
        let mut s = handle.lock().await;
        (s.image(&req.image)?, s.params, s.issue())
    };
    if let Some(p) = req.flood_fill {
        params.flood_fill = p;
    }
    if let Some(p) = req.region_grow {
        params.region_grow = p;
    }
    if let Some((index, &seed)) = req.seeds.iter().enumerate().find(|(_, s)| !img.contains(**s)) {
        return Err(ApiError::SeedOutOfBounds {
            index,
            seed,
            message: format!(
                "seed {index} at ({}, {}) lies outside the {}x{} image",
                seed.row,
                seed.col,
                img.width(),
                img.height()
            ),
        });
    }

    let budget = state.pixel_budget;
    let (method, seeds) = (req.method, req.seeds.clone());
    let result = blocking(move || match method {
        Method::FloodFill => floodfill_pipeline_bounded(&img, &seeds, &params.flood_fill, budget),
        Method::RegionGrow => region_grow_all_bounded(&img, &seeds, &params.region_grow, budget),
    })
    .await??;

    let mask_png = io::encode_png(&result.mask.to_gray());
    let response = PreviewResponse {
        image: req.image.clone(),
        method: req.method,
        width: result.mask.width(),
        height: result.mask.height(),
        mask_png_base64: BASE64.encode(mask_png),
        foreground: result.mask.count_foreground(),
        diagnostics: result
            .per_seed
            .iter()
            .map(|o| Diagnostic {
                seed: o.seed,
                pixels: o.pixels,
                status: o.status,
            })
            .collect(),
        partial: !result.complete,
        current: false,
    };
    let current = handle
        .lock()
        .await
        .apply_preview(ticket, &req.image, req.seeds, params, req.method, result.mask);
    Ok(Json(PreviewResponse { current, ..response }))
}

pub async fn save(State(state): State<AppState>, Json(req): Json<SaveRequest>) -> ApiResult<Json<SaveResponse>> {
    let handle = state.registry.get(&req.project)?;
    // held for the whole write: one writer per project
    let mut session = handle.lock_owned().await;
    if !session.dirty {
        return Ok(Json(SaveResponse {
            project: req.project,
            saved: false,
            masks: 0,
        }));
    }
    let masks = blocking(move || -> ApiResult<usize> {
        let next = session.staged()?;
        seedmask::store::save_project(&next, &session.root.join(PROJECT_FILE))?;
        let n = session.masks.len();
        session.commit(next);
        Ok(n)
    })
    .await??;
    Ok(Json(SaveResponse {
        project: req.project,
        saved: true,
        masks,
    }))
}

#[derive(Deserialize)]
pub struct ExportQuery {
    project: String,
    method: Option<Method>,
}

pub async fn export(
    State(state): State<AppState>,
    Path(file): Path<String>,
    Query(q): Query<ExportQuery>,
) -> ApiResult<impl IntoResponse> {
    let (id, format) = match file.rsplit_once('.') {
        Some((id, "png")) => (id.to_string(), ImageFormat::Png),
        Some((id, "pgm")) => (id.to_string(), ImageFormat::Pgm),
        _ => return Err(ApiError::BadRequest(format!("`{file}`: expected <id>.png or <id>.pgm"))),
    };
    let handle = state.registry.get(&q.project)?;
    let mask = {
        let s = handle.lock().await;
        let method = q.method.or(s.last_method).unwrap_or(Method::FloodFill);
        s.export_mask(&id, method)?
    };
    let content_type = match format {
        ImageFormat::Png => "image/png",
        ImageFormat::Pgm => "image/x-portable-graymap",
    };
    let bytes = blocking(move || io::encode(&mask.to_gray(), format)).await?;
    Ok(([(header::CONTENT_TYPE, content_type)], bytes))
}
