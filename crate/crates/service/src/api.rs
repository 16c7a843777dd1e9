use seedmask::raster::SeedPoint;
use seedmask::store::ProjectParams;
use seedmask::weaklabel::{FloodFillParams, Method, RegionGrowParams, SeedStatus};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectSummary {
    pub name: String,
    pub images: Vec<String>,
    pub dirty: bool,
    /// Set when the project document could not be loaded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectList {
    pub projects: Vec<ProjectSummary>,
}

/// One image to import: inline bytes (PNG or PGM, base64) or a path
/// readable by the server.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImportImage {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_base64: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CreateProject {
    pub name: String,
    #[serde(default)]
    pub images: Vec<ImportImage>,
    #[serde(default)]
    pub params: Option<ProjectParams>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreviewRequest {
    pub project: String,
    pub image: String,
    #[serde(default)]
    pub seeds: Vec<SeedPoint>,
    pub method: Method,
    /// Omitted parameters keep the session's current values.
    #[serde(default)]
    pub flood_fill: Option<FloodFillParams>,
    #[serde(default)]
    pub region_grow: Option<RegionGrowParams>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub seed: SeedPoint,
    pub pixels: usize,
    pub status: SeedStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreviewResponse {
    pub image: String,
    pub method: Method,
    pub width: usize,
    pub height: usize,
    /// Mask as an 8-bit grayscale PNG, 255 for foreground.
    pub mask_png_base64: String,
    pub foreground: usize,
    pub diagnostics: Vec<Diagnostic>,
    /// True when the pixel budget cut at least one region short.
    pub partial: bool,
    /// False when a newer preview for the same project finished first; the
    /// session then keeps the newer result.
    pub current: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaveRequest {
    pub project: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaveResponse {
    pub project: String,
    /// False when there was nothing to save.
    pub saved: bool,
    pub masks: usize,
}
