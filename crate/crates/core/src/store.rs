//! Annotation project persistence.
//!
//! A project is a JSON document plus sibling raster files. Paths inside the
//! document are relative to the document's directory:
//!
//! ```text
//! my-project/
//!   project.json
//!   images/slice-0001.pgm
//!   masks/slice-0001.flood_fill.png
//! ```
//!
//! Saves are canonical (fixed field order, sorted maps), so saving an
//! unchanged project twice produces identical bytes, and atomic.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use chrono::{DateTime, SubsecRound, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{self, ImageFormat};
use crate::raster::{BinaryMask, GrayImage, SeedPoint};
use crate::weaklabel::{FloodFillParams, Method, RegionGrowParams};

pub const SCHEMA_VERSION: u32 = 1;
pub const PROJECT_FILE: &str = "project.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageEntry {
    pub id: String,
    pub path: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MaskEntry {
    pub image: String,
    pub method: Method,
    pub path: PathBuf,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProjectParams {
    pub flood_fill: FloodFillParams,
    pub region_grow: RegionGrowParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Project {
    pub schema_version: u32,
    pub name: String,
    pub created: DateTime<Utc>,
    pub modified: DateTime<Utc>,
    pub images: Vec<ImageEntry>,
    pub seeds: BTreeMap<String, Vec<SeedPoint>>,
    pub params: ProjectParams,
    pub masks: Vec<MaskEntry>,
}

/// Ids become file names, so they are restricted to `[A-Za-z0-9._-]` and
/// may not start with a dot.
pub fn validate_id(id: &str) -> Result<()> {
    let ok = !id.is_empty()
        && !id.starts_with('.')
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "`{id}` is not a valid id (use letters, digits, '.', '_', '-')"
        )))
    }
}

impl Project {
    pub fn new(name: impl Into<String>) -> Self {
        let now = Utc::now().trunc_subsecs(3);
        Self {
            schema_version: SCHEMA_VERSION,
            name: name.into(),
            created: now,
            modified: now,
            images: Vec::new(),
            seeds: BTreeMap::new(),
            params: ProjectParams::default(),
            masks: Vec::new(),
        }
    }

    pub fn image(&self, id: &str) -> Option<&ImageEntry> {
        self.images.iter().find(|e| e.id == id)
    }

    pub fn seeds_for(&self, id: &str) -> &[SeedPoint] {
        self.seeds.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn mask(&self, id: &str, method: Method) -> Option<&MaskEntry> {
        self.masks.iter().find(|m| m.image == id && m.method == method)
    }

    /// Writes `image` under `root/images/` and registers it as `id`.
    pub fn add_image(&mut self, root: &Path, id: &str, image: &GrayImage, format: ImageFormat) -> Result<()> {
        validate_id(id)?;
        if self.image(id).is_some() {
            return Err(Error::InvalidParameter(format!("image id `{id}` already exists")));
        }
        let rel = PathBuf::from("images").join(format!("{id}.{}", format.extension()));
        write_raster(root, &rel, &io::encode(image, format))?;
        self.images.push(ImageEntry {
            id: id.to_string(),
            path: rel,
        });
        Ok(())
    }

    pub fn load_image(&self, root: &Path, id: &str) -> Result<GrayImage> {
        let entry = self
            .image(id)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown image id `{id}`")))?;
        io::load_gray(&root.join(&entry.path))
    }

    /// Writes `mask` as `root/masks/<id>.<method>.png` and records it,
    /// replacing any earlier mask for the same image and method.
    pub fn store_mask(&mut self, root: &Path, id: &str, method: Method, mask: &BinaryMask) -> Result<()> {
        if self.image(id).is_none() {
            return Err(Error::InvalidParameter(format!("unknown image id `{id}`")));
        }
        let rel = PathBuf::from("masks").join(format!("{id}.{method}.png"));
        write_raster(root, &rel, &io::encode_png(&mask.to_gray()))?;
        self.masks.retain(|m| !(m.image == id && m.method == method));
        self.masks.push(MaskEntry {
            image: id.to_string(),
            method,
            path: rel,
        });
        self.masks.sort();
        Ok(())
    }

    pub fn touch(&mut self) {
        self.modified = Utc::now().trunc_subsecs(3);
    }

    fn canonical_json(&self) -> Result<String> {
        let mut copy = self.clone();
        copy.masks.sort();
        Ok(serde_json::to_string_pretty(&copy)? + "\n")
    }

    /// Checks every invariant against the rasters under `root`.
    pub fn validate(&self, root: &Path) -> Result<()> {
        let schema = |field: String, reason: String| Error::SchemaViolation { field, reason };
        if self.schema_version != SCHEMA_VERSION {
            return Err(schema(
                "schema_version".into(),
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        if self.name.trim().is_empty() {
            return Err(schema("name".into(), "must not be empty".into()));
        }
        self.params
            .flood_fill
            .validate()
            .map_err(|e| schema("params.flood_fill".into(), e.to_string()))?;
        self.params
            .region_grow
            .validate()
            .map_err(|e| schema("params.region_grow".into(), e.to_string()))?;

        let mut dims = BTreeMap::new();
        for (i, entry) in self.images.iter().enumerate() {
            validate_id(&entry.id).map_err(|e| schema(format!("images[{i}].id"), e.to_string()))?;
            if dims.contains_key(entry.id.as_str()) {
                return Err(schema(format!("images[{i}].id"), format!("duplicate id `{}`", entry.id)));
            }
            let image = load_referenced(root, &entry.path)?;
            dims.insert(entry.id.as_str(), (image.width(), image.height()));
        }

        for (id, seeds) in &self.seeds {
            let &(w, h) = dims
                .get(id.as_str())
                .ok_or_else(|| schema(format!("seeds.{id}"), "no image with this id".into()))?;
            for (k, s) in seeds.iter().enumerate() {
                if s.row >= h || s.col >= w {
                    return Err(schema(
                        format!("seeds.{id}[{k}]"),
                        format!("({}, {}) is outside the {w}x{h} image", s.row, s.col),
                    ));
                }
            }
        }

        let mut seen = BTreeSet::new();
        for (i, m) in self.masks.iter().enumerate() {
            let &(w, h) = dims
                .get(m.image.as_str())
                .ok_or_else(|| schema(format!("masks[{i}].image"), format!("no image `{}`", m.image)))?;
            if !seen.insert((m.image.as_str(), m.method)) {
                return Err(schema(format!("masks[{i}]"), "duplicate image/method pair".into()));
            }
            let mask = load_referenced(root, &m.path)?;
            if (mask.width(), mask.height()) != (w, h) {
                return Err(schema(
                    format!("masks[{i}].path"),
                    format!("mask is {}x{}, image is {w}x{h}", mask.width(), mask.height()),
                ));
            }
        }
        Ok(())
    }
}

fn write_raster(root: &Path, rel: &Path, bytes: &[u8]) -> Result<()> {
    let path = root.join(rel);
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    io::write_atomic(&path, bytes)
}

fn load_referenced(root: &Path, rel: &Path) -> Result<GrayImage> {
    let path = root.join(rel);
    if !path.exists() {
        return Err(Error::StaleReference { path });
    }
    io::load_gray(&path)
}

fn root_of(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

/// Writes the project document to `path` (temp file, then rename).
/// Rasters are written separately through [`Project::add_image`] and
/// [`Project::store_mask`].
pub fn save_project(project: &Project, path: &Path) -> Result<()> {
    let json = project.canonical_json()?;
    io::write_atomic(path, json.as_bytes())
}

/// Reads and fully validates a project document.
pub fn load_project(path: &Path) -> Result<Project> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let project: Project = serde_path_to_error::deserialize(de).map_err(|e| Error::SchemaViolation {
        field: e.path().to_string(),
        reason: e.inner().to_string(),
    })?;
    project.validate(root_of(path))?;
    Ok(project)
}
