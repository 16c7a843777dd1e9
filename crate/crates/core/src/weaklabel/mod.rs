//! Click-point to mask pipelines.
//!
//! Two ways to turn single-pixel seeds into a full binary mask:
//!
//! * [`floodfill_pipeline`]: binarize, skeletonize, close, then flood fill
//!   from each seed inside the resulting barrier.
//! * [`region_grow`] / [`region_grow_all`]: grow a region from each seed by
//!   repeatedly absorbing the neighbouring pixel whose intensity is closest
//!   to the region mean.
//!
//! Both are deterministic; the per-seed work is independent and the final
//! mask is the union of the per-seed regions.

mod floodfill;
mod region;

pub use floodfill::{barrier_mask, floodfill_pipeline, floodfill_pipeline_bounded, floodfill_stages, FloodFillStages};
pub use region::{region_grow, region_grow_all, region_grow_all_bounded, region_grow_bounded};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage, SeedPoint, ThresholdMethod};

pub const DEFAULT_LEAK_RATIO: f64 = 0.1;

fn default_leak_ratio() -> f64 {
    DEFAULT_LEAK_RATIO
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloodFillParams {
    pub threshold: ThresholdMethod,
    pub closing_radius: u32,
    /// A single fill larger than this fraction of the image is flagged
    /// [`SeedStatus::SuspectLeak`].
    #[serde(default = "default_leak_ratio")]
    pub leak_ratio: f64,
}

impl Default for FloodFillParams {
    fn default() -> Self {
        Self {
            threshold: ThresholdMethod::default(),
            closing_radius: 1,
            leak_ratio: DEFAULT_LEAK_RATIO,
        }
    }
}

impl FloodFillParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.leak_ratio > 0.0 && self.leak_ratio <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "leak_ratio must be in (0, 1], got {}",
                self.leak_ratio
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionGrowParams {
    /// Growth stops once the closest neighbour differs from the region mean
    /// by strictly more than this many intensity levels.
    pub stop_threshold: f64,
}

impl Default for RegionGrowParams {
    fn default() -> Self {
        Self { stop_threshold: 10.0 }
    }
}

impl RegionGrowParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.stop_threshold.is_finite() && self.stop_threshold >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "stop_threshold must be a finite value >= 0, got {}",
                self.stop_threshold
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FloodFill,
    RegionGrow,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::FloodFill => "flood_fill",
            Method::RegionGrow => "region_grow",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flood_fill" | "fill" => Ok(Method::FloodFill),
            "region_grow" | "rg" => Ok(Method::RegionGrow),
            _ => Err(Error::InvalidParameter(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeedStatus {
    FilledOk,
    /// The seed is a membrane pixel after thresholding, or lies on the
    /// closed barrier. It contributes nothing to the mask.
    SeedOnBarrier,
    SuspectLeak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedOutcome {
    pub seed: SeedPoint,
    /// Size of this seed's own region, before the union.
    pub pixels: usize,
    pub status: SeedStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakLabelResult {
    /// Union of every per-seed region.
    pub mask: BinaryMask,
    pub per_seed: Vec<SeedOutcome>,
    /// False when a pixel budget cut at least one region short.
    pub complete: bool,
}

impl WeakLabelResult {
    fn empty_like(image: &GrayImage) -> BinaryMask {
        BinaryMask::filled(image.width(), image.height(), false).expect("shape of an existing image")
    }
}

fn check_seeds(image: &GrayImage, seeds: &[SeedPoint]) -> Result<()> {
    seeds.iter().try_for_each(|&s| image.check_seed(s))
}
