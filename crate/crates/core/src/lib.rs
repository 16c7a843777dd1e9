//! Weak segmentation labels from click-points, and the tools around them.
//!
//! * [`raster`]: grayscale/binary grids, thresholding, disk morphology,
//!   thinning and flood fill.
//! * [`weaklabel`]: the flood-fill pipeline and seeded region growing that
//!   turn single-pixel seeds into masks.
//! * [`augment`]: the eight square symmetries and in-border translations,
//!   applied jointly to image/label pairs.
//! * [`metrics`]: confusion matrix, accuracy, Jaccard, single-point AUROC,
//!   Cohen's kappa, error rates and agreement grading.
//! * [`store`]: project documents with sibling raster files.
//! * [`io`]: PGM/PNG and click-point files.
//!
//! ```
//! use seedmask::synthetic::two_ring_fixture;
//! use seedmask::weaklabel::{floodfill_pipeline, FloodFillParams, SeedStatus};
//!
//! let (image, seeds) = two_ring_fixture(None);
//! let labels = floodfill_pipeline(&image, &seeds, &FloodFillParams::default()).unwrap();
//! assert!(labels.per_seed.iter().all(|s| s.status == SeedStatus::FilledOk));
//! ```

pub mod augment;
pub mod error;
pub mod io;
pub mod metrics;
pub mod raster;
pub mod store;
pub mod synthetic;
pub mod weaklabel;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/raster.md")]
    mod raster {}
    #[doc = include_str!("../../../book/src/weak-labels.md")]
    mod weak_labels {}
    #[doc = include_str!("../../../book/src/augmentation.md")]
    mod augmentation {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/projects.md")]
    mod projects {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/service.md")]
    mod service {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
