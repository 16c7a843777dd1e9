use super::{check_seeds, FloodFillParams, SeedOutcome, SeedStatus, WeakLabelResult};
use crate::error::{Error, Result};
use crate::raster::{binarize, close, flood_fill_bounded, skeletonize, BinaryMask, DiskSE, GrayImage, SeedPoint};

/// Every intermediate raster of the flood-fill pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct FloodFillStages {
    pub binary: BinaryMask,
    pub skeleton: BinaryMask,
    /// The closed skeleton; fills never cross its foreground.
    pub barrier: BinaryMask,
    pub result: WeakLabelResult,
}

/// `close(skeletonize(binarize(image)), disk(closing_radius))`.
pub fn barrier_mask(image: &GrayImage, params: &FloodFillParams) -> BinaryMask {
    let binary = binarize(image, params.threshold);
    close(&skeletonize(&binary), DiskSE::new(params.closing_radius))
}

pub fn floodfill_pipeline(
    image: &GrayImage,
    seeds: &[SeedPoint],
    params: &FloodFillParams,
) -> Result<WeakLabelResult> {
    floodfill_stages(image, seeds, params, None).map(|s| s.result)
}

/// As [`floodfill_pipeline`], but each seed's fill stops after `budget`
/// pixels.
pub fn floodfill_pipeline_bounded(
    image: &GrayImage,
    seeds: &[SeedPoint],
    params: &FloodFillParams,
    budget: Option<usize>,
) -> Result<WeakLabelResult> {
    floodfill_stages(image, seeds, params, budget).map(|s| s.result)
}

pub fn floodfill_stages(
    image: &GrayImage,
    seeds: &[SeedPoint],
    params: &FloodFillParams,
    budget: Option<usize>,
) -> Result<FloodFillStages> {
    params.validate()?;
    check_seeds(image, seeds)?;

    let binary = binarize(image, params.threshold);
    let skeleton = skeletonize(&binary);
    let barrier = close(&skeleton, DiskSE::new(params.closing_radius));

    let leak_limit = params.leak_ratio * image.len() as f64;
    let mut mask = WeakLabelResult::empty_like(image);
    let mut per_seed = Vec::with_capacity(seeds.len());
    let mut complete = true;
    for &seed in seeds {
        // a click on membrane is rejected even where thinning removed it
        // from the barrier
        if binary.get(seed.row, seed.col) {
            per_seed.push(SeedOutcome {
                seed,
                pixels: 0,
                status: SeedStatus::SeedOnBarrier,
            });
            continue;
        }
        match flood_fill_bounded(&barrier, seed, budget) {
            Ok(fill) => {
                let status = if fill.pixels as f64 > leak_limit {
                    SeedStatus::SuspectLeak
                } else {
                    SeedStatus::FilledOk
                };
                complete &= fill.complete;
                mask = mask.union(&fill.mask);
                per_seed.push(SeedOutcome {
                    seed,
                    pixels: fill.pixels,
                    status,
                });
            }
            Err(Error::SeedOnBarrier { .. }) => per_seed.push(SeedOutcome {
                seed,
                pixels: 0,
                status: SeedStatus::SeedOnBarrier,
            }),
            Err(e) => return Err(e),
        }
    }

    Ok(FloodFillStages {
        binary,
        skeleton,
        barrier,
        result: WeakLabelResult {
            mask,
            per_seed,
            complete,
        },
    })
}
