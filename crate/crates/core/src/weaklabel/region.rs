//! Seeded region growing.
//!
//! Starting from the seed, each step absorbs the 4-neighbour of the region
//! whose intensity is closest to the current region mean, then updates the
//! mean. Growth stops once that closest difference is strictly larger than
//! the stop threshold, or there is nothing left to absorb.
//!
//! The frontier lives in per-intensity buckets ordered by pixel index, so a
//! step only has to look at the two buckets straddling the mean. The mean
//! is kept as an exact integer sum over an integer count; differences are
//! compared as `|v·n − sum|`, which needs no division.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Bound::{Excluded, Included, Unbounded};

use rayon::prelude::*;

use super::{check_seeds, RegionGrowParams, SeedOutcome, SeedStatus, WeakLabelResult};
use crate::error::Result;
use crate::raster::{neighbors4, BinaryMask, BoundedFill, GrayImage, SeedPoint};

pub fn region_grow(image: &GrayImage, seed: SeedPoint, params: &RegionGrowParams) -> Result<BinaryMask> {
    region_grow_bounded(image, seed, params, None).map(|g| g.mask)
}

/// [`region_grow`] that stops once the region holds `budget` pixels.
pub fn region_grow_bounded(
    image: &GrayImage,
    seed: SeedPoint,
    params: &RegionGrowParams,
    budget: Option<usize>,
) -> Result<BoundedFill> {
    params.validate()?;
    image.check_seed(seed)?;
    let (w, h) = (image.width(), image.height());
    let pixels = image.data();
    let limit = budget.unwrap_or(usize::MAX).max(1);

    let mut in_region = vec![false; w * h];
    let mut queued = vec![false; w * h];
    let mut frontier: BTreeMap<u8, BTreeSet<usize>> = BTreeMap::new();

    let start = seed.row * w + seed.col;
    in_region[start] = true;
    queued[start] = true;
    let mut sum = pixels[start] as u64;
    let mut n = 1u64;
    let mut complete = true;

    let push_neighbors = |i: usize, queued: &mut [bool], frontier: &mut BTreeMap<u8, BTreeSet<usize>>| {
        for j in neighbors4(i, w, h) {
            if !queued[j] {
                queued[j] = true;
                frontier.entry(pixels[j]).or_default().insert(j);
            }
        }
    };
    push_neighbors(start, &mut queued, &mut frontier);

    loop {
        // floor(mean): largest v with v·n <= sum
        let floor = (sum / n) as u8;
        let below = frontier
            .range((Unbounded, Included(floor)))
            .next_back()
            .map(|(&v, set)| (sum - v as u64 * n, *set.first().expect("non-empty bucket"), v));
        let above = frontier
            .range((Excluded(floor), Unbounded))
            .next()
            .map(|(&v, set)| (v as u64 * n - sum, *set.first().expect("non-empty bucket"), v));
        let best = match (below, above) {
            (None, None) => break,
            (Some(b), None) => b,
            (None, Some(a)) => a,
            // (difference, index) ordering: closest first, then raster order
            (Some(b), Some(a)) => b.min(a),
        };
        let (diff, index, value) = best;
        if diff as f64 / n as f64 > params.stop_threshold {
            break;
        }
        if n as usize >= limit {
            complete = false;
            break;
        }

        let bucket = frontier.get_mut(&value).expect("bucket exists");
        bucket.remove(&index);
        if bucket.is_empty() {
            frontier.remove(&value);
        }
        in_region[index] = true;
        sum += value as u64;
        n += 1;
        push_neighbors(index, &mut queued, &mut frontier);
    }

    Ok(BoundedFill {
        mask: BinaryMask::new(w, h, in_region)?,
        pixels: n as usize,
        complete,
    })
}

/// Grows one region per seed, independently, and unions them.
pub fn region_grow_all(image: &GrayImage, seeds: &[SeedPoint], params: &RegionGrowParams) -> Result<WeakLabelResult> {
    region_grow_all_bounded(image, seeds, params, None)
}

pub fn region_grow_all_bounded(
    image: &GrayImage,
    seeds: &[SeedPoint],
    params: &RegionGrowParams,
    budget: Option<usize>,
) -> Result<WeakLabelResult> {
    params.validate()?;
    check_seeds(image, seeds)?;
    let grown: Vec<BoundedFill> = seeds
        .par_iter()
        .map(|&seed| region_grow_bounded(image, seed, params, budget))
        .collect::<Result<_>>()?;

    let mut mask = WeakLabelResult::empty_like(image);
    let mut complete = true;
    let mut per_seed = Vec::with_capacity(seeds.len());
    for (&seed, region) in seeds.iter().zip(&grown) {
        mask = mask.union(&region.mask);
        complete &= region.complete;
        per_seed.push(SeedOutcome {
            seed,
            pixels: region.pixels,
            status: SeedStatus::FilledOk,
        });
    }
    Ok(WeakLabelResult {
        mask,
        per_seed,
        complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn rg(t: f64) -> RegionGrowParams {
        RegionGrowParams { stop_threshold: t }
    }

    #[test]
    fn constant_image_fills_everything() {
        let img = GrayImage::filled(7, 5, 90).unwrap();
        let m = region_grow(&img, SeedPoint::new(2, 3), &rg(0.0)).unwrap();
        assert_eq!(m.count_foreground(), 35);
    }

    #[test]
    fn three_by_three_fixture() {
        // centre 100; N 100, W 100, E 102, S 120; corners 200
        let img = GrayImage::new(3, 3, vec![200, 100, 200, 100, 100, 102, 200, 120, 200]).unwrap();
        let m = region_grow(&img, SeedPoint::new(1, 1), &rg(5.0)).unwrap();
        let expected = BinaryMask::new(
            3,
            3,
            vec![false, true, false, true, true, true, false, false, false],
        )
        .unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn equality_continues_growth() {
        let img = GrayImage::new(2, 1, vec![10, 15]).unwrap();
        assert_eq!(region_grow(&img, SeedPoint::new(0, 0), &rg(5.0)).unwrap().count_foreground(), 2);
        assert_eq!(region_grow(&img, SeedPoint::new(0, 0), &rg(4.999)).unwrap().count_foreground(), 1);
    }

    #[test]
    fn ties_break_by_raster_order() {
        // seed 50 in the middle of a row; 45 left, 55 right: both differ by 5
        let img = GrayImage::new(3, 1, vec![45, 50, 55]).unwrap();
        let grown = region_grow_bounded(&img, SeedPoint::new(0, 1), &rg(10.0), Some(2)).unwrap();
        assert!(!grown.complete);
        assert_eq!(grown.mask.data(), &[true, true, false]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let img = GrayImage::filled(3, 3, 0).unwrap();
        assert!(matches!(region_grow(&img, SeedPoint::new(3, 0), &rg(1.0)), Err(Error::SeedOutOfBounds { .. })));
        assert!(matches!(region_grow(&img, SeedPoint::new(0, 0), &rg(-1.0)), Err(Error::InvalidParameter(_))));
        assert!(matches!(region_grow(&img, SeedPoint::new(0, 0), &rg(f64::NAN)), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn all_seeds_union() {
        let img = GrayImage::from_fn(10, 4, |_, c| if c < 4 { 30 } else if c < 6 { 250 } else { 60 }).unwrap();
        let res = region_grow_all(&img, &[SeedPoint::new(0, 0), SeedPoint::new(3, 9)], &rg(5.0)).unwrap();
        assert_eq!(res.per_seed[0].pixels, 16);
        assert_eq!(res.per_seed[1].pixels, 16);
        assert_eq!(res.mask.count_foreground(), 32);

        let same = region_grow_all(&img, &[SeedPoint::new(0, 0), SeedPoint::new(2, 2)], &rg(5.0)).unwrap();
        assert_eq!(same.per_seed.len(), 2);
        assert_eq!(same.mask, region_grow(&img, SeedPoint::new(0, 0), &rg(5.0)).unwrap());

        let none = region_grow_all(&img, &[], &rg(5.0)).unwrap();
        assert_eq!(none.mask.count_foreground(), 0);
    }
}
