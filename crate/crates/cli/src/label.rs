use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use seedmask::io;
use seedmask::raster::{BinaryMask, GrayImage, SeedPoint};
use seedmask::weaklabel::{
    floodfill_stages, region_grow_all, FloodFillParams, RegionGrowParams, SeedStatus, WeakLabelResult,
};

use crate::{FillArgs, RgArgs, SeedInput};

fn load_input(input: &SeedInput) -> anyhow::Result<(GrayImage, Vec<SeedPoint>)> {
    let image = io::load_gray(&input.image)?;
    let mut seeds = match &input.seeds {
        Some(path) => io::load_seeds(path).with_context(|| format!("reading {}", path.display()))?,
        None => Vec::new(),
    };
    seeds.extend(&input.seed);
    Ok((image, seeds))
}

fn status_name(s: SeedStatus) -> &'static str {
    match s {
        SeedStatus::FilledOk => "filled_ok",
        SeedStatus::SeedOnBarrier => "seed_on_barrier",
        SeedStatus::SuspectLeak => "suspect_leak",
    }
}

fn report(result: &WeakLabelResult, out: &mut dyn Write) -> anyhow::Result<()> {
    for o in &result.per_seed {
        writeln!(out, "{},{}\t{}\t{}", o.seed.row, o.seed.col, o.pixels, status_name(o.status))?;
    }
    writeln!(out, "foreground\t{}", result.mask.count_foreground())?;
    Ok(())
}

/// `dir/stem.step.ext` for `--out dir/stem.ext`.
pub(crate) fn step_path(out: &Path, step: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "png".into());
    out.with_file_name(format!("{stem}.{step}.{ext}"))
}

pub(crate) const DEBUG_STEPS: [&str; 4] = ["binary", "skeleton", "closed", "filled"];

pub fn fill(args: &FillArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let (image, seeds) = load_input(&args.input)?;
    let params = FloodFillParams {
        threshold: args.threshold,
        closing_radius: args.closing_radius,
        leak_ratio: args.leak_ratio,
    };
    params.validate().map_err(|e| crate::usage(e.to_string()))?;
    let stages = floodfill_stages(&image, &seeds, &params, None)?;

    if args.debug_steps {
        let rasters: [&BinaryMask; 4] = [&stages.binary, &stages.skeleton, &stages.barrier, &stages.result.mask];
        for (step, mask) in DEBUG_STEPS.iter().zip(rasters) {
            io::save_mask(&step_path(&args.input.out, step), mask)?;
        }
    }
    io::save_mask(&args.input.out, &stages.result.mask)?;
    report(&stages.result, out)
}

pub fn region_grow(args: &RgArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let (image, seeds) = load_input(&args.input)?;
    let params = RegionGrowParams {
        stop_threshold: args.stop_threshold,
    };
    params.validate().map_err(|e| crate::usage(e.to_string()))?;
    let result = region_grow_all(&image, &seeds, &params)?;
    io::save_mask(&args.input.out, &result.mask)?;
    report(&result, out)
}
