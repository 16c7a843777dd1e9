use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use seedmask::augment::{augment_pair, Orientation, Transform, Translation};
use seedmask::io::{self, ImageFormat};
use seedmask::raster::{BinaryMask, GrayImage};

#[derive(Debug, Args)]
pub struct AugmentArgs {
    /// Directory of source images
    #[arg(long, value_name = "DIR")]
    pub images: PathBuf,
    /// Directory of label masks, matched to images by file stem
    #[arg(long, value_name = "DIR")]
    pub labels: PathBuf,
    /// Output directory; receives images/ and labels/
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// All eight rotations and mirrors (square images only)
    #[arg(long)]
    pub orbit: bool,
    /// Shift by rows,cols; repeatable
    #[arg(long, value_name = "DR,DC", allow_hyphen_values = true, value_parser = parse_shift)]
    pub translate: Vec<(i64, i64)>,
    /// Number of distinct random shifts per image
    #[arg(long, default_value_t = 0)]
    pub random_shifts: usize,
    /// Largest random shift along either axis
    #[arg(long, default_value_t = 0)]
    pub max_shift: u32,
    /// Seed for the random shifts
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Intensity for image pixels vacated by a shift; labels always get background
    #[arg(long, default_value_t = 0)]
    pub fill: u8,
}

fn parse_shift(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `dr,dc`, got `{s}`"))?;
    let p = |v: &str| v.trim().parse::<i64>().map_err(|_| format!("`{}` is not an integer", v.trim()));
    Ok((p(a)?, p(b)?))
}

struct Source {
    name: String,
    image_ext: &'static str,
    label_ext: &'static str,
    image: GrayImage,
    label: BinaryMask,
}

fn files_by_stem(dir: &Path) -> anyhow::Result<Vec<(String, PathBuf)>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && ImageFormat::from_path(&path).is_some() {
            files.push((path.file_stem().unwrap_or_default().to_string_lossy().into_owned(), path));
        }
    }
    files.sort();
    Ok(files)
}

fn load_sources(images: &Path, labels: &Path) -> anyhow::Result<Vec<Source>> {
    let labels = files_by_stem(labels)?;
    let mut sources = Vec::new();
    for (name, image_path) in files_by_stem(images)? {
        let Some((_, label_path)) = labels.iter().find(|(n, _)| *n == name) else {
            bail!("no label for image `{name}`");
        };
        let ext = |p: &Path| ImageFormat::from_path(p).expect("filtered by format").extension();
        sources.push(Source {
            image_ext: ext(&image_path),
            label_ext: ext(label_path),
            image: io::load_gray(&image_path)?,
            label: io::load_mask(label_path)?,
            name,
        });
    }
    if sources.is_empty() {
        bail!("no PNG or PGM images in {}", images.display());
    }
    Ok(sources)
}

/// `count` distinct non-zero shifts with components in `-max..=max`.
fn random_shifts(rng: &mut ChaCha8Rng, count: usize, max: u32) -> Vec<(i64, i64)> {
    let max = max as i64;
    let mut seen = BTreeSet::new();
    let mut shifts = Vec::with_capacity(count);
    while shifts.len() < count {
        let s = (rng.random_range(-max..=max), rng.random_range(-max..=max));
        if s != (0, 0) && seen.insert(s) {
            shifts.push(s);
        }
    }
    shifts
}

pub fn run(args: &AugmentArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    if !args.orbit && args.translate.is_empty() && args.random_shifts == 0 {
        return Err(crate::usage("nothing to do: pass --orbit, --translate or --random-shifts"));
    }
    let side = 2 * args.max_shift as usize + 1;
    if args.random_shifts > side * side - 1 {
        return Err(crate::usage(format!(
            "--random-shifts {} exceeds the {} distinct shifts allowed by --max-shift {}",
            args.random_shifts,
            side * side - 1,
            args.max_shift
        )));
    }

    let sources = load_sources(&args.images, &args.labels)?;
    for s in &sources {
        if !s.image.same_shape(&s.label) {
            bail!(
                "`{}`: image is {}x{} but label is {}x{}",
                s.name,
                s.image.width(),
                s.image.height(),
                s.label.width(),
                s.label.height()
            );
        }
        if args.orbit && s.image.width() != s.image.height() {
            bail!("`{}` is {}x{}; --orbit needs square images", s.name, s.image.width(), s.image.height());
        }
    }

    // drawn in name order before any parallel work, so output is fixed by --rng-seed
    let mut rng = ChaCha8Rng::seed_from_u64(args.rng_seed);
    let plans: Vec<Vec<Transform>> = sources
        .iter()
        .map(|_| {
            let mut plan = Vec::new();
            if args.orbit {
                plan.extend(Orientation::ALL.iter().map(|&o| Transform::Orient(o)));
            }
            let shifts = args
                .translate
                .iter()
                .copied()
                .chain(random_shifts(&mut rng, args.random_shifts, args.max_shift));
            plan.extend(shifts.map(|(dr, dc)| Transform::Shift(Translation::new(dr, dc).with_fill(args.fill))));
            plan
        })
        .collect();

    let image_dir = args.out.join("images");
    let label_dir = args.out.join("labels");
    for dir in [&image_dir, &label_dir] {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let written: Vec<usize> = sources
        .par_iter()
        .zip(&plans)
        .map(|(s, plan)| -> anyhow::Result<usize> {
            let outputs = augment_pair(&s.image, &s.label, plan)?;
            for (t, (img, label)) in plan.iter().zip(&outputs) {
                let stem = format!("{}{}", s.name, t.suffix());
                io::save_gray(&image_dir.join(format!("{stem}.{}", s.image_ext)), img)?;
                io::save_mask(&label_dir.join(format!("{stem}.{}", s.label_ext)), label)?;
            }
            Ok(outputs.len())
        })
        .collect::<anyhow::Result<_>>()?;
    writeln!(out, "{} pairs -> {} pairs", sources.len(), written.iter().sum::<usize>())?;
    Ok(())
}
