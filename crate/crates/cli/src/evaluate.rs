use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use seedmask::io::{self, ImageFormat};
use seedmask::metrics::{auroc_from_rates, evaluate_set, grade, AgreementScale, BELOW_SCALE};
use seedmask::raster::BinaryMask;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Predicted mask, or a directory of masks
    #[arg(long, value_name = "PATH", required_unless_present = "from_rates", requires = "truth")]
    pub pred: Option<PathBuf>,
    /// Reference mask, or a directory matched to --pred by file stem
    #[arg(long, value_name = "PATH", requires = "pred")]
    pub truth: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// AUROC and grade from a false negative rate and false positive rate; repeatable
    #[arg(long, value_name = "FNR,FPR", value_parser = parse_rates, conflicts_with_all = ["pred", "truth"])]
    pub from_rates: Vec<(f64, f64)>,
}

fn parse_rates(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `fnr,fpr`, got `{s}`"))?;
    let parse = |v: &str| -> Result<f64, String> {
        let x: f64 = v.trim().parse().map_err(|_| format!("`{}` is not a number", v.trim()))?;
        if (0.0..=1.0).contains(&x) {
            Ok(x)
        } else {
            Err(format!("rate {x} is outside [0, 1]"))
        }
    };
    Ok((parse(a)?, parse(b)?))
}

pub fn run(args: &EvaluateArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    if !args.from_rates.is_empty() {
        return from_rates(&args.from_rates, out);
    }
    let (pred, truth) = match (&args.pred, &args.truth) {
        (Some(p), Some(t)) => (p, t),
        _ => return Err(crate::usage("--pred and --truth are both required")),
    };
    let (names, pairs) = load_pairs(pred, truth)?;
    let report = evaluate_set(&pairs)?;
    let text = match args.format {
        ReportFormat::Json => report.to_json(&names)?,
        ReportFormat::Csv => report.to_csv(&names)?,
    };
    match &args.out {
        Some(path) => io::write_atomic(path, text.as_bytes())?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// AUROC printed with seven decimals, which is exact for rates given to
/// six.
fn from_rates(rates: &[(f64, f64)], out: &mut dyn Write) -> anyhow::Result<()> {
    writeln!(out, "fnr\tfpr\tauroc\tgrade")?;
    for &(fnr, fpr) in rates {
        let auroc = auroc_from_rates(fnr, fpr);
        let label = match grade(auroc, AgreementScale::TraditionalAuroc) {
            Ok(label) => label,
            Err(_) => BELOW_SCALE,
        };
        writeln!(out, "{fnr}\t{fpr}\t{auroc:.7}\t{label}")?;
    }
    Ok(())
}

fn mask_files(dir: &Path) -> anyhow::Result<BTreeMap<String, PathBuf>> {
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if !path.is_file() || ImageFormat::from_path(&path).is_none() {
            continue;
        }
        let stem = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        if let Some(previous) = files.insert(stem.clone(), path.clone()) {
            bail!("{} and {} share the name `{stem}`", previous.display(), path.display());
        }
    }
    Ok(files)
}

type Pairs = (Vec<String>, Vec<(BinaryMask, BinaryMask)>);

fn load_pairs(pred: &Path, truth: &Path) -> anyhow::Result<Pairs> {
    if pred.is_dir() != truth.is_dir() {
        return Err(crate::usage("--pred and --truth must both be files or both be directories"));
    }
    if !pred.is_dir() {
        let name = pred.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        return Ok((vec![name], vec![(io::load_mask(pred)?, io::load_mask(truth)?)]));
    }
    let preds = mask_files(pred)?;
    let truths = mask_files(truth)?;
    let missing: Vec<&str> = preds.keys().filter(|k| !truths.contains_key(*k)).map(String::as_str).collect();
    if !missing.is_empty() {
        bail!("no reference mask in {} for: {}", truth.display(), missing.join(", "));
    }
    if preds.is_empty() {
        bail!("no PNG or PGM masks in {}", pred.display());
    }
    let mut names = Vec::with_capacity(preds.len());
    let mut pairs = Vec::with_capacity(preds.len());
    for (name, path) in &preds {
        pairs.push((io::load_mask(path)?, io::load_mask(&truths[name])?));
        names.push(name.clone());
    }
    Ok((names, pairs))
}
