//! The `seedmask` command.
//!
//! [`run`] parses arguments, dispatches to a subcommand and maps the
//! outcome to an exit status: 0 on success, 1 when a command fails on its
//! inputs, 2 on a usage error.

mod augment;
mod evaluate;
mod label;

use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use seedmask::metrics::AgreementScale;
use seedmask::raster::{SeedPoint, ThresholdMethod};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Bad flag combinations found after parsing; reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub(crate) fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Parser)]
#[command(name = "seedmask", version, about = "Weak segmentation labels from click-points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Flood-fill pipeline: threshold, thin, close, fill from each seed
    Fill(FillArgs),
    /// Seeded region growing
    Rg(RgArgs),
    /// Orientations and translations of image/label pairs
    Augment(augment::AugmentArgs),
    /// Score predicted masks against reference masks
    Evaluate(evaluate::EvaluateArgs),
    /// Qualitative label for an AUROC or kappa value
    Grade(GradeArgs),
    /// Run the annotation HTTP service
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SeedInput {
    /// Grayscale input image (PGM or PNG)
    #[arg(long, value_name = "FILE")]
    pub image: PathBuf,
    /// Click-point file, one `row,col` per line
    #[arg(long, value_name = "FILE")]
    pub seeds: Option<PathBuf>,
    /// Extra click-point, repeatable
    #[arg(long = "seed", value_name = "ROW,COL", value_parser = parse_seed)]
    pub seed: Vec<SeedPoint>,
    /// Output mask; format from the extension (.pgm or .png)
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FillArgs {
    #[command(flatten)]
    pub input: SeedInput,
    /// Binarization threshold: 0-255, or `auto` for an automatic choice
    #[arg(long, default_value = "128", value_parser = parse_threshold)]
    pub threshold: ThresholdMethod,
    /// Radius of the disk used to close the thinned membranes
    #[arg(long, default_value_t = 1)]
    pub closing_radius: u32,
    /// Flag a seed whose fill exceeds this fraction of the image
    #[arg(long, default_value_t = seedmask::weaklabel::DEFAULT_LEAK_RATIO)]
    pub leak_ratio: f64,
    /// Also write the binary, skeleton, closed and filled rasters next to --out
    #[arg(long)]
    pub debug_steps: bool,
}

#[derive(Debug, Args)]
pub struct RgArgs {
    #[command(flatten)]
    pub input: SeedInput,
    /// Stop once the closest neighbour differs from the region mean by more than this
    #[arg(long, default_value_t = 10.0)]
    pub stop_threshold: f64,
}

#[derive(Debug, Args)]
pub struct GradeArgs {
    /// Score to grade
    #[arg(long, allow_negative_numbers = true)]
    pub value: f64,
    /// auroc, landis-koch or fleiss; all three when omitted
    #[arg(long, value_parser = parse_scale)]
    pub scale: Option<AgreementScale>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Directory holding one sub-directory per project
    #[arg(long, env = "SEEDMASK_PROJECT_DIR", value_name = "DIR")]
    pub project_dir: PathBuf,
    /// Address to listen on
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    /// Per-seed pixel cap for previews; 0 disables the cap
    #[arg(long, default_value_t = 4_000_000)]
    pub pixel_budget: usize,
}

fn parse_seed(s: &str) -> Result<SeedPoint, String> {
    match seedmask::io::parse_seeds(s) {
        Ok(v) if v.len() == 1 => Ok(v[0]),
        Ok(_) => Err(format!("expected `row,col`, got `{s}`")),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_threshold(s: &str) -> Result<ThresholdMethod, String> {
    s.parse().map_err(|e: seedmask::Error| e.to_string())
}

fn parse_scale(s: &str) -> Result<AgreementScale, String> {
    s.parse().map_err(|e: seedmask::Error| e.to_string())
}

/// Runs with the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> anyhow::Result<()> {
    match command {
        Command::Fill(args) => label::fill(&args, out),
        Command::Rg(args) => label::region_grow(&args, out),
        Command::Augment(args) => augment::run(&args, out),
        Command::Evaluate(args) => evaluate::run(&args, out),
        Command::Grade(args) => grade(&args, out),
        Command::Serve(args) => serve(&args, out),
    }
}

fn grade(args: &GradeArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let scales = match args.scale {
        Some(s) => vec![s],
        None => AgreementScale::ALL.to_vec(),
    };
    let labels = scales
        .iter()
        .map(|&scale| match seedmask::metrics::grade(args.value, scale) {
            Ok(label) => Ok((scale, label)),
            Err(seedmask::Error::BelowScale { .. }) => Ok((scale, seedmask::metrics::BELOW_SCALE)),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>, _>>()?;
    for (scale, label) in labels {
        writeln!(out, "{}\t{label}", scale_id(scale))?;
    }
    Ok(())
}

pub(crate) fn scale_id(scale: AgreementScale) -> &'static str {
    match scale {
        AgreementScale::TraditionalAuroc => "auroc",
        AgreementScale::LandisKoch => "landis-koch",
        AgreementScale::Fleiss => "fleiss",
    }
}

fn serve(args: &ServeArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let config = seedmask_service::ServiceConfig {
        projects_dir: args.project_dir.clone(),
        pixel_budget: (args.pixel_budget > 0).then_some(args.pixel_budget),
    };
    writeln!(out, "serving {} on http://{}", args.project_dir.display(), args.addr)?;
    out.flush()?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(seedmask_service::serve(args.addr, config))?;
    Ok(())
}
