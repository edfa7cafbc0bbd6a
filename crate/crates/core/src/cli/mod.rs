//! Command-line front end: `generate`, `analyze`, `verify-bounds`, `reproduce-table1`.
//!
//! Exit codes: 0 success, 1 configuration error, 2 verification failure,
//! 3 I/O or malformed input.

pub mod config;
pub mod files;
pub mod table1;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::analysis::{
    self, histogram,
    report::{write_grid_csv, write_histogram_csv, MomentDocument},
};
use crate::grng::ModelConfig;

use config::{load_sidecar, sidecar_path, FamilyArg, Format, GenerateOptions, ModelArg, RunConfig, Sidecar, SEED_OVERRIDE_ENV};
use files::{write_atomic, write_json};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed input: {0}")]
    Input(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Io { .. } | CliError::Input(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pngauss", version, about = "Gaussian samples from summed pseudonoise sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write Gaussian samples and a JSON sidecar describing how they were made.
    Generate(GenerateArgs),
    /// Moments, histogram and triple-moment grid of a sample file.
    Analyze(AnalyzeArgs),
    /// Check the moment and correlation bounds on small sequences.
    VerifyBounds(VerifyArgs),
    /// Moments of the four reference configurations next to published values.
    ReproduceTable1(Table1Args),
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Characteristic polynomial, e.g. "x^89 + x^38 + 1" or hex.
    #[arg(long)]
    pub poly: Option<String>,
    /// Second Gold register; derived from --poly and --r when the degree allows.
    #[arg(long)]
    pub poly2: Option<String>,
    /// Initial state of the first register (hex, e_1 in bit 0). Default 0x1.
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub seed2: Option<String>,
    /// Gold decimation exponent.
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Block length of the binary model.
    #[arg(long = "M")]
    pub block_len: Option<usize>,
    /// Slide blocks by one symbol instead of M.
    #[arg(long)]
    pub overlapping: bool,
    /// Bits per uniform in the Tausworthe model.
    #[arg(long = "B")]
    pub bit_depth: Option<u32>,
    /// Uniforms per Tausworthe sample.
    #[arg(long)]
    pub terms: Option<usize>,
    /// Number of samples.
    #[arg(long = "T")]
    pub count: Option<usize>,
    /// Bits discarded before sampling (default: 2^23 for degree > 32, else 0).
    #[arg(long)]
    pub warmup: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Sample file; the sidecar is written to <out>.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Sample file (.csv, .bin or .json).
    pub input: PathBuf,
    #[arg(long)]
    pub moments: bool,
    #[arg(long)]
    pub histogram: bool,
    #[arg(long)]
    pub triple_grid: bool,
    #[arg(long, default_value_t = analysis::histogram::DEFAULT_BINS)]
    pub bins: usize,
    #[arg(long, default_value_t = analysis::histogram::DEFAULT_RANGE.0, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, default_value_t = analysis::histogram::DEFAULT_RANGE.1, allow_negative_numbers = true)]
    pub hi: f64,
    /// Grid extent in each delay.
    #[arg(long, default_value_t = 100)]
    pub window: usize,
    /// Terms per moment and grid cell (default: every sample for moments, as many as fit for the grid).
    #[arg(long = "T")]
    pub count: Option<usize>,
    /// Input format when the extension is not telling.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output directory (default: next to the input).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Metadata for inputs without a sidecar.
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    #[arg(long = "M")]
    pub block_len: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub theorem: verify::Which,
    /// Use this theta instead of measured or assumed values.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Gold base polynomial for exact correlation checks.
    #[arg(long, default_value = verify::DEFAULT_EXACT_POLY)]
    pub poly: String,
    /// Gold base polynomial for product moment checks.
    #[arg(long, default_value = verify::DEFAULT_PRODUCT_POLY)]
    pub poly2: String,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long = "M", default_value_t = 16)]
    pub block_len: usize,
    /// Order of the full-peak probe.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value = "bounds.json")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long = "M", default_value_t = crate::grng::DEFAULT_BLOCK_LEN)]
    pub block_len: usize,
    #[arg(long = "B", default_value_t = crate::grng::DEFAULT_BIT_DEPTH)]
    pub bit_depth: u32,
    #[arg(long, default_value_t = crate::grng::DEFAULT_TERMS)]
    pub terms: usize,
    #[arg(long = "T", default_value_t = 100_000)]
    pub count: usize,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub seed2: Option<String>,
    #[arg(long)]
    pub warmup: Option<u64>,
    #[arg(long, default_value = "table1.json")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

fn seed_override() -> Option<String> {
    std::env::var(SEED_OVERRIDE_ENV).ok().filter(|s| !s.trim().is_empty())
}

pub fn generate_options(a: &GenerateArgs) -> GenerateOptions {
    let s = &a.source;
    GenerateOptions {
        family: s.family,
        poly: s.poly.clone(),
        poly2: s.poly2.clone(),
        seed: s.seed.clone(),
        seed2: s.seed2.clone(),
        r: s.r,
        model: s.model,
        block_len: s.block_len,
        overlapping: s.overlapping,
        bit_depth: s.bit_depth,
        terms: s.terms,
        count: s.count,
        warmup: s.warmup,
        output: a.out.clone(),
        format: a.format,
        seed_override: seed_override(),
    }
}

fn cmd_generate(a: &GenerateArgs, log: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&generate_options(a))?;
    if let Some(w) = cfg.period_warning()? {
        let _ = writeln!(log, "warning: {w}");
    }
    let block = cfg.generate()?;
    match cfg.format {
        Format::Csv => write_atomic(&cfg.output, |w| files::write_samples_csv(w, &block.samples))?,
        Format::Bin => write_atomic(&cfg.output, |w| files::write_samples_bin(w, &block.samples))?,
        Format::Json => write_json(&cfg.output, &serde_json::json!({ "samples": block.samples }))?,
    }
    write_json(&sidecar_path(&cfg.output), &Sidecar::new(cfg.clone()))?;
    let _ = writeln!(log, "wrote {} samples to {}", block.len(), cfg.output.display());
    Ok(())
}

/// Reads a sample file in the given or inferred format.
pub fn read_samples(path: &Path, format: Option<Format>) -> Result<Vec<f64>, CliError> {
    let format = format.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("bin") => Format::Bin,
        Some("json") => Format::Json,
        _ => Format::Csv,
    });
    let name = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    match format {
        Format::Bin => files::read_samples_bin(&bytes, &name),
        Format::Csv => files::read_samples_csv(bytes.as_slice(), &name),
        Format::Json => {
            let text = String::from_utf8(bytes).map_err(|e| CliError::Input(format!("{name}: byte {}: invalid UTF-8", e.utf8_error().valid_up_to())))?;
            files::read_samples_json(&text, &name)
        }
    }
}

/// Paths of the artifacts `analyze` writes for `input` into `dir`.
pub fn analysis_paths(input: &Path, dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "samples".into());
    (
        dir.join(format!("{stem}.moments.json")),
        dir.join(format!("{stem}.histogram.csv")),
        dir.join(format!("{stem}.grid.csv")),
    )
}

fn analysis_err(e: analysis::AnalysisError) -> CliError {
    match e {
        analysis::AnalysisError::NonFinite(_) => CliError::Input(e.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

fn cmd_analyze(a: &AnalyzeArgs, log: &mut dyn Write) -> Result<(), CliError> {
    let sidecar = load_sidecar(&a.input)?;
    let (model, family, block_len, seeds) = match &sidecar {
        Some(s) => {
            let c = &s.config;
            let m = match c.model {
                ModelConfig::BinaryBlockSum(b) => Some(b.block_len),
                ModelConfig::TauswortheClt(_) => None,
            };
            (c.model.model().to_string(), c.family.to_string(), m, c.seeds.clone())
        }
        None => {
            let (Some(family), Some(model)) = (a.family, a.model) else {
                return Err(CliError::Config(format!(
                    "no sidecar at {}; pass --family and --model",
                    sidecar_path(&a.input).display()
                )));
            };
            let model = match model {
                ModelArg::Binary => crate::grng::Model::BinaryBlockSum,
                ModelArg::Tausworthe => crate::grng::Model::TauswortheClt,
            };
            (model.to_string(), family.to_string(), a.block_len, Vec::new())
        }
    };
    let samples = read_samples(&a.input, a.format)?;
    if samples.is_empty() {
        return Err(CliError::Input(format!("{}: no samples", a.input.display())));
    }
    let all = !(a.moments || a.histogram || a.triple_grid);
    let dir = match &a.out {
        Some(d) => d.clone(),
        None => a.input.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    if !dir.as_os_str().is_empty() {
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    }
    let (moments_path, hist_path, grid_path) = analysis_paths(&a.input, &dir);
    if a.moments || all {
        let t = a.count.unwrap_or(samples.len()).min(samples.len());
        let report = analysis::raw_moments(&samples[..t], 4).map_err(analysis_err)?;
        let doc = MomentDocument {
            model: model.clone(),
            family: family.clone(),
            block_len,
            count: t,
            moments: report.moments,
            seeds: seeds.clone(),
        };
        write_json(&moments_path, &doc)?;
        let _ = writeln!(log, "moments {:?} -> {}", doc.moments, moments_path.display());
    }
    if a.histogram || all {
        let h = histogram(&samples, a.bins, a.lo, a.hi).map_err(analysis_err)?;
        write_atomic(&hist_path, |w| write_histogram_csv(&h, w))?;
        let _ = writeln!(log, "histogram -> {}", hist_path.display());
    }
    if a.triple_grid || all {
        let fit = samples.len().saturating_sub(a.window.saturating_sub(1));
        let t = a.count.unwrap_or(fit);
        let grid = analysis::triple_moment_grid(&samples, a.window, t).map_err(analysis_err)?;
        write_atomic(&grid_path, |w| write_grid_csv(&grid, w))?;
        let floor = analysis::noise_floor(t);
        let _ = writeln!(
            log,
            "grid max |c| = {:.5}, {} cells above 5/sqrt(T) = {:.5} -> {}",
            grid.max_abs(),
            grid.cells_above(floor).len(),
            floor,
            grid_path.display()
        );
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, log: &mut dyn Write) -> Result<(), CliError> {
    let o = verify::VerifyOptions {
        which: a.theorem,
        theta: a.theta,
        exact_poly: a.poly.clone(),
        product_poly: a.poly2.clone(),
        r: a.r,
        block_len: a.block_len,
        peak_order: a.k,
    };
    let report = verify::verify_bounds(&o)?;
    match a.format {
        Format::Csv => write_atomic(&a.out, |w| verify::write_verify_csv(&report, w))?,
        _ => write_json(&a.out, &report)?,
    }
    let checked = report.reports.iter().filter(|r| r.satisfied.is_some()).count();
    let violated: Vec<_> = report.reports.iter().filter(|r| !r.holds()).collect();
    let _ = writeln!(log, "{checked} bound checks, {} violated -> {}", violated.len(), a.out.display());
    for r in &violated {
        let _ = writeln!(log, "violated: {:?} lhs = {:?} rhs = {}", r.theorem, r.lhs_value, r.rhs_value);
    }
    if let Some(p) = &report.full_peak {
        let w = &p.witness;
        let _ = writeln!(
            log,
            "full peak at k = {}: {} (L = {}, D = {:?}, T = {}, value {})",
            p.k,
            if p.found { "found" } else { "not found" },
            w.step,
            w.delays,
            w.count,
            p.value
        );
    }
    if report.all_hold {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{} bound(s) violated or probe failed", violated.len().max(1))))
    }
}

fn cmd_table1(a: &Table1Args, log: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = table1::Table1Config {
        block_len: a.block_len,
        bit_depth: a.bit_depth,
        terms: a.terms,
        count: a.count,
        warmup_bits: a.warmup,
        ..table1::Table1Config::default()
    };
    if let Some(s) = &a.seed {
        cfg.seeds[0] = s.clone();
    }
    if let Some(s) = &a.seed2 {
        cfg.seeds[1] = s.clone();
    }
    let report = table1::reproduce_table1(&cfg, seed_override())?;
    match a.format {
        Format::Csv => write_atomic(&a.out, |w| table1::write_table1_csv(&report, w))?,
        _ => write_json(&a.out, &report)?,
    }
    let _ = write!(log, "{}", table1::render_table1(&report));
    if report.all_pass {
        Ok(())
    } else {
        Err(CliError::Verification("moments outside tolerance".into()))
    }
}

/// Runs one command, writing progress to `log`.
pub fn run(cli: &Cli, log: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a, log),
        Command::Analyze(a) => cmd_analyze(a, log),
        Command::VerifyBounds(a) => cmd_verify(a, log),
        Command::ReproduceTable1(a) => cmd_table1(a, log),
    }
}

/// Parses arguments, runs, reports errors on stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let mut stdout = std::io::stdout();
    match run(&cli, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("pngauss: {e}");
            e.exit_code()
        }
    }
}
