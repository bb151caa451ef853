//! The `lsbm` command-line front end.
//!
//! Every command writes machine-readable `key=value` lines to stdout. Exit
//! codes: 0 on success, 1 on usage errors, 2 when input files are unreadable
//! or malformed.

use std::ffi::OsString;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::embedder::{embed_lsb_matching, EmbedConfig};
use crate::error::{Error, Result};
use crate::glrt::{calibrate_threshold, detect, glrt_statistic, GlrtConfig};
use crate::harness::{
    export_csv, load_pgm, mc_verify, power_curve, read_scores, roc_from_scores, save_pgm, write_csv,
    ExperimentConfig, ScoreRow,
};
use crate::lrt::Hypothesis;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "lsbm", version, about = "Detect LSB matching steganography in grayscale images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Embed a random payload by LSB matching.
    Embed(EmbedArgs),
    /// Score one image with the practical detector.
    Detect(DetectArgs),
    /// Score every PGM file in a directory.
    Scan(ScanArgs),
    /// Build an ROC curve from cover and stego score files.
    Roc(RocArgs),
    /// Asymptotic power of the known-parameter test.
    PowerCurve(PowerCurveArgs),
    /// Monte-Carlo verification driven by an experiment config file.
    McVerify(McVerifyArgs),
}

#[derive(Args, Debug)]
struct EmbedArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Fraction of pixels that carry a message bit, in [0, 1].
    #[arg(long)]
    rate: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = GlrtConfig::DEFAULT_STABILIZER)]
    alpha_stab: f64,
    /// Decision threshold on the statistic.
    #[arg(long, conflicts_with = "calibrate_dir")]
    threshold: Option<f64>,
    /// Directory of cover images used to set the threshold.
    #[arg(long, requires = "alpha")]
    calibrate_dir: Option<PathBuf>,
    /// Target false-alarm rate for calibration.
    #[arg(long, requires = "calibrate_dir")]
    alpha: Option<f64>,
    #[arg(long)]
    verbose: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    dir: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = GlrtConfig::DEFAULT_STABILIZER)]
    alpha_stab: f64,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<NonZeroUsize>,
}

#[derive(Args, Debug)]
struct RocArgs {
    #[arg(long)]
    cover: PathBuf,
    #[arg(long)]
    stego: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PowerCurveArgs {
    #[arg(long)]
    theta: f64,
    #[arg(long)]
    sigma: f64,
    /// Pixel counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// False-alarm probabilities, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    /// Embedding rates in [0, 1], comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    rates: Vec<f64>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct McVerifyArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    threads: Option<NonZeroUsize>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    match dispatch(cli.command, &mut stdout.lock()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Pgm { .. } | Error::Csv(_) | Error::Config(_) => EXIT_DATA,
        Error::ImageTooSmall { .. } | Error::EmptyInput(_) | Error::PixelOutOfRange { .. } => EXIT_DATA,
        _ => EXIT_USAGE,
    }
}

fn dispatch(command: Command, out: &mut impl Write) -> Result<()> {
    match command {
        Command::Embed(a) => embed_cmd(a, out),
        Command::Detect(a) => detect_cmd(a, out),
        Command::Scan(a) => with_threads(a.threads, || scan_cmd(&a)),
        Command::Roc(a) => roc_cmd(a, out),
        Command::PowerCurve(a) => power_curve_cmd(a, out),
        Command::McVerify(a) => with_threads(a.threads, || {
            let config = ExperimentConfig::from_file(&a.config)?;
            export_csv(&mc_verify(&config)?, &a.out)
        }),
    }
}

fn with_threads<T: Send>(threads: Option<NonZeroUsize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.get())
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(f),
    }
}

fn embed_cmd(a: EmbedArgs, out: &mut impl Write) -> Result<()> {
    let config = EmbedConfig::new(a.rate, a.seed)?;
    let cover = load_pgm(&a.input)?;
    let (stego, report) = embed_lsb_matching(&cover, &config);
    save_pgm(&stego, &a.out)?;
    writeln!(
        out,
        "pixels_carrying={} pixels_changed={}",
        report.pixels_carrying, report.pixels_changed
    )?;
    Ok(())
}

fn pgm_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn score_files(files: &[PathBuf], config: &GlrtConfig) -> Result<Vec<f64>> {
    files
        .par_iter()
        .map(|p| glrt_statistic(&load_pgm(p)?, config))
        .collect()
}

fn detect_cmd(a: DetectArgs, out: &mut impl Write) -> Result<()> {
    let mut config = GlrtConfig::new(a.alpha_stab, a.threshold.unwrap_or(0.0))?;
    let mut fingerprint = None;
    if let (Some(dir), Some(alpha)) = (&a.calibrate_dir, a.alpha) {
        let files = pgm_files(dir)?;
        let scores = score_files(&files, &config)?;
        config = GlrtConfig::new(a.alpha_stab, calibrate_threshold(&scores, alpha)?)?;
        fingerprint = Some(corpus_fingerprint(&files)?);
        if a.verbose {
            writeln!(out, "# threshold calibrated on {} cover images at alpha={alpha}", files.len())?;
        }
    }
    let image = load_pgm(&a.input)?;
    let outcome = detect(&image, &config)?;
    let decision = match outcome.decision {
        Hypothesis::H0 => "H0",
        Hypothesis::H1 => "H1",
    };
    if a.verbose {
        let verdict = match outcome.decision {
            Hypothesis::H0 => "no evidence of embedding",
            Hypothesis::H1 => "image appears to carry an LSB-matching payload",
        };
        writeln!(out, "# {}: {verdict}", a.input.display())?;
    }
    write!(
        out,
        "statistic={:?} decision={decision} threshold={:?}",
        outcome.statistic, outcome.threshold
    )?;
    if let Some(f) = fingerprint {
        write!(out, " calibration_sha256={f}")?;
    }
    writeln!(out)?;
    Ok(())
}

/// SHA-256 over the names, lengths and contents of `files`, in order.
fn corpus_fingerprint(files: &[PathBuf]) -> Result<String> {
    let mut hasher = Sha256::new();
    for path in files {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let bytes = std::fs::read(path)?;
        hasher.update(name.as_bytes());
        hasher.update([0]);
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(&bytes);
    }
    Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

fn scan_cmd(a: &ScanArgs) -> Result<()> {
    let config = GlrtConfig::new(a.alpha_stab, 0.0)?;
    let files = pgm_files(&a.dir)?;
    let scores = score_files(&files, &config)?;
    let rows: Vec<ScoreRow> = files
        .iter()
        .zip(scores)
        .map(|(p, statistic)| ScoreRow {
            file: p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
            statistic,
        })
        .collect();
    export_csv(&rows, &a.out)
}

fn roc_cmd(a: RocArgs, out: &mut impl Write) -> Result<()> {
    let cover = read_scores(&a.cover)?;
    let stego = read_scores(&a.stego)?;
    let roc = roc_from_scores(&cover, &stego)?;
    export_csv(&roc.points, &a.out)?;
    writeln!(out, "auc={:?}", roc.auc)?;
    Ok(())
}

fn power_curve_cmd(a: PowerCurveArgs, out: &mut impl Write) -> Result<()> {
    let rows = power_curve(a.theta, a.sigma, &a.n, &a.alpha, &a.rates)?;
    match &a.out {
        Some(path) => export_csv(&rows, path),
        None => write_csv(&rows, out),
    }
}
