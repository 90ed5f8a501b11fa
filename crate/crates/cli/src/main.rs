//! Batch CLI for the recurrence-analysis pipeline.
//!
//! Subcommands: `generate`, `preprocess`, `embed-params`, `rqa`, `sweep`,
//! `rp-export`, `rss`, `batch`. Exit codes: 0 on success, 1 when any
//! processing step or batch entry failed, 2 for invalid invocations.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rqa_cli::config::AnalysisConfig;
use rqa_cli::io::{read_numeric_csv, write_series_csv};
use rqa_cli::pipeline::{
    batch_to_csv, read_manifest, run_batch, ColumnSchema, DEFAULT_SAMPLE_RATE_HZ,
};
use rqa_core::embedding::{
    ami_curve, cao_curves, first_local_minimum, select_min_dimension, utde_embed, EmbeddingParams,
};
use rqa_core::preprocess::{window_slice, SmoothnessLevel, WindowSpec};
use rqa_core::projection::pca_project;
use rqa_core::rqa::{recurrence_matrix, recurrence_matrix_from_rows, rqa_all, sweep, Norm};
use rqa_core::signals::{
    gen_brownian, gen_gaussian_noise, gen_harmonic, gen_logistic_drift, gen_lorenz_x, LorenzParams,
};
use rqa_core::TimeSeries;

#[derive(Parser)]
#[command(
    name = "rqa-cli",
    about = "Phase-space reconstruction, recurrence plots and RQA for scalar time series",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a reference signal as index,value CSV.
    Generate(GenerateArgs),
    /// Window, normalize and optionally smooth one CSV column.
    Preprocess(PreprocessArgs),
    /// Estimate embedding parameters: Cao E1/E2 diagnostics over τ, the AMI
    /// curve, and the (m0, τ0) summary.
    EmbedParams(EmbedParamsArgs),
    /// REC/DET/RATIO/ENT for one or more files at fixed parameters.
    Rqa(RqaArgs),
    /// RQA metrics over a cartesian (m, τ, ε) grid, long-format CSV.
    Sweep(SweepArgs),
    /// Export a recurrence plot as a binary PGM image.
    RpExport(RpExportArgs),
    /// Project the embedding onto its top three principal components.
    Rss(RssArgs),
    /// Run a manifest of recordings and emit one tidy metrics table.
    Batch(BatchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum System {
    Lorenz,
    Noise,
    Harmonic,
    Logistic,
    Brownian,
}

#[derive(Args)]
struct GenerateArgs {
    /// Which reference system to generate.
    #[arg(long, value_enum)]
    system: System,
    /// Number of samples.
    #[arg(long)]
    n: usize,
    /// PRNG seed (noise and brownian only).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Initial state of the logistic map, strictly inside (0, 1).
    #[arg(long, default_value_t = 0.2)]
    x0: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PreprocessArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "value")]
    column: String,
    /// Smoothness level: sg0 (zmuv only), sg1 (zmuv + SG 29), sg2 (zmuv + SG 159).
    #[arg(long)]
    smooth: String,
    /// Window start, in samples (defaults to the whole series).
    #[arg(long)]
    window_offset: Option<usize>,
    /// Window length, in samples (defaults to the whole series).
    #[arg(long)]
    window_length: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EmbedParamsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "value")]
    column: String,
    #[arg(long, default_value_t = 12)]
    m_max: usize,
    #[arg(long, default_value_t = 20)]
    tau_max: usize,
    #[arg(long, default_value_t = 16)]
    bins: usize,
    /// Width of the E1 plateau band around 1.
    #[arg(long, default_value_t = 0.05)]
    plateau: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RqaArgs {
    /// Input file(s); one output row each.
    #[arg(long = "in", required = true)]
    input: Vec<PathBuf>,
    #[arg(long, default_value = "value")]
    column: String,
    #[arg(long, default_value_t = 6)]
    m: usize,
    #[arg(long, default_value_t = 8)]
    tau: usize,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long, default_value = "euclidean")]
    norm: String,
    #[arg(long, default_value_t = 2)]
    dmin: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "value")]
    column: String,
    /// Dimension range start:end (inclusive) or a single value.
    #[arg(long, default_value = "1:10")]
    m: String,
    /// Delay range start:end (inclusive) or a single value.
    #[arg(long, default_value = "1:10")]
    tau: String,
    /// Threshold range start:end[:step], step defaults to 0.1.
    #[arg(long, default_value = "0.2:3.0:0.1")]
    eps: String,
    #[arg(long, default_value = "euclidean")]
    norm: String,
    #[arg(long, default_value_t = 2)]
    dmin: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RpExportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Scalar column to embed with (m, τ).
    #[arg(long, default_value = "value", conflicts_with = "columns")]
    column: String,
    /// Comma-separated columns used directly as state coordinates,
    /// bypassing the delay embedding.
    #[arg(long, conflicts_with_all = ["m", "tau"])]
    columns: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long, default_value = "euclidean")]
    norm: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RssArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "value")]
    column: String,
    #[arg(long, default_value_t = 6)]
    m: usize,
    #[arg(long, default_value_t = 8)]
    tau: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BatchArgs {
    /// Manifest CSV: path,participant,sensor,activity,axis,smoothness,
    /// window_offset,window_length.
    #[arg(long)]
    manifest: PathBuf,
    /// key=value analysis config; defaults to m=6, tau=8, eps=1.0,
    /// norm=euclidean, dmin=2, bins=16, plateau=0.05, mode=fixed.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sample rate of the recordings, Hz.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_RATE_HZ)]
    rate: f64,
    /// Column names of the six channels.
    #[arg(long, default_value = "accel_x")]
    col_accel_x: String,
    #[arg(long, default_value = "accel_y")]
    col_accel_y: String,
    #[arg(long, default_value = "accel_z")]
    col_accel_z: String,
    #[arg(long, default_value = "gyro_x")]
    col_gyro_x: String,
    #[arg(long, default_value = "gyro_y")]
    col_gyro_y: String,
    #[arg(long, default_value = "gyro_z")]
    col_gyro_z: String,
    #[arg(long)]
    out: PathBuf,
}

/// Inclusive integer range `start:end` or single value.
fn parse_usize_range(s: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(vec![one.trim().parse()?]),
        [start, end] => {
            let start: usize = start.trim().parse()?;
            let end: usize = end.trim().parse()?;
            if start > end {
                bail!("range start {start} exceeds end {end}");
            }
            Ok((start..=end).collect())
        }
        _ => bail!("expected value or start:end, got {s:?}"),
    }
}

fn decimal_places(s: &str) -> usize {
    s.trim()
        .split('.')
        .nth(1)
        .map(|frac| frac.len())
        .unwrap_or(0)
}

/// Inclusive decimal range `start:end[:step]` (step defaults to 0.1) or a
/// single value. Steps are taken in exact decimal arithmetic so thresholds
/// like 0.2, 0.3, … come out as clean as the flag text.
fn parse_f64_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(vec![one.trim().parse()?]),
        [start, end] | [start, end, _] => {
            let step = if parts.len() == 3 { parts[2] } else { "0.1" };
            let places = decimal_places(start)
                .max(decimal_places(end))
                .max(decimal_places(step));
            if places > 9 {
                bail!("at most 9 decimal places supported in ranges");
            }
            let scale = 10u64.pow(places as u32) as f64;
            let to_int = |text: &str| -> Result<i64> {
                let v: f64 = text.trim().parse()?;
                Ok((v * scale).round() as i64)
            };
            let (start, end, step) = (to_int(start)?, to_int(end)?, to_int(step)?);
            if step <= 0 {
                bail!("range step must be positive");
            }
            if start > end {
                bail!("range start exceeds end");
            }
            Ok((start..=end)
                .step_by(step as usize)
                .map(|i| i as f64 / scale)
                .collect())
        }
        _ => bail!("expected value or start:end[:step], got {s:?}"),
    }
}

fn parse_norm(s: &str) -> Result<Norm> {
    s.parse().map_err(|e| anyhow::anyhow!("{e}"))
}

fn load_series(path: &std::path::Path, column: &str) -> Result<TimeSeries> {
    read_numeric_csv(path)?.series(column, 1.0)
}

fn run_generate(args: GenerateArgs) -> Result<()> {
    let series = match args.system {
        System::Lorenz => gen_lorenz_x(&LorenzParams::chaotic(), args.n),
        System::Noise => gen_gaussian_noise(args.seed, args.n),
        System::Harmonic => gen_harmonic(args.n),
        System::Logistic => gen_logistic_drift(args.x0, args.n),
        System::Brownian => gen_brownian(args.seed, args.n),
    }?;
    write_series_csv(&args.out, &series)
}

fn run_preprocess(args: PreprocessArgs) -> Result<()> {
    let level: SmoothnessLevel = args.smooth.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    let raw = load_series(&args.input, &args.column)?;
    let windowed = match (args.window_offset, args.window_length) {
        (None, None) => raw,
        (offset, length) => {
            let window = WindowSpec::new(
                length.unwrap_or_else(|| raw.len().saturating_sub(offset.unwrap_or(0))),
                offset.unwrap_or(0),
            )?;
            window_slice(&raw, &window)?
        }
    };
    let prepared = level.apply(&windowed)?;
    write_series_csv(&args.out, &prepared)
}

fn run_embed_params(args: EmbedParamsArgs) -> Result<()> {
    let x = load_series(&args.input, &args.column)?;
    let ami = ami_curve(&x, args.tau_max, args.bins)?;
    let minimum = first_local_minimum(&ami)?;
    let mut out = String::from("record,tau,m,e1,e2,ami_bits\n");
    let mut m0 = None;
    for tau in 1..=args.tau_max {
        let curves = cao_curves(&x, tau, args.m_max)
            .with_context(|| format!("Cao curves at tau = {tau}"))?;
        for (idx, (e1, e2)) in curves.e1().iter().zip(curves.e2()).enumerate() {
            let _ = writeln!(out, "cao,{tau},{},{e1},{e2},", idx + 1);
        }
        if tau == minimum.tau {
            m0 = Some(select_min_dimension(&curves, args.plateau)?);
        }
    }
    for (tau, bits) in ami.values_bits().iter().enumerate() {
        let _ = writeln!(out, "ami,{tau},,,,{bits}");
    }
    let m0 = m0.expect("tau0 lies within 1..=tau_max");
    let _ = writeln!(out, "summary,{},{m0},,,", minimum.tau);
    fs::write(&args.out, out).with_context(|| format!("cannot write {}", args.out.display()))
}

fn run_rqa(args: RqaArgs) -> Result<()> {
    let norm = parse_norm(&args.norm)?;
    let params = EmbeddingParams::new(args.m, args.tau)?;
    let mut out = String::from("file,m,tau,eps,rec,det,ratio,ent\n");
    for path in &args.input {
        let x = load_series(path, &args.column)?;
        let metrics = rqa_all(&x, params, args.eps, norm, args.dmin)
            .with_context(|| format!("processing {}", path.display()))?;
        let ratio = metrics.ratio.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{ratio},{}",
            path.display(),
            args.m,
            args.tau,
            args.eps,
            metrics.rec,
            metrics.det,
            metrics.ent
        );
    }
    fs::write(&args.out, out).with_context(|| format!("cannot write {}", args.out.display()))
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let m_values = parse_usize_range(&args.m).context("--m")?;
    let tau_values = parse_usize_range(&args.tau).context("--tau")?;
    let eps_values = parse_f64_range(&args.eps).context("--eps")?;
    let norm = parse_norm(&args.norm)?;
    let x = load_series(&args.input, &args.column)?;
    let grid = sweep(&x, &m_values, &tau_values, &eps_values, norm, args.dmin)?;
    fs::write(&args.out, grid.to_csv())
        .with_context(|| format!("cannot write {}", args.out.display()))
}

fn run_rp_export(args: RpExportArgs) -> Result<()> {
    let norm = parse_norm(&args.norm)?;
    let matrix = match &args.columns {
        Some(spec) => {
            let table = read_numeric_csv(&args.input)?;
            let names: Vec<&str> = spec.split(',').map(str::trim).collect();
            if names.is_empty() {
                bail!("--columns needs at least one column name");
            }
            let columns: Vec<&[f64]> = names
                .iter()
                .map(|name| table.column(name))
                .collect::<Result<_>>()?;
            let rows = columns[0].len();
            let dim = columns.len();
            let mut flat = Vec::with_capacity(rows * dim);
            for r in 0..rows {
                for column in &columns {
                    flat.push(column[r]);
                }
            }
            recurrence_matrix_from_rows(&flat, dim, args.eps, norm)?
        }
        None => {
            let x = load_series(&args.input, &args.column)?;
            let params = EmbeddingParams::new(args.m.unwrap_or(6), args.tau.unwrap_or(8))?;
            let emb = utde_embed(&x, params)?;
            recurrence_matrix(&emb, args.eps, norm)?
        }
    };
    fs::write(&args.out, matrix.to_pgm_bytes())
        .with_context(|| format!("cannot write {}", args.out.display()))
}

fn run_rss(args: RssArgs) -> Result<()> {
    let x = load_series(&args.input, &args.column)?;
    let emb = utde_embed(&x, EmbeddingParams::new(args.m, args.tau)?)?;
    let trajectory = pca_project(&emb)?;
    let ev = trajectory.explained_variance;
    let mut out = format!("# explained_variance: {},{},{}\n", ev[0], ev[1], ev[2]);
    out.push_str("index,c1,c2,c3\n");
    for (i, p) in trajectory.points.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{},{}", p[0], p[1], p[2]);
    }
    fs::write(&args.out, out).with_context(|| format!("cannot write {}", args.out.display()))
}

fn run_batch_cmd(args: BatchArgs) -> Result<bool> {
    let entries = read_manifest(&args.manifest)?;
    let config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            AnalysisConfig::parse(&text)?
        }
        None => AnalysisConfig::default(),
    };
    let schema = ColumnSchema {
        accel_x: args.col_accel_x,
        accel_y: args.col_accel_y,
        accel_z: args.col_accel_z,
        gyro_x: args.col_gyro_x,
        gyro_y: args.col_gyro_y,
        gyro_z: args.col_gyro_z,
    };
    let outcome = run_batch(&entries, &config, &schema, args.rate);
    fs::write(&args.out, batch_to_csv(&outcome))
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    for row in outcome.rows.iter().filter(|r| r.outcome.is_err()) {
        if let Err(message) = &row.outcome {
            eprintln!("entry {}: {message}", row.entry.path.display());
        }
    }
    Ok(outcome.any_failed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool> = match cli.command {
        Command::Generate(args) => run_generate(args).map(|()| false),
        Command::Preprocess(args) => run_preprocess(args).map(|()| false),
        Command::EmbedParams(args) => run_embed_params(args).map(|()| false),
        Command::Rqa(args) => run_rqa(args).map(|()| false),
        Command::Sweep(args) => run_sweep(args).map(|()| false),
        Command::RpExport(args) => run_rp_export(args).map(|()| false),
        Command::Rss(args) => run_rss(args).map(|()| false),
        Command::Batch(args) => run_batch_cmd(args),
    };
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
