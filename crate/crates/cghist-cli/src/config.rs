//! Command-line surface and run-configuration resolution. Values come from
//! an optional TOML file plus flags; flags win.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "cghist",
    version,
    about = "Decoherence of extended-in-time position alternatives for a 1D particle"
)]
pub struct Cli {
    /// Run configuration file (TOML); explicit flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decoherence matrix of one state over one interval.
    Matrix(CommonArgs),
    /// Decoherence matrices over a log-spaced range of intervals.
    Sweep(CommonArgs),
    /// Exact vs asymptotic Gaussian interference amplitudes.
    Gaussian(CommonArgs),
    /// SI decoherence-time estimate for a mass and localization width.
    Estimate(CommonArgs),
    /// Cross-checks between independent numerical routes.
    Verify(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Matrix(_) => "matrix",
            Command::Sweep(_) => "sweep",
            Command::Gaussian(_) => "gaussian",
            Command::Estimate(_) => "estimate",
            Command::Verify(_) => "verify",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Matrix(a)
            | Command::Sweep(a)
            | Command::Gaussian(a)
            | Command::Estimate(a)
            | Command::Verify(a) => a,
        }
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// Particle mass (hbar = 1 units; kilograms for `estimate`).
    #[arg(long)]
    pub mass: Option<f64>,

    /// Evolution interval T.
    #[arg(long = "T")]
    pub interval: Option<f64>,

    /// Log-spaced interval range `a:b:n`.
    #[arg(long = "T-range", value_name = "A:B:N")]
    pub interval_range: Option<String>,

    /// Gaussian packet width (meters for `estimate`).
    #[arg(long)]
    pub width: Option<f64>,

    /// Initial state file (columns: x, Re, Im) resampled onto the grid.
    #[arg(long)]
    pub state: Option<PathBuf>,

    /// Number of grid points.
    #[arg(long = "grid-n")]
    pub grid_n: Option<usize>,

    /// Grid half width.
    #[arg(long = "grid-halfwidth")]
    pub grid_halfwidth: Option<f64>,

    /// Potential file (columns: x, V), interpolated onto the grid.
    #[arg(long)]
    pub potential: Option<PathBuf>,

    /// Split-step count used when a potential is present.
    #[arg(long)]
    pub steps: Option<usize>,

    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// Concurrency bound for sweep points.
    #[arg(long)]
    pub jobs: Option<usize>,

    /// Multiplier applied to the verify thresholds.
    #[arg(long = "tol-scale")]
    pub tol_scale: Option<f64>,
}

#[derive(ValueEnum, Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// The subset of settings a TOML config file may carry. Field names match
/// the long flags.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mass: Option<f64>,
    #[serde(rename = "T")]
    pub interval: Option<f64>,
    #[serde(rename = "T-range")]
    pub interval_range: Option<String>,
    pub width: Option<f64>,
    pub state: Option<PathBuf>,
    pub grid_n: Option<usize>,
    pub grid_halfwidth: Option<f64>,
    pub potential: Option<PathBuf>,
    pub steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub jobs: Option<usize>,
    pub tol_scale: Option<f64>,
}

/// Fully resolved run configuration; echoed verbatim into JSON output.
#[derive(Serialize, Clone, Debug)]
pub struct RunConfig {
    pub command: String,
    pub mass: f64,
    pub interval: Option<f64>,
    pub interval_range: Option<IntervalRange>,
    pub width: f64,
    pub state: Option<String>,
    pub grid_n: usize,
    pub grid_halfwidth: f64,
    pub potential: Option<String>,
    pub steps: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub out_path: Option<String>,
    pub format: OutputFormat,
    pub jobs: usize,
    pub tol_scale: f64,
}

#[derive(Serialize, Clone, Copy, Debug, PartialEq)]
pub struct IntervalRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl IntervalRange {
    /// Log-spaced interval values, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let (la, lb) = (self.start.ln(), self.stop.ln());
        (0..self.count)
            .map(|i| (la + (lb - la) * i as f64 / (self.count - 1) as f64).exp())
            .collect()
    }
}

pub fn parse_interval_range(s: &str) -> Result<IntervalRange> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        bail!("interval range must be A:B:N, got {s:?}");
    }
    let start: f64 = parts[0].parse().context("range start")?;
    let stop: f64 = parts[1].parse().context("range stop")?;
    let count: usize = parts[2].parse().context("range count")?;
    if !start.is_finite() || !stop.is_finite() || start <= 0.0 || stop <= start || count < 2 {
        bail!("interval range needs 0 < A < B and N >= 2, got {s:?}");
    }
    Ok(IntervalRange { start, stop, count })
}

/// Merge flags over the config file and fill defaults. The grid, when not
/// pinned explicitly, follows the packet sizing rule for the largest
/// interval in play.
pub fn resolve(command: &Command, file: FileConfig) -> Result<RunConfig> {
    let args = command.args();
    let mass = args.mass.or(file.mass).unwrap_or(1.0);
    if !mass.is_finite() || mass <= 0.0 {
        bail!("mass must be positive, got {mass}");
    }
    let interval = args.interval.or(file.interval);
    let range_src = args.interval_range.clone().or(file.interval_range);
    let interval_range = range_src.as_deref().map(parse_interval_range).transpose()?;
    let width = args.width.or(file.width).unwrap_or(1.0);
    if !width.is_finite() || width <= 0.0 {
        bail!("width must be positive, got {width}");
    }
    let state = args.state.clone().or(file.state);
    let potential = args.potential.clone().or(file.potential);
    let steps = args.steps.or(file.steps).unwrap_or(16);
    let out = args.out.clone().or(file.out);
    let format = args.format.or(file.format).unwrap_or(OutputFormat::Json);
    let jobs = args
        .jobs
        .or(file.jobs)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        bail!("jobs must be at least 1");
    }
    let tol_scale = args.tol_scale.or(file.tol_scale).unwrap_or(1.0);
    if !tol_scale.is_finite() || tol_scale <= 0.0 {
        bail!("tol-scale must be positive");
    }

    // Default grid: sized for the packet over the largest requested
    // interval (1.0 when no interval applies, as in verify/estimate).
    let t_max = interval
        .into_iter()
        .chain(interval_range.iter().map(|r| r.stop))
        .fold(f64::NAN, f64::max);
    let t_for_grid = if t_max.is_nan() { 1.0 } else { t_max };
    let auto = cghist::Grid::for_gaussian_run(width, mass, t_for_grid)
        .map_err(|e| anyhow::anyhow!("grid sizing failed: {e}"))?;
    let grid_n = args.grid_n.or(file.grid_n).unwrap_or(auto.n_points());
    let grid_halfwidth = args
        .grid_halfwidth
        .or(file.grid_halfwidth)
        .unwrap_or(auto.half_width());

    Ok(RunConfig {
        command: command.name().to_string(),
        mass,
        interval,
        interval_range,
        width,
        state: state.as_ref().map(|p| p.display().to_string()),
        grid_n,
        grid_halfwidth,
        potential: potential.as_ref().map(|p| p.display().to_string()),
        steps,
        out_path: out.as_ref().map(|p| p.display().to_string()),
        out,
        format,
        jobs,
        tol_scale,
    })
}

pub fn load_file_config(path: Option<&PathBuf>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
        }
    }
}
