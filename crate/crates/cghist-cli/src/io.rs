//! Tabulated input files: initial states and potentials.

use std::path::Path;

use anyhow::{bail, Context, Result};
use cghist::{Grid, Potential, WaveFunction};
use num_complex::Complex64;

fn read_columns(path: &Path, n_cols: usize) -> Result<Vec<Vec<f64>>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<f64> = line
            .split([' ', '\t', ','])
            .filter(|f| !f.is_empty())
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("{}:{}: bad number", path.display(), lineno + 1))?;
        if fields.len() != n_cols {
            bail!(
                "{}:{}: expected {n_cols} columns, got {}",
                path.display(),
                lineno + 1,
                fields.len()
            );
        }
        rows.push(fields);
    }
    if rows.len() < 2 {
        bail!("{}: needs at least two data rows", path.display());
    }
    Ok(rows)
}

fn check_uniform(xs: &[f64], what: &str) -> Result<f64> {
    let h = xs[1] - xs[0];
    if !h.is_finite() || h <= 0.0 {
        bail!("{what}: sample coordinates must be strictly increasing");
    }
    for w in xs.windows(2) {
        let step = w[1] - w[0];
        if (step - h).abs() > 1e-9 * h.abs().max(1.0) {
            bail!("{what}: sample coordinates must be uniformly spaced");
        }
    }
    Ok(h)
}

/// Load a state from a three-column file (x, Re, Im) on a uniform ascending
/// x ladder and resample it onto `grid` by band-limited (sinc) interpolation.
pub fn load_state(path: &Path, grid: &Grid) -> Result<WaveFunction> {
    let rows = read_columns(path, 3)?;
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let amps: Vec<Complex64> = rows.iter().map(|r| Complex64::new(r[1], r[2])).collect();
    let h_in = check_uniform(&xs, "state file")?;

    let sinc = |t: f64| {
        if t.abs() < 1e-12 {
            1.0
        } else {
            (std::f64::consts::PI * t).sin() / (std::f64::consts::PI * t)
        }
    };
    let psi = WaveFunction::from_fn(grid.clone(), |x| {
        xs.iter()
            .zip(&amps)
            .map(|(&xi, &a)| a * sinc((x - xi) / h_in))
            .sum()
    });
    let norm = psi.norm_sqr();
    if !norm.is_finite() || norm <= 0.0 {
        bail!(
            "state file {}: resampled state has zero norm",
            path.display()
        );
    }
    Ok(psi.normalized().expect("norm checked"))
}

/// Load a potential from a two-column file (x, V) on an ascending ladder;
/// values between samples are linearly interpolated and taken as zero
/// outside the tabulated range.
pub fn load_potential(path: &Path, grid: &Grid) -> Result<Potential> {
    let rows = read_columns(path, 2)?;
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let vs: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    for w in xs.windows(2) {
        if w[1] <= w[0] {
            bail!("potential file: coordinates must be strictly increasing");
        }
    }
    let interp = |x: f64| -> f64 {
        if x < xs[0] || x > *xs.last().unwrap() {
            return 0.0;
        }
        let i = xs.partition_point(|&xi| xi <= x).min(xs.len() - 1);
        if i == 0 {
            return vs[0];
        }
        let frac = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        vs[i - 1] + frac * (vs[i] - vs[i - 1])
    };
    Potential::from_fn(grid.clone(), interp).map_err(|e| anyhow::anyhow!("{e}"))
}
