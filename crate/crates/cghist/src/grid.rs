//! Uniform staggered spatial grid on `[-half_width, half_width]`.
//!
//! Samples sit at half-integer multiples of the spacing, so `x = 0` is never
//! a sample point and the grid is mirror symmetric about the origin. Every
//! wave function in the crate lives on such a grid.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Minimum number of grid points.
pub const MIN_POINTS: usize = 16;

/// A uniform, origin-staggered discretization of `[-half_width, half_width]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    half_width: f64,
    n_points: usize,
}

impl Grid {
    /// Build a grid. `n_points` must be at least 16 and even so that the
    /// samples pair up symmetrically about `x = 0`; powers of two keep the
    /// spectral transforms fast.
    pub fn new(half_width: f64, n_points: usize) -> Result<Self> {
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "half_width must be positive and finite, got {half_width}"
            )));
        }
        if n_points < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "n_points must be >= {MIN_POINTS}, got {n_points}"
            )));
        }
        if !n_points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "n_points must be even so that no sample sits at x = 0, got {n_points}"
            )));
        }
        Ok(Self {
            half_width,
            n_points,
        })
    }

    /// Grid sized for evolving a Gaussian of width `width` over times up to
    /// `t_max`: the half width follows the sizing rule
    /// `6 * width * (1 + 2 t / (m * width^2))` so the dispersed packet stays
    /// inside the box, and the spacing resolves both the packet and the
    /// interference structure near the origin (scale `1/sqrt(lambda)`),
    /// capped at 8192 points.
    pub fn for_gaussian_run(width: f64, mass: f64, t_max: f64) -> Result<Self> {
        if !width.is_finite() || width <= 0.0 {
            return Err(Error::NonpositiveInput {
                name: "width",
                value: width,
            });
        }
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::NonpositiveInput {
                name: "mass",
                value: mass,
            });
        }
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(Error::NonpositiveInput {
                name: "t_max",
                value: t_max,
            });
        }
        let half_width = 6.0 * width * (1.0 + 2.0 * t_max / (mass * width * width));
        let lambda = mass / (2.0 * t_max);
        let target_spacing = (width / 8.0).min(1.0 / (8.0 * lambda.sqrt()));
        let mut n = MIN_POINTS;
        while n < 8192 && (2.0 * half_width / n as f64) > target_spacing {
            n *= 2;
        }
        Self::new(half_width, n.max(1024))
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Distance between adjacent samples.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n_points as f64
    }

    /// Coordinate of sample `j`; samples are staggered so none sits at 0.
    pub fn point(&self, j: usize) -> f64 {
        debug_assert!(j < self.n_points);
        -self.half_width + (j as f64 + 0.5) * self.spacing()
    }

    /// Iterator over all sample coordinates, left to right.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.point(j))
    }

    /// Index of the sample mirrored through `x = 0`.
    pub fn mirror(&self, j: usize) -> usize {
        debug_assert!(j < self.n_points);
        self.n_points - 1 - j
    }

    /// Angular wavenumber of spectral mode `m` in standard FFT ordering
    /// (nonnegative frequencies first, then negative).
    pub fn wavenumber(&self, m: usize) -> f64 {
        debug_assert!(m < self.n_points);
        let n = self.n_points;
        let f = if m <= n / 2 {
            m as f64
        } else {
            m as f64 - n as f64
        };
        PI * f / self.half_width
    }
}
