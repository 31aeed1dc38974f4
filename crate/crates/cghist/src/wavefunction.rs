//! Complex wave functions sampled on a [`Grid`], with the reflection and
//! restriction maps used by the image-method propagators.

use std::f64::consts::PI;
use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Half-line selector for restrictions and barrier evolutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

/// Width parameter of the Gaussian packet `(2/(pi l^2))^{1/4} exp(-x^2/l^2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianSpec {
    pub width: f64,
}

impl GaussianSpec {
    pub fn new(width: f64) -> Result<Self> {
        if !width.is_finite() || width <= 0.0 {
            return Err(Error::NonpositiveInput {
                name: "width",
                value: width,
            });
        }
        Ok(Self { width })
    }

    /// Amplitude of the packet at coordinate `x`.
    pub fn amplitude(&self, x: f64) -> f64 {
        let l2 = self.width * self.width;
        (2.0 / (PI * l2)).powf(0.25) * (-x * x / l2).exp()
    }
}

/// Complex amplitudes on a grid; units `length^{-1/2}` so that
/// `sum |amp|^2 * spacing` is the probability norm.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    amplitudes: Vec<Complex64>,
}

impl WaveFunction {
    /// Wrap raw amplitudes; the length must match the grid.
    pub fn new(grid: Grid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(Error::GridMismatch(
                "amplitude count does not match grid point count",
            ));
        }
        Ok(Self { grid, amplitudes })
    }

    /// Sample a function of position onto the grid.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let amplitudes = grid.points().map(f).collect();
        Self { grid, amplitudes }
    }

    /// All-zero state.
    pub fn zero(grid: Grid) -> Self {
        let n = grid.n_points();
        Self {
            grid,
            amplitudes: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// `sum |amp|^2 * spacing`.
    pub fn norm_sqr(&self) -> f64 {
        let h = self.grid.spacing();
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * h
    }

    /// Rescale to unit norm. Returns an error for the zero state.
    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 <= 0.0 {
            return Err(Error::NonpositiveInput {
                name: "norm_sqr",
                value: n2,
            });
        }
        let s = 1.0 / n2.sqrt();
        let mut out = self.clone();
        for a in out.amplitudes.iter_mut() {
            *a *= s;
        }
        Ok(out)
    }

    /// Multiply by a complex scalar.
    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.amplitudes.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Zero out the amplitudes on the complementary half-line. No sample sits
    /// at `x = 0`, so there is nothing to tie-break.
    pub fn restrict(&self, side: Side) -> Self {
        let mut out = self.clone();
        for (j, a) in out.amplitudes.iter_mut().enumerate() {
            let x = self.grid.point(j);
            let keep = match side {
                Side::Right => x > 0.0,
                Side::Left => x < 0.0,
            };
            if !keep {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Odd extension keeping the right half: the output equals the input for
    /// `x > 0` and `-psi(-x)` for `x < 0`, which makes it odd about the
    /// origin up to grid symmetry.
    pub fn odd_extension_right(&self) -> Self {
        let n = self.grid.n_points();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            if self.grid.point(j) > 0.0 {
                amplitudes[j] = self.amplitudes[j];
                amplitudes[self.grid.mirror(j)] = -self.amplitudes[j];
            }
        }
        Self {
            grid: self.grid.clone(),
            amplitudes,
        }
    }

    /// Mirror image of [`Self::odd_extension_right`]: keeps the left half and
    /// odd-reflects it onto `x > 0`.
    pub fn odd_extension_left(&self) -> Self {
        let n = self.grid.n_points();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            if self.grid.point(j) < 0.0 {
                amplitudes[j] = self.amplitudes[j];
                amplitudes[self.grid.mirror(j)] = -self.amplitudes[j];
            }
        }
        Self {
            grid: self.grid.clone(),
            amplitudes,
        }
    }

    /// Spatial reflection `psi(x) -> psi(-x)`.
    pub fn reflected(&self) -> Self {
        let n = self.grid.n_points();
        let amplitudes = (0..n)
            .map(|j| self.amplitudes[self.grid.mirror(j)])
            .collect();
        Self {
            grid: self.grid.clone(),
            amplitudes,
        }
    }

    /// Linear interpolation of the amplitude at `x = 0` from the two central
    /// samples. Diagnostic helper for `|psi(0)|^2` style quantities.
    pub fn value_at_origin(&self) -> Complex64 {
        let n = self.grid.n_points();
        0.5 * (self.amplitudes[n / 2 - 1] + self.amplitudes[n / 2])
    }

    /// Ratio of the largest boundary amplitude to the peak amplitude; used to
    /// detect wrap-around contamination in the periodic spectral evolution.
    pub fn boundary_leak(&self) -> f64 {
        let peak = self
            .amplitudes
            .iter()
            .map(|a| a.norm())
            .fold(0.0_f64, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.grid.n_points();
        self.amplitudes[0].norm().max(self.amplitudes[n - 1].norm()) / peak
    }
}

/// `sum conj(bra) * ket * spacing`; conjugate linear in `bra`, linear in
/// `ket`. Errors if the operands live on different grids.
pub fn inner(bra: &WaveFunction, ket: &WaveFunction) -> Result<Complex64> {
    if bra.grid != ket.grid {
        return Err(Error::GridMismatch("inner product operands"));
    }
    let h = bra.grid.spacing();
    let s: Complex64 = bra
        .amplitudes
        .iter()
        .zip(&ket.amplitudes)
        .map(|(b, k)| b.conj() * k)
        .sum();
    Ok(s * h)
}

/// Sample the normalized Gaussian packet onto the grid.
///
/// Requires `half_width >= 6 * width` so the support is contained; the
/// sampled state then has unit norm to well under 1e-8.
pub fn make_gaussian(spec: GaussianSpec, grid: &Grid) -> Result<WaveFunction> {
    let needed = 6.0 * spec.width;
    if grid.half_width() < needed {
        return Err(Error::DomainTooSmall {
            needed,
            got: grid.half_width(),
        });
    }
    Ok(WaveFunction::from_fn(grid.clone(), |x| {
        Complex64::new(spec.amplitude(x), 0.0)
    }))
}

impl Add for &WaveFunction {
    type Output = WaveFunction;
    fn add(self, rhs: &WaveFunction) -> WaveFunction {
        assert_eq!(self.grid, rhs.grid, "wave function grids differ");
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(&rhs.amplitudes)
            .map(|(a, b)| a + b)
            .collect();
        WaveFunction {
            grid: self.grid.clone(),
            amplitudes,
        }
    }
}

impl Sub for &WaveFunction {
    type Output = WaveFunction;
    fn sub(self, rhs: &WaveFunction) -> WaveFunction {
        assert_eq!(self.grid, rhs.grid, "wave function grids differ");
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(&rhs.amplitudes)
            .map(|(a, b)| a - b)
            .collect();
        WaveFunction {
            grid: self.grid.clone(),
            amplitudes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> Grid {
        Grid::new(8.0, 512).unwrap()
    }

    #[test]
    fn gaussian_formula_and_norm() {
        let spec = GaussianSpec::new(1.0).unwrap();
        // Peak value quoted for the packet: (2/pi)^{1/4}.
        assert_relative_eq!(
            spec.amplitude(0.0),
            (2.0 / PI).powf(0.25),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            spec.amplitude(0.0),
            0.8932438417380023,
            max_relative = 1e-10
        );

        let psi = make_gaussian(spec, &grid()).unwrap();
        assert_relative_eq!(psi.norm_sqr(), 1.0, epsilon = 1e-10);

        // Wider packet away from the peak, against a direct evaluation.
        let spec2 = GaussianSpec::new(2.0).unwrap();
        let expected = (2.0 / (4.0 * PI)).powf(0.25) * (-1.0_f64).exp();
        assert_relative_eq!(spec2.amplitude(2.0), expected, max_relative = 1e-12);
        assert_relative_eq!(spec2.amplitude(2.0), 0.23238, max_relative = 1e-4);
    }

    #[test]
    fn gaussian_rejects_small_domain() {
        let spec = GaussianSpec::new(2.0).unwrap();
        let small = Grid::new(8.0, 256).unwrap();
        assert!(matches!(
            make_gaussian(spec, &small),
            Err(Error::DomainTooSmall { .. })
        ));
    }

    #[test]
    fn gaussian_norm_error_shrinks_quadratically_or_better() {
        let spec = GaussianSpec::new(1.0).unwrap();
        let mut errs = Vec::new();
        for n in [32usize, 64, 128] {
            let g = Grid::new(8.0, n).unwrap();
            let psi = make_gaussian(spec, &g).unwrap();
            errs.push((psi.norm_sqr() - 1.0).abs().max(1e-300));
        }
        // Each doubling should cut the error by at least 4 (it is in fact
        // spectrally small once the packet is resolved).
        assert!(errs[1] <= errs[0] / 4.0 + 1e-15, "{errs:?}");
        assert!(errs[2] <= errs[1] / 4.0 + 1e-15, "{errs:?}");
    }

    #[test]
    fn restriction_partitions_and_is_idempotent() {
        let psi = make_gaussian(GaussianSpec::new(1.0).unwrap(), &grid()).unwrap();
        let right = psi.restrict(Side::Right);
        let left = psi.restrict(Side::Left);
        assert_relative_eq!(right.norm_sqr(), 0.5, epsilon = 1e-10);
        assert_eq!(right.restrict(Side::Right), right);
        let recombined = &right + &left;
        assert_eq!(recombined, psi);
        // Disjoint supports: exact zero overlap.
        assert_eq!(inner(&right, &left).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn odd_extension_is_odd_and_fixes_odd_states() {
        let psi = make_gaussian(GaussianSpec::new(1.0).unwrap(), &grid()).unwrap();
        let ext = psi.odd_extension_right();
        let g = ext.grid().clone();
        for j in 0..g.n_points() {
            let a = ext.amplitudes()[j];
            let b = ext.amplitudes()[g.mirror(j)];
            assert!((a + b).norm() < 1e-14);
        }
        // Odd input is a fixed point.
        let odd = WaveFunction::from_fn(grid(), |x| Complex64::new(x * (-x * x).exp(), 0.0));
        assert_eq!(odd.odd_extension_right(), odd);
        assert_eq!(odd.odd_extension_left(), odd);
    }

    #[test]
    fn odd_extension_left_preserves_left_support_norm() {
        let g = grid();
        let shifted =
            WaveFunction::from_fn(g, |x| Complex64::new((-(x + 2.0) * (x + 2.0)).exp(), 0.0));
        let left_only = shifted.restrict(Side::Left);
        let ext = left_only.odd_extension_left();
        assert_relative_eq!(ext.norm_sqr(), 2.0 * left_only.norm_sqr(), epsilon = 1e-12);
    }

    #[test]
    fn inner_gaussian_overlap_matches_closed_form() {
        let g = grid();
        let a = make_gaussian(GaussianSpec::new(1.0).unwrap(), &g).unwrap();
        let b = WaveFunction::from_fn(g, |x| {
            Complex64::new(GaussianSpec::new(2.0).unwrap().amplitude(x), 0.0)
        });
        let ov = inner(&a, &b).unwrap();
        assert_relative_eq!(ov.re, (4.0_f64 / 5.0).sqrt(), epsilon = 1e-10);
        assert!(ov.im.abs() < 1e-14);
        assert_relative_eq!(inner(&a, &a).unwrap().re, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn inner_rejects_grid_mismatch() {
        let a = make_gaussian(GaussianSpec::new(1.0).unwrap(), &grid()).unwrap();
        let other = Grid::new(8.0, 256).unwrap();
        let b = make_gaussian(GaussianSpec::new(1.0).unwrap(), &other).unwrap();
        assert!(inner(&a, &b).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn state(seed: (f64, f64, f64)) -> WaveFunction {
            let (c, w, k) = seed;
            WaveFunction::from_fn(Grid::new(8.0, 128).unwrap(), |x| {
                Complex64::from_polar((-(x - c) * (x - c) / (w * w)).exp(), k * x)
            })
        }

        fn seeds() -> impl Strategy<Value = (f64, f64, f64)> {
            (-2.0..2.0, 0.4..1.5, -3.0..3.0_f64)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn inner_is_conjugate_symmetric(a in seeds(), b in seeds()) {
                let (fa, fb) = (state(a), state(b));
                let ab = inner(&fa, &fb).unwrap();
                let ba = inner(&fb, &fa).unwrap();
                prop_assert!((ab - ba.conj()).norm() < 1e-12);
            }

            #[test]
            fn inner_is_linear_in_ket_antilinear_in_bra(
                a in seeds(), b in seeds(), c in seeds(),
                re in -2.0..2.0_f64, im in -2.0..2.0_f64,
            ) {
                let (fa, fb, fc) = (state(a), state(b), state(c));
                let z = Complex64::new(re, im);
                // <a | z b + c> = z <a|b> + <a|c>
                let combo = &fb.scaled(z) + &fc;
                let lhs = inner(&fa, &combo).unwrap();
                let rhs = z * inner(&fa, &fb).unwrap() + inner(&fa, &fc).unwrap();
                prop_assert!((lhs - rhs).norm() < 1e-10);
                // <z a | b> = conj(z) <a|b>
                let lhs = inner(&fa.scaled(z), &fb).unwrap();
                let rhs = z.conj() * inner(&fa, &fb).unwrap();
                prop_assert!((lhs - rhs).norm() < 1e-10);
            }

            #[test]
            fn restriction_partitions_random_states(a in seeds(), b in seeds()) {
                let psi = &state(a) + &state(b);
                let sum = &psi.restrict(Side::Right) + &psi.restrict(Side::Left);
                prop_assert_eq!(sum, psi);
            }

            #[test]
            fn odd_extensions_mirror_each_other(a in seeds()) {
                // Reflecting, extending on the right, and reflecting back is
                // the left extension: the two maps are mirror images.
                let psi = state(a);
                let left = psi.odd_extension_left();
                let mirrored = psi.reflected().odd_extension_right().reflected();
                prop_assert_eq!(left, mirrored);
            }
        }
    }
}
