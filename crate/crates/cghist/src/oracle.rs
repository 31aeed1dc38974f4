//! Definition-level validators: exhaustive sums over lattice paths, the
//! repeated-projection realization of the barrier propagator, and direct
//! quadrature of the regularized interference integral. These exist to
//! cross-check the production paths and are exercised by tests and the
//! `verify` command.

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::closedform::AsymptoticParams;
use crate::error::{Error, Result};
use crate::evolve::{free_evolution_signed, free_kernel};
use crate::model::{HistoryClass, ModelParams};
use crate::wavefunction::{Side, WaveFunction};

/// Path-step budget for exhaustive enumeration: `sites^slices` must not
/// exceed this.
pub const ENUMERATION_BUDGET: f64 = 1e8;

/// Time-sliced spatial lattice for exhaustive path enumeration. Sites are
/// staggered symmetrically about the origin so none sits at `x = 0` and
/// every site has a definite sign.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpec {
    n_slices: usize,
    n_sites: usize,
    site_spacing: f64,
    params: ModelParams,
}

impl LatticeSpec {
    /// `n_slices >= 2` time steps; `n_sites` even and `>= 4` (an odd count
    /// cannot be symmetric about the origin without a site at zero).
    pub fn new(
        n_slices: usize,
        n_sites: usize,
        site_spacing: f64,
        params: ModelParams,
    ) -> Result<Self> {
        if n_slices < 2 {
            return Err(Error::InvalidLattice(format!(
                "n_slices must be >= 2, got {n_slices}"
            )));
        }
        if n_sites < 4 || !n_sites.is_multiple_of(2) {
            return Err(Error::InvalidLattice(format!(
                "n_sites must be even and >= 4 so sites stagger around 0, got {n_sites}"
            )));
        }
        if !site_spacing.is_finite() || site_spacing <= 0.0 {
            return Err(Error::NonpositiveInput {
                name: "site_spacing",
                value: site_spacing,
            });
        }
        let cost = (n_sites as f64).powi(n_slices as i32);
        if cost > ENUMERATION_BUDGET {
            return Err(Error::BudgetExceeded {
                paths: cost,
                budget: ENUMERATION_BUDGET,
            });
        }
        Ok(Self {
            n_slices,
            n_sites,
            site_spacing,
            params,
        })
    }

    pub fn n_slices(&self) -> usize {
        self.n_slices
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn site_spacing(&self) -> f64 {
        self.site_spacing
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Coordinate of site `i`.
    pub fn site(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_sites);
        (i as f64 - self.n_sites as f64 / 2.0 + 0.5) * self.site_spacing
    }

    /// Site index mirrored through the origin.
    pub fn mirror(&self, i: usize) -> usize {
        self.n_sites - 1 - i
    }

    fn step_lambda(&self) -> f64 {
        let dt = self.params.interval() / self.n_slices as f64;
        self.params.mass() / (2.0 * dt)
    }

    /// Per-step kernel matrix `K_dt(site_a, site_b)`.
    fn step_kernel(&self) -> Vec<Vec<Complex64>> {
        let lam = self.step_lambda();
        (0..self.n_sites)
            .map(|a| {
                (0..self.n_sites)
                    .map(|b| free_kernel(self.site(a), self.site(b), lam).expect("lambda > 0"))
                    .collect()
            })
            .collect()
    }
}

fn classify(has_pos: bool, has_neg: bool) -> HistoryClass {
    match (has_pos, has_neg) {
        (true, false) => HistoryClass::StayRight,
        (false, true) => HistoryClass::StayLeft,
        _ => HistoryClass::CrossBoth,
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_from(
    kernel: &[Vec<Complex64>],
    spec: &LatticeSpec,
    end: usize,
    cur: usize,
    remaining: usize,
    amp: Complex64,
    has_pos: bool,
    has_neg: bool,
    sums: &mut [Complex64; 3],
) {
    if remaining == 0 {
        let amp = amp * kernel[end][cur];
        let end_pos = spec.site(end) > 0.0;
        let cls = classify(has_pos || end_pos, has_neg || !end_pos);
        sums[cls.index()] += amp;
        return;
    }
    let s = spec.site_spacing();
    for next in 0..spec.n_sites() {
        let hop = kernel[next][cur] * s;
        let pos = spec.site(next) > 0.0;
        enumerate_from(
            kernel,
            spec,
            end,
            next,
            remaining - 1,
            amp * hop,
            has_pos || pos,
            has_neg || !pos,
            sums,
        );
    }
}

/// Amplitudes of all three path classes between two endpoint sites, from an
/// exhaustive sum over the `sites^(slices-1)` interior paths. Each path
/// carries `exp(i S)` through the product of per-step short-time kernels
/// `(m/(2 pi i dt))^{1/2} exp(i m (dx)^2 / (2 dt))`, with one factor of the
/// site spacing per interior sum. Paths are classified by the strict signs
/// of all their points, endpoints included.
pub fn path_sums(spec: &LatticeSpec, start: usize, end: usize) -> Result<[Complex64; 3]> {
    if start >= spec.n_sites() || end >= spec.n_sites() {
        return Err(Error::InvalidLattice(format!(
            "endpoint index out of range: start {start}, end {end}, sites {}",
            spec.n_sites()
        )));
    }
    let kernel = spec.step_kernel();
    let interior = spec.n_slices() - 1; // >= 1 since n_slices >= 2
    let start_pos = spec.site(start) > 0.0;

    // Partition over the first interior site; each partition enumerates
    // sequentially and partitions reduce in fixed order, so the result does
    // not depend on thread scheduling.
    let s = spec.site_spacing();
    let partials: Vec<[Complex64; 3]> = (0..spec.n_sites())
        .into_par_iter()
        .map(|first| {
            let mut sums = [Complex64::new(0.0, 0.0); 3];
            let pos = spec.site(first) > 0.0;
            enumerate_from(
                &kernel,
                spec,
                end,
                first,
                interior - 1,
                kernel[first][start] * s,
                start_pos || pos,
                !start_pos || !pos,
                &mut sums,
            );
            sums
        })
        .collect();

    let mut sums = [Complex64::new(0.0, 0.0); 3];
    for part in partials {
        for (acc, v) in sums.iter_mut().zip(part) {
            *acc += v;
        }
    }
    Ok(sums)
}

/// Amplitude of one path class; see [`path_sums`].
pub fn path_sum_class(
    spec: &LatticeSpec,
    class: HistoryClass,
    start: usize,
    end: usize,
) -> Result<Complex64> {
    Ok(path_sums(spec, start, end)?[class.index()])
}

/// Unrestricted lattice propagator between two sites, computed by repeated
/// application of the step kernel rather than by enumeration. Equals the sum
/// of the three class amplitudes exactly.
pub fn lattice_free_propagator(spec: &LatticeSpec, start: usize, end: usize) -> Result<Complex64> {
    if start >= spec.n_sites() || end >= spec.n_sites() {
        return Err(Error::InvalidLattice(
            "endpoint index out of range".to_string(),
        ));
    }
    let kernel = spec.step_kernel();
    let n = spec.n_sites();
    let s = spec.site_spacing();
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[start] = Complex64::new(1.0, 0.0);
    for step in 0..spec.n_slices() {
        let weight = if step == 0 { 1.0 } else { s };
        let mut next = vec![Complex64::new(0.0, 0.0); n];
        for (a, out) in next.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, vb) in v.iter().enumerate() {
                acc += kernel[a][b] * vb;
            }
            *out = acc * weight;
        }
        v = next;
    }
    Ok(v[end])
}

/// Repeated-projection realization of the barrier evolution:
/// `(P_side evolve(T/n))^n P_side`. Each projection can only shed norm, and
/// the product converges to the image-method evolution as `n` grows.
pub fn projected_product(
    psi: &WaveFunction,
    params: &ModelParams,
    side: Side,
    n_steps: usize,
) -> Result<WaveFunction> {
    if n_steps == 0 {
        return Err(Error::NonpositiveInput {
            name: "n_steps",
            value: 0.0,
        });
    }
    let dt = params.interval() / n_steps as f64;
    let mut cur = psi.restrict(side);
    for _ in 0..n_steps {
        cur = free_evolution_signed(&cur, params.mass(), dt).restrict(side);
    }
    Ok(cur)
}

// ---------------------------------------------------------------------------
// Complex Faddeeva function and the interference quadrature.
// ---------------------------------------------------------------------------

const WEIDEMAN_TERMS: usize = 40;

fn weideman_coeffs() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let n = WEIDEMAN_TERMS;
        let m = 2 * n;
        let m2 = 2 * m;
        let l = (n as f64 / SQRT_2).sqrt();
        // Samples of exp(-t^2)(L^2 + t^2) under t = L tan(theta/2); the
        // sample at theta = pi corresponds to t = inf where it vanishes.
        let f: Vec<f64> = (0..m2)
            .map(|j| {
                if j == m {
                    return 0.0;
                }
                let theta = j as f64 * PI / m as f64;
                let t = l * (theta / 2.0).tan();
                (-t * t).exp() * (l * l + t * t)
            })
            .collect();
        (1..=n)
            .map(|k| {
                let s: f64 = f
                    .iter()
                    .enumerate()
                    .map(|(j, fj)| fj * ((k * j) as f64 * PI / m as f64).cos())
                    .sum();
                s / m2 as f64
            })
            .collect()
    })
}

/// Scaled complementary error function `w(z) = exp(-z^2) erfc(-i z)`,
/// computed by a rational series in `(L + iz)/(L - iz)`. Valid for
/// `Im z >= 0`, where `w` is bounded.
pub fn faddeeva_w(z: Complex64) -> Complex64 {
    debug_assert!(z.im >= -1e-12, "faddeeva_w wants the upper half plane");
    let coeffs = weideman_coeffs();
    let l = (WEIDEMAN_TERMS as f64 / SQRT_2).sqrt();
    let iz = Complex64::new(-z.im, z.re);
    let d = l - iz;
    let ratio = (l + iz) / d;
    let mut p = Complex64::new(0.0, 0.0);
    for &a in coeffs.iter().rev() {
        p = p * ratio + a;
    }
    2.0 * p / (d * d) + (1.0 / PI.sqrt()) / d
}

/// `integral_0^inf exp(-c t^2 - 2 i t y) dt` for `Re c > 0`, via the
/// Faddeeva function.
pub fn half_gaussian_fourier(c: Complex64, y: f64) -> Complex64 {
    let sq = c.sqrt();
    PI.sqrt() / (2.0 * sq) * faddeeva_w(Complex64::new(-y, 0.0) / sq)
}

/// `integral_0^inf exp(-c t^2) sin(2 t y) dt` for `Re c > 0` (a Dawson-type
/// integral), via the Faddeeva function.
pub fn half_gaussian_sine(c: Complex64, y: f64) -> Complex64 {
    let sq = c.sqrt();
    let z = Complex64::new(y, 0.0) / sq;
    Complex64::new(0.0, 1.0) * PI.sqrt() / (2.0 * sq) * ((-z * z).exp() - faddeeva_w(z))
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: usize,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let refined = left + right;
    if depth == 0 || (refined - whole).norm() <= 15.0 * tol {
        return refined + (refined - whole) / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn integrate(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Direct numerical evaluation of the damped interference integral
/// `(4/(i pi sqrt(lambda))) |psi(0)|^2
///  int dy dy' dy'' exp(-xi* y'^2) exp(-xi y''^2) exp(-2i y'' y) sin(2 y' y)`
/// over the positive octant, with `xi = epsilon + i` and `epsilon > 0`.
///
/// The two damped Gaussian integrals are evaluated in closed form through
/// the Faddeeva function (checked against brute-force quadrature in the
/// tests); the remaining `y` integral is done by adaptive quadrature with an
/// analytic `1/(4 i y^2)` tail correction.
pub fn interference_quadrature(params: &AsymptoticParams) -> Result<Complex64> {
    if !params.epsilon.is_finite() || params.epsilon <= 0.0 {
        return Err(Error::NonpositiveInput {
            name: "epsilon",
            value: params.epsilon,
        });
    }
    let xi = params.xi();
    let xic = xi.conj();
    let f = move |y: f64| half_gaussian_fourier(xi, y) * half_gaussian_sine(xic, y);

    let cut = 400.0;
    let mut total = Complex64::new(0.0, 0.0);
    let mut lo = 0.0;
    for hi in [1.0, 10.0, 100.0, cut] {
        total += integrate(&f, lo, hi, 1e-11);
        lo = hi;
    }
    // A ~ 1/(2 i y), B ~ 1/(2 y): the tail integrates to 1/(4 i Y) with an
    // O(1/Y^3) remainder.
    total += Complex64::new(0.0, -1.0 / (4.0 * cut));

    let prefactor = Complex64::new(0.0, -4.0) / (PI * params.lambda.sqrt());
    Ok(prefactor * params.psi0_sq * total)
}
