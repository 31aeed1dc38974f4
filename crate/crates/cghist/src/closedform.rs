//! Analytic formulas: the short-interval interference amplitude, the
//! asymptotic and exact-Gaussian decoherence matrices, the regularized
//! triple-integral reduction, and the SI decoherence-time estimate.
//!
//! All multivalued functions (square roots, arctanh) are taken on their
//! principal branches; the arguments arising here stay off the cuts, and the
//! principal choice is the one that reproduces the short-interval limit.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DecoherenceMatrix, HistoryClass};

/// CODATA 2018 reduced Planck constant, J s.
pub const HBAR_SI: f64 = 1.054571817e-34;

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::NonpositiveInput { name, value });
    }
    Ok(())
}

fn require_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::NonpositiveInput { name, value });
    }
    Ok(())
}

/// `lambda = mass / (2 interval)`; grows as the interval shrinks.
pub fn lambda_of(mass: f64, interval: f64) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("interval", interval)?;
    Ok(mass / (2.0 * interval))
}

/// Leading short-interval interference amplitude
/// `eta = -e^{i pi/4} |psi(0)|^2 / sqrt(pi lambda)`.
pub fn eta(psi0_sq: f64, lambda: f64) -> Result<Complex64> {
    require_nonnegative("psi0_sq", psi0_sq)?;
    require_positive("lambda", lambda)?;
    let modulus = psi0_sq / (PI * lambda).sqrt();
    Ok(-Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2) * modulus)
}

/// Inputs for the regularized interference integral: `|psi(0)|^2`, the
/// interval parameter `lambda`, and the convergence regulator `epsilon`.
/// The combination `xi = epsilon + i` drives the damped Gaussian integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticParams {
    pub psi0_sq: f64,
    pub lambda: f64,
    pub epsilon: f64,
}

impl AsymptoticParams {
    pub fn new(psi0_sq: f64, lambda: f64, epsilon: f64) -> Result<Self> {
        require_nonnegative("psi0_sq", psi0_sq)?;
        require_positive("lambda", lambda)?;
        require_nonnegative("epsilon", epsilon)?;
        Ok(Self {
            psi0_sq,
            lambda,
            epsilon,
        })
    }

    pub fn xi(&self) -> Complex64 {
        Complex64::new(self.epsilon, 1.0)
    }
}

/// The short-interval decoherence matrix: `diag(p_plus, p_minus, 0)` plus the
/// interference pattern with amplitude `eta` in the crossing column, its
/// conjugates transposed, and `-2 (eta + eta*)` in the crossing diagonal.
/// The off-diagonal contributions cancel in the total sum.
pub fn asymptotic_matrix(p_plus: f64, p_minus: f64, eta: Complex64) -> DecoherenceMatrix {
    let mut m = DecoherenceMatrix::zero();
    m.set(
        HistoryClass::StayRight,
        HistoryClass::StayRight,
        Complex64::new(p_plus, 0.0),
    );
    m.set(
        HistoryClass::StayLeft,
        HistoryClass::StayLeft,
        Complex64::new(p_minus, 0.0),
    );
    m.set(HistoryClass::StayRight, HistoryClass::CrossBoth, eta);
    m.set(HistoryClass::StayLeft, HistoryClass::CrossBoth, eta);
    m.set(HistoryClass::CrossBoth, HistoryClass::StayRight, eta.conj());
    m.set(HistoryClass::CrossBoth, HistoryClass::StayLeft, eta.conj());
    m.set(
        HistoryClass::CrossBoth,
        HistoryClass::CrossBoth,
        -2.0 * (eta + eta.conj()),
    );
    m
}

/// `2F1(1/2, 1; 3/2; z) = arctanh(sqrt z) / sqrt z` on the principal branch.
///
/// The removable singularity at the origin evaluates to 1; for very small
/// `|z|` the defining series `sum z^n / (2n + 1)` is used directly. Real
/// `z >= 1` lies on the branch cut and is rejected.
pub fn hyp2f1_half(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::BranchCut { re: z.re, im: z.im });
    }
    if z.norm() < 1e-6 {
        // 1 + z/3 + z^2/5 + z^3/7; the next term is below 1e-25.
        return Ok(Complex64::new(1.0, 0.0) + z / 3.0 + z * z / 5.0 + z * z * z / 7.0);
    }
    let s = z.sqrt();
    Ok(s.atanh() / s)
}

/// Regularized interference entry
/// `(4 / (i pi sqrt(lambda))) |psi(0)|^2 (1/4) sqrt(pi/xi) 2F1(1/2,1;3/2; 2 eps/xi)`.
///
/// At `epsilon = 0` this reduces analytically to [`eta`]; at finite
/// `epsilon` it equals the damped triple integral evaluated by the
/// quadrature oracle.
pub fn regularized_interference(params: &AsymptoticParams) -> Result<Complex64> {
    let xi = params.xi();
    let z = 2.0 * params.epsilon / xi;
    let hyp = hyp2f1_half(z)?;
    let prefactor = Complex64::new(0.0, -4.0) / (PI * params.lambda.sqrt());
    Ok(prefactor * params.psi0_sq * 0.25 * (PI / xi).sqrt() * hyp)
}

/// Exact interference amplitude for the Gaussian packet:
/// `gamma = (1/(i pi)) arctanh(sqrt(2 / (1 + i width^2 lambda)))`.
///
/// Depends on `width^2 lambda` only and tends to [`eta`] evaluated at the
/// packet's `|psi(0)|^2` as that product grows.
pub fn gaussian_gamma(width: f64, lambda: f64) -> Result<Complex64> {
    require_positive("width", width)?;
    require_positive("lambda", lambda)?;
    let arg = 2.0 / Complex64::new(1.0, width * width * lambda);
    let atanh = arg.sqrt().atanh();
    Ok(atanh * Complex64::new(0.0, -1.0 / PI))
}

/// Exact Gaussian decoherence matrix: `diag(1/2, 1/2, 0)` plus the
/// [`gaussian_gamma`] interference pattern. Sums to 1 identically.
pub fn gaussian_exact_matrix(width: f64, lambda: f64) -> Result<DecoherenceMatrix> {
    let gamma = gaussian_gamma(width, lambda)?;
    Ok(asymptotic_matrix(0.5, 0.5, gamma))
}

/// `mass * width^2 / hbar` in seconds, for SI inputs. The time scale below
/// which the extended alternatives decohere automatically.
pub fn decoherence_time(mass_kg: f64, width_m: f64) -> Result<f64> {
    require_positive("mass_kg", mass_kg)?;
    require_positive("width_m", width_m)?;
    Ok(mass_kg * width_m * width_m / HBAR_SI)
}
