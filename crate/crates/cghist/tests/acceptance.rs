//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with the measured numbers. Run with `--nocapture` to see them:
//!
//! ```text
//! cargo test -p cghist --test acceptance -- --nocapture
//! ```

use cghist::histories::{interference_slope, log_slope};
use cghist::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const PSI0_SQ_UNIT_GAUSSIAN: f64 = 0.7978845608028654; // sqrt(2/pi)

fn gaussian_on(half_width: f64, n: usize) -> WaveFunction {
    let grid = Grid::new(half_width, n).unwrap();
    make_gaussian(GaussianSpec::new(1.0).unwrap(), &grid).unwrap()
}

/// Random normalized superposition of a few displaced, boosted packets.
fn random_state(rng: &mut ChaCha8Rng, grid: &Grid) -> WaveFunction {
    let mut terms = Vec::new();
    for _ in 0..3 {
        let center = rng.gen_range(-2.0..2.0);
        let width = rng.gen_range(0.5..1.5);
        let momentum = rng.gen_range(-2.0..2.0);
        let coeff = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        terms.push((center, width, momentum, coeff));
    }
    WaveFunction::from_fn(grid.clone(), |x| {
        terms
            .iter()
            .map(|&(c, w, k, a)| {
                a * Complex64::from_polar((-(x - c) * (x - c) / (w * w)).exp(), k * x)
            })
            .sum()
    })
    .normalized()
    .unwrap()
}

fn report_line(id: u32, pass: bool, detail: &str) {
    println!(
        "[criterion {id:2}] {}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Criterion 1: the two stay-put classes have disjoint supports, so their
/// interference entry is exactly zero for any state and interval.
#[test]
fn criterion_01_exact_zero_between_side_classes() {
    let grid = Grid::new(16.0, 2048).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let psi = random_state(&mut rng, &grid);
        let t = 10f64.powf(rng.gen_range(-3.0..0.0));
        let params = ModelParams::new(1.0, t).unwrap();
        let report = decoherence_matrix(&psi, &params);
        let z = report
            .matrix
            .get(HistoryClass::StayRight, HistoryClass::StayLeft)
            .norm();
        worst = worst.max(z);
    }
    let pass = worst < 1e-12;
    report_line(
        1,
        pass,
        &format!("max |D(right,left)| = {worst:.3e} < 1e-12"),
    );
    assert!(pass);
}

/// Criterion 2: the stay-right probability of the symmetric unit packet is
/// 1/2 independent of the interval.
#[test]
fn criterion_02_diagonal_interval_invariance() {
    let psi = gaussian_on(18.0, 8192);
    let ts: Vec<f64> = (0..7).map(|i| 1e-3 * 10f64.powf(i as f64 / 2.0)).collect();
    let sweep = sweep_t(&psi, 1.0, &ts);
    let mut worst = 0.0_f64;
    for (_, r) in &sweep {
        let r = r.as_ref().unwrap();
        worst = worst.max((r.probabilities[0] - 0.5).abs());
        worst = worst.max((r.probabilities[1] - 0.5).abs());
    }
    let pass = worst < 1e-3;
    report_line(
        2,
        pass,
        &format!("max |D(a,a) - 1/2| = {worst:.3e} over T in [1e-3, 1]"),
    );
    assert!(pass);
}

/// Criterion 3: the nine entries sum to one on the same sweep.
#[test]
fn criterion_03_sum_rule() {
    let psi = gaussian_on(18.0, 8192);
    let ts: Vec<f64> = (0..7).map(|i| 1e-3 * 10f64.powf(i as f64 / 2.0)).collect();
    let sweep = sweep_t(&psi, 1.0, &ts);
    let mut worst = 0.0_f64;
    for (_, r) in &sweep {
        let r = r.as_ref().unwrap();
        worst = worst.max((r.sum_check - Complex64::new(1.0, 0.0)).norm());
    }
    let pass = worst < 5e-4;
    report_line(3, pass, &format!("max |sum - 1| = {worst:.3e} < 5e-4"));
    assert!(pass);
}

/// Criterion 4: the side-crossing interference vanishes as the square root
/// of the interval.
#[test]
fn criterion_04_sqrt_t_scaling() {
    let psi = gaussian_on(8.0, 8192);
    let ts: Vec<f64> = (0..9).map(|i| 1e-3 * 10f64.powf(i as f64 / 4.0)).collect();
    let sweep = sweep_t(&psi, 1.0, &ts);
    let slope = interference_slope(&sweep).unwrap();
    let pass = (slope - 0.5).abs() <= 0.05;
    report_line(
        4,
        pass,
        &format!("log-log slope of |D(right,cross)| vs T = {slope:.4} (want 0.50 +- 0.05)"),
    );
    assert!(pass);
}

/// Criterion 5: at lambda l^2 = 1e4 the interference entries match the
/// leading asymptotic amplitudes within 5% (and 0.05 rad in phase).
#[test]
fn criterion_05_asymptotic_coefficients() {
    let psi = gaussian_on(8.0, 8192);
    let params = ModelParams::new(1.0, 0.5e-4).unwrap();
    let lambda = params.lambda();
    assert_eq!(lambda, 1e4);
    let report = decoherence_matrix(&psi, &params);

    let scaled = report
        .matrix
        .get(HistoryClass::StayRight, HistoryClass::CrossBoth)
        * lambda.sqrt();
    let want = eta(PSI0_SQ_UNIT_GAUSSIAN, lambda).unwrap() * lambda.sqrt();
    let mod_rel = (scaled.norm() - want.norm()).abs() / want.norm();
    let mut phase = (scaled.arg() - want.arg()).abs();
    if phase > PI {
        phase = 2.0 * PI - phase;
    }

    let d11_scaled = report
        .matrix
        .get(HistoryClass::CrossBoth, HistoryClass::CrossBoth)
        .re
        * lambda.sqrt();
    let want11 = 2.0 * (2.0 / PI).sqrt() * PSI0_SQ_UNIT_GAUSSIAN;
    let d11_rel = (d11_scaled - want11).abs() / want11;

    let pass = mod_rel < 0.05 && phase < 0.05 && d11_rel < 0.05;
    report_line(
        5,
        pass,
        &format!(
            "sqrt(lambda) D(right,cross): modulus off {:.4}%, phase off {phase:.4} rad; \
             sqrt(lambda) D(cross,cross) off {:.4}%",
            100.0 * mod_rel,
            100.0 * d11_rel
        ),
    );
    assert!(pass);
}

/// Criterion 6: the numerical pipeline reproduces the exact Gaussian
/// interference amplitude within 1% at lambda l^2 = 1, 10, 100; the exact
/// amplitude approaches the asymptotic one with relative error below
/// 2 / (lambda l^2).
#[test]
fn criterion_06_gaussian_closed_form() {
    let mut worst_pipeline = 0.0_f64;
    for (t, hw, n) in [(0.5, 12.0, 4096), (0.05, 8.0, 4096), (0.005, 6.5, 4096)] {
        let psi = gaussian_on(hw, n);
        let params = ModelParams::new(1.0, t).unwrap();
        let report = decoherence_matrix(&psi, &params);
        let d = report
            .matrix
            .get(HistoryClass::StayRight, HistoryClass::CrossBoth);
        let g = gaussian_gamma(1.0, params.lambda()).unwrap();
        worst_pipeline = worst_pipeline.max((d - g).norm() / g.norm());
    }

    let mut worst_margin = 0.0_f64;
    for k in 0..=8 {
        let lam = 1e2 * 10f64.powf(k as f64 / 2.0);
        let g = gaussian_gamma(1.0, lam).unwrap();
        let e = eta(PSI0_SQ_UNIT_GAUSSIAN, lam).unwrap();
        let rel = (g - e).norm() / e.norm();
        worst_margin = worst_margin.max(rel * lam / 2.0);
    }

    let pass = worst_pipeline < 0.01 && worst_margin < 1.0;
    report_line(
        6,
        pass,
        &format!(
            "pipeline vs exact amplitude: worst rel {:.4}% (< 1%); \
             exact vs asymptotic: worst rel * lambda/2 = {worst_margin:.3} (< 1)",
            100.0 * worst_pipeline
        ),
    );
    assert!(pass);
}

/// Criterion 7: the regularized interference formula reduces to the
/// asymptotic amplitude as the regulator vanishes, and matches direct
/// quadrature of the damped triple integral at a finite regulator.
#[test]
fn criterion_07_regularization_chain() {
    // Vanishing regulator (evaluated at lambda = 100, where the stated
    // absolute tolerance is meaningful: the deviation is |eta| eps / 6).
    let p = AsymptoticParams::new(PSI0_SQ_UNIT_GAUSSIAN, 100.0, 1e-6).unwrap();
    let reg = regularized_interference(&p).unwrap();
    let e = eta(PSI0_SQ_UNIT_GAUSSIAN, 100.0).unwrap();
    let abs_dev = (reg - e).norm();

    // Finite regulator vs quadrature.
    let p = AsymptoticParams::new(1.0, 1.0, 0.5).unwrap();
    let closed = regularized_interference(&p).unwrap();
    let quad = oracle::interference_quadrature(&p).unwrap();
    let rel = (closed - quad).norm() / quad.norm();

    let pass = abs_dev < 1e-8 && rel < 1e-4;
    report_line(
        7,
        pass,
        &format!(
            "|reg(eps=1e-6) - eta| = {abs_dev:.3e} (< 1e-8); \
             closed vs quadrature at eps=0.5: rel {rel:.3e} (< 1e-4)"
        ),
    );
    assert!(pass);
}

/// Criterion 8: an initial state that is odd about the barrier decoheres
/// exactly at every interval.
#[test]
fn criterion_08_antisymmetric_exact_decoherence() {
    let grid = Grid::new(18.0, 4096).unwrap();
    let odd = WaveFunction::from_fn(grid, |x| Complex64::new(x * (-x * x / 2.0).exp(), 0.0))
        .normalized()
        .unwrap();
    let ts: Vec<f64> = (0..7).map(|i| 1e-3 * 10f64.powf(i as f64 / 2.0)).collect();
    let mut worst = 0.0_f64;
    for &t in &ts {
        let params = ModelParams::new(1.0, t).unwrap();
        let report = decoherence_matrix(&odd, &params);
        worst = worst.max(report.matrix.max_off_diagonal());
    }
    let pass = worst < 1e-8;
    report_line(
        8,
        pass,
        &format!("max off-diagonal for odd state = {worst:.3e} over T in [1e-3, 1]"),
    );
    assert!(pass);
}

/// Criterion 9: a bounded well shifts the off-diagonal entries by less than
/// 2 max|V| T, the shift scales at least linearly in T, and the first-order
/// interaction expansion agrees with split-step evolution to (max|V| T)^2.
#[test]
fn criterion_09_potential_robustness() {
    let grid = Grid::new(8.0, 4096).unwrap();
    let psi = make_gaussian(GaussianSpec::new(1.0).unwrap(), &grid).unwrap();
    // The sampled bound sits just under the well's sup of 1 because the
    // staggered grid never hits x = 0.
    let v = Potential::from_fn(grid, |x| -(-x * x).exp()).unwrap();
    assert!((v.bound() - 1.0).abs() < 1e-5);

    let mut pts = Vec::new();
    let mut bound_ok = true;
    for t in [1e-3, 2e-3, 5e-3, 1e-2] {
        let params = ModelParams::new(1.0, t).unwrap();
        let free = decoherence_matrix(&psi, &params);
        let with_v = decoherence_matrix_with_potential(&psi, &params, &v, 8).unwrap();
        let mut diff = 0.0_f64;
        for a in HistoryClass::ALL {
            for b in HistoryClass::ALL {
                if a != b {
                    diff = diff.max((free.matrix.get(a, b) - with_v.matrix.get(a, b)).norm());
                }
            }
        }
        bound_ok &= diff < 2.0 * v.bound() * t;
        pts.push((t.ln(), diff.ln()));
    }
    let slope = log_slope(&pts);

    let t = 1e-3;
    let params = ModelParams::new(1.0, t).unwrap();
    let first_order = dyson_first_order(&psi, &params, &v, 8).unwrap();
    let split = evolve_potential(&psi, &params, &v, 16).unwrap();
    let expansion_diff = (&first_order - &split).norm_sqr().sqrt();
    let expansion_bound = (v.bound() * t).powi(2);

    let pass = bound_ok && slope >= 0.9 && expansion_diff < expansion_bound;
    report_line(
        9,
        pass,
        &format!(
            "off-diagonal shift within 2|V|T: {bound_ok}; shift slope {slope:.2} (>= 0.9); \
             first-order vs split-step {expansion_diff:.3e} < {expansion_bound:.1e}"
        ),
    );
    assert!(pass);
}

/// Criterion 10: the image method agrees with the Crank-Nicolson barrier
/// oracle on smooth input; the lattice class sums partition the unrestricted
/// propagator exactly and the stay-right amplitude tracks the analytic
/// barrier kernel on the calibrated instance.
#[test]
fn criterion_10_oracle_agreement() {
    // Image vs Crank-Nicolson on barrier-compatible (smooth) input.
    let grid = Grid::new(16.0, 2048).unwrap();
    let pair = WaveFunction::from_fn(grid, |x| {
        let g = |c: f64| (-(x - c) * (x - c)).exp();
        Complex64::new(g(1.0) - g(-1.0), 0.0)
    })
    .normalized()
    .unwrap();
    let params = ModelParams::new(1.0, 0.5).unwrap();
    let image = evolve_restricted_image(&pair, &params, Side::Right);
    let cn = evolve_restricted_cn(&pair, &params, Side::Right, 2000).unwrap();
    let cn_dist = (&image - &cn).norm_sqr().sqrt();

    // Lattice partition identity at machine precision.
    let p = ModelParams::new(1.0, 1.0).unwrap();
    let spec = oracle::LatticeSpec::new(4, 100, 0.05, p).unwrap();
    let sums = oracle::path_sums(&spec, 77, 77).unwrap();
    let total: Complex64 = sums.iter().sum();
    let direct = oracle::lattice_free_propagator(&spec, 77, 77).unwrap();
    let partition_defect = (total - direct).norm();

    // Stay-right amplitude vs the analytic barrier kernel, calibrated
    // tolerance 0.30 at this refinement (errors 0.397/0.310/0.275 at
    // 2/3/4 slices; the budget caps further refinement).
    let exact = restricted_kernel(spec.site(77), spec.site(77), p.lambda(), Side::Right).unwrap();
    let kernel_rel = (sums[HistoryClass::StayRight.index()] - exact).norm() / exact.norm();

    let pass = cn_dist < 1e-3 && partition_defect < 1e-12 && kernel_rel < 0.30;
    report_line(
        10,
        pass,
        &format!(
            "image vs CN (smooth) L2 = {cn_dist:.3e} (< 1e-3); \
             lattice partition defect = {partition_defect:.3e} (< 1e-12); \
             stay-right vs kernel rel = {kernel_rel:.3} (< 0.30 calibrated)"
        ),
    );
    assert!(pass);
}

/// Criterion 11: SI decoherence-time estimates land on the expected orders
/// of magnitude.
#[test]
fn criterion_11_si_estimates() {
    let cases = [
        (
            9.109e-31,
            2.426e-12,
            -19.0,
            "electron at Compton wavelength",
        ),
        (1.674e-27, 5.292e-11, -14.0, "hydrogen at Bohr radius"),
        (1e-15, 1e-6, 7.0, "micron dust grain"),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (mass, width, order, label) in cases {
        let t = decoherence_time(mass, width).unwrap();
        let log10 = t.log10();
        pass &= (log10 - order).abs() <= 1.0;
        details.push(format!(
            "{label}: {t:.2e} s (log10 = {log10:.2}, want {order} +- 1)"
        ));
    }
    report_line(11, pass, &details.join("; "));
    assert!(pass);
}

/// Criterion 12: distance between the stay-right branch and the bare
/// projection at T = 1e-4 M l^2.
///
/// The distance does decrease monotonically in T, but its exact small-T
/// limit is sqrt(2) |psi(0)| (2 pi)^{-1/4} lambda^{-1/4} = 0.0949 at
/// lambda = 5000 (equal to sqrt(D(cross,cross)/2), which the grid
/// reproduces to four digits), so the pinned 0.05 threshold cannot be met
/// at this interval by any faithful evaluation; it would require
/// T <= 8e-6 M l^2. The threshold is asserted as pinned and this check
/// fails honestly rather than loosening it.
#[test]
fn criterion_12_instantaneous_limit() {
    let psi = gaussian_on(6.2, 8192);
    let projected = psi.restrict(Side::Right);

    let mut last = f64::INFINITY;
    let mut decreasing = true;
    for t in [1e-3, 3e-4, 1e-4] {
        let params = ModelParams::new(1.0, t).unwrap();
        let branch = evolve_restricted_image(&psi, &params, Side::Right);
        let dist = (&branch - &projected).norm_sqr().sqrt();
        decreasing &= dist < last;
        last = dist;
    }
    let measured = last;
    let analytic =
        2f64.sqrt() * PSI0_SQ_UNIT_GAUSSIAN.sqrt() * (2.0 * PI).powf(-0.25) * 5000f64.powf(-0.25);
    let pass = measured < 0.05 && decreasing;
    report_line(
        12,
        pass,
        &format!(
            "||branch - projection|| at T = 1e-4 M l^2: measured {measured:.4}, \
             exact limit {analytic:.4}, threshold 0.05; decreasing in T: {decreasing}"
        ),
    );
    assert!(pass);
}
