//! Branch wave functions and the decoherence functional for the three-class
//! partition of paths: stay right, stay left, cross both.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::evolve::{evolve_free, evolve_potential, evolve_restricted_image, Potential};
use crate::model::{DecoherenceMatrix, HistoryClass, ModelParams};
use crate::wavefunction::{inner, Side, WaveFunction};

/// Branch norms below this are treated as an empty class when normalizing
/// interference ratios; an empty branch interferes with nothing.
const EMPTY_BRANCH_FLOOR: f64 = 1e-12;

/// The three branch wave functions obtained by applying the class operators
/// to an initial state. Their sum reproduces the freely evolved state
/// exactly, because the crossing branch is defined by subtraction.
#[derive(Clone, Debug)]
pub struct BranchSet {
    pub stay_right: WaveFunction,
    pub stay_left: WaveFunction,
    pub cross: WaveFunction,
    pub params: ModelParams,
}

impl BranchSet {
    pub fn branch(&self, class: HistoryClass) -> &WaveFunction {
        match class {
            HistoryClass::StayRight => &self.stay_right,
            HistoryClass::StayLeft => &self.stay_left,
            HistoryClass::CrossBoth => &self.cross,
        }
    }
}

/// Decoherence matrix together with derived summaries: the diagonal
/// (candidate probabilities), a scale-free interference measure, and the
/// completeness sum.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoherenceReport {
    pub matrix: DecoherenceMatrix,
    /// Diagonal entries in class order.
    pub probabilities: [f64; 3],
    /// Max over distinct class pairs of |D(a,b)| / sqrt(D(a,a) D(b,b)),
    /// with empty branches contributing zero.
    pub epsilon_dec: f64,
    /// Sum of all nine entries; 1 for a normalized state on an adequate grid.
    pub sum_check: Complex64,
}

/// Interference ratios are considered negligible below this; reports with
/// `epsilon_dec` under the threshold describe a decoherent set.
pub const DECOHERENT_THRESHOLD: f64 = 0.05;

impl DecoherenceReport {
    pub fn is_decoherent(&self) -> bool {
        self.epsilon_dec < DECOHERENT_THRESHOLD
    }
}

/// Apply the three class operators to `psi`: barrier-restricted evolution on
/// each side, and the crossing branch as the difference from free evolution.
pub fn build_branches(psi: &WaveFunction, params: &ModelParams) -> BranchSet {
    let stay_right = evolve_restricted_image(psi, params, Side::Right);
    let stay_left = evolve_restricted_image(psi, params, Side::Left);
    let full = evolve_free(psi, params);
    let cross = &(&full - &stay_right) - &stay_left;
    BranchSet {
        stay_right,
        stay_left,
        cross,
        params: *params,
    }
}

/// Branch construction in the presence of a bounded potential.
///
/// Paths that never leave one side only feel the potential there, so each
/// restricted evolution runs under the even symmetrization of `v` about the
/// barrier for its own side; that keeps the image construction exact. The
/// crossing branch is again the difference from the full evolution.
pub fn build_branches_with_potential(
    psi: &WaveFunction,
    params: &ModelParams,
    v: &Potential,
    n_steps: usize,
) -> Result<BranchSet> {
    let v_right = v.symmetrized(Side::Right);
    let v_left = v.symmetrized(Side::Left);
    let stay_right = evolve_potential(&psi.odd_extension_right(), params, &v_right, n_steps)?
        .restrict(Side::Right);
    let stay_left =
        evolve_potential(&psi.odd_extension_left(), params, &v_left, n_steps)?.restrict(Side::Left);
    let full = evolve_potential(psi, params, v, n_steps)?;
    let cross = &(&full - &stay_right) - &stay_left;
    Ok(BranchSet {
        stay_right,
        stay_left,
        cross,
        params: *params,
    })
}

/// Assemble the interference matrix from a branch set:
/// `D(a, b) = <branch_b | branch_a>`.
pub fn report_from_branches(branches: &BranchSet) -> DecoherenceReport {
    let matrix = DecoherenceMatrix::from_fn(|a, b| {
        inner(branches.branch(b), branches.branch(a)).expect("branches share a grid")
    });
    let probabilities = matrix.diagonal();
    let epsilon_dec = normalized_interference(&matrix);
    let sum_check = matrix.total_sum();
    DecoherenceReport {
        matrix,
        probabilities,
        epsilon_dec,
        sum_check,
    }
}

fn normalized_interference(matrix: &DecoherenceMatrix) -> f64 {
    let diag = matrix.diagonal();
    let mut worst = 0.0_f64;
    for a in HistoryClass::ALL {
        for b in HistoryClass::ALL {
            if a == b {
                continue;
            }
            let da = diag[a.index()];
            let db = diag[b.index()];
            if da < EMPTY_BRANCH_FLOOR || db < EMPTY_BRANCH_FLOOR {
                continue;
            }
            worst = worst.max(matrix.get(a, b).norm() / (da * db).sqrt());
        }
    }
    worst
}

/// Decoherence functional of `psi` over the model interval.
pub fn decoherence_matrix(psi: &WaveFunction, params: &ModelParams) -> DecoherenceReport {
    report_from_branches(&build_branches(psi, params))
}

/// Decoherence functional with a bounded potential included.
pub fn decoherence_matrix_with_potential(
    psi: &WaveFunction,
    params: &ModelParams,
    v: &Potential,
    n_steps: usize,
) -> Result<DecoherenceReport> {
    Ok(report_from_branches(&build_branches_with_potential(
        psi, params, v, n_steps,
    )?))
}

/// One report per interval value, computed independently (no state reuse
/// across points) so the sweep parallelizes and reproduces point results
/// bit for bit. Failed points are reported in place and the sweep continues.
/// Results are returned in input order.
pub fn sweep_t(
    psi: &WaveFunction,
    mass: f64,
    t_values: &[f64],
) -> Vec<(f64, Result<DecoherenceReport>)> {
    t_values
        .par_iter()
        .map(|&t| {
            let report = ModelParams::new(mass, t).map(|p| decoherence_matrix(psi, &p));
            (t, report)
        })
        .collect()
}

/// Least-squares slope of `y` against `x` for pre-transformed points; used
/// for the log-log scaling fits of sweep outputs.
pub fn log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Fitted slope of `ln |D(stay_right, cross)|` against `ln T` over the
/// successful points of a sweep.
pub fn interference_slope(sweep: &[(f64, Result<DecoherenceReport>)]) -> Option<f64> {
    let points: Vec<(f64, f64)> = sweep
        .iter()
        .filter_map(|(t, r)| {
            r.as_ref().ok().map(|rep| {
                let d = rep
                    .matrix
                    .get(HistoryClass::StayRight, HistoryClass::CrossBoth)
                    .norm();
                (t.ln(), d.ln())
            })
        })
        .collect();
    if points.len() < 2 {
        return None;
    }
    Some(log_slope(&points))
}
