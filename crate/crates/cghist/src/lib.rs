//! Coarse-grained spacetime histories of a free 1D quantum particle.
//!
//! A particle of mass `m` evolves for a time `T`. Partition its paths into
//! three classes: those that stay right of the origin, those that stay left,
//! and those that cross both sides. This crate computes the 3x3 interference
//! (decoherence) matrix of that partition for any initial wave function,
//! checks it against closed forms, and quantifies how fast the off-diagonal
//! interference dies as `T` shrinks -- the regime where extended-in-time
//! alternatives behave like instantaneous ones.
//!
//! The numerical core works in units with `hbar = 1`. Modules:
//!
//! - [`grid`] / [`wavefunction`]: staggered spatial grids and states on them,
//!   with the reflection and restriction maps the image method needs.
//! - [`evolve`]: spectral free evolution, barrier-restricted evolution by the
//!   method of images and by Crank-Nicolson, split-step evolution with a
//!   bounded potential, and the first-order interaction-picture correction.
//! - [`histories`]: branch wave functions, the decoherence matrix, and
//!   interval sweeps.
//! - [`closedform`]: the analytic interference amplitudes, the hypergeometric
//!   reduction of the regularized integral, and the SI decoherence-time
//!   estimate.
//! - [`oracle`]: exhaustive lattice path sums, repeated-projection evolution,
//!   and direct quadrature -- definition-level cross-checks used in tests and
//!   by the `verify` command of the CLI.
//!
//! ```
//! use cghist::{decoherence_matrix, make_gaussian, GaussianSpec, Grid, ModelParams};
//!
//! let grid = Grid::new(12.0, 2048)?;
//! let psi = make_gaussian(GaussianSpec::new(1.0)?, &grid)?;
//! let slow = decoherence_matrix(&psi, &ModelParams::new(1.0, 0.5)?);
//! let fast = decoherence_matrix(&psi, &ModelParams::new(1.0, 0.005)?);
//! // Staying right and staying left keep probability 1/2 at any interval,
//! // while the interference with the crossing class dies as T shrinks.
//! assert!((fast.probabilities[0] - 0.5).abs() < 1e-3);
//! assert!(fast.epsilon_dec < 0.5 * slow.epsilon_dec);
//! # Ok::<(), cghist::Error>(())
//! ```

pub mod closedform;
pub mod error;
pub mod evolve;
pub mod grid;
pub mod histories;
pub mod model;
pub mod oracle;
pub mod wavefunction;

pub use closedform::{
    asymptotic_matrix, decoherence_time, eta, gaussian_exact_matrix, gaussian_gamma, hyp2f1_half,
    lambda_of, regularized_interference, AsymptoticParams,
};
pub use error::{Error, Result};
pub use evolve::{
    dyson_first_order, evolve_free, evolve_potential, evolve_restricted_cn,
    evolve_restricted_image, free_kernel, restricted_kernel, Potential,
};
pub use grid::Grid;
pub use histories::{
    build_branches, build_branches_with_potential, decoherence_matrix,
    decoherence_matrix_with_potential, sweep_t, BranchSet, DecoherenceReport,
};
pub use model::{DecoherenceMatrix, HistoryClass, ModelParams};
pub use wavefunction::{inner, make_gaussian, GaussianSpec, Side, WaveFunction};
