//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by grid construction, state constructors, and the
/// numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The spatial domain cannot contain the requested state.
    #[error("domain too small: need half_width >= {needed}, got {got}")]
    DomainTooSmall { needed: f64, got: f64 },

    /// Two operands live on different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(&'static str),

    /// A parameter that must be strictly positive was not.
    #[error("nonpositive input: {name} = {value}")]
    NonpositiveInput { name: &'static str, value: f64 },

    /// Invalid grid parameters.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// hyp2f1_half was evaluated on its branch cut (real z >= 1).
    #[error("branch cut: argument z = {re} + {im}i lies on [1, inf)")]
    BranchCut { re: f64, im: f64 },

    /// The lattice enumeration would exceed the path budget.
    #[error("enumeration budget exceeded: {paths:.3e} path-steps > {budget:.3e}")]
    BudgetExceeded { paths: f64, budget: f64 },

    /// Invalid lattice specification.
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    /// Malformed tabulated input data.
    #[error("invalid input data: {0}")]
    InvalidData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
