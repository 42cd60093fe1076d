//! Numerical kernels used by the equation-of-state solvers.
//!
//! Everything here is deterministic: identical inputs give bit-identical
//! outputs, and no kernel keeps state between calls.

mod diff;
mod newton;
mod quadrature;
mod roots;

pub use diff::{fd_derivative, fd_derivative_richardson, FdOrder};
pub use newton::{newton_nd, Jacobian, NewtonOptions};
pub use quadrature::{integrate, Quadrature};
pub use roots::bracket_root;

/// Default absolute residual tolerance for root finding and Newton solves
/// in reduced units.
pub const DEFAULT_SOLVER_TOL: f64 = 1e-12;

/// Default relative tolerance for adaptive quadrature.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Outcome of an iterative solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<X> {
    pub solution: X,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Accepted iterates, recorded only when requested.
    pub trace: Option<Vec<X>>,
}
