//! Error type shared by every module of the crate.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, MslvError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MslvError {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The molar volume falls in the gap between the solid and fluid branches
    /// (or within the guard distance of one of its edges).
    #[error("molar volume {0} lies in the forbidden region between the solid and fluid branches")]
    ForbiddenRegion(f64),

    /// Parameter set violates one of its invariants.
    #[error("validation error: {0}")]
    Validation(String),

    /// Malformed gas file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no sign change on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}")]
    NoBracket { a: f64, b: f64, fa: f64, fb: f64 },

    #[error("no convergence after {iterations} iterations (residual norm {residual:e}, last iterate {last:?})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    #[error("singular Jacobian at {0:?}")]
    SingularJacobian(Vec<f64>),

    #[error("adaptive quadrature exceeded maximum subdivision depth near x = {0}")]
    MaxDepth(f64),

    /// Solver iterate left the branch it was confined to.
    #[error("branch violation: {0}")]
    BranchViolation(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl MslvError {
    /// Process exit code for the command-line front end.
    ///
    /// 2 for invalid input, 3 for solver failures, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            MslvError::Domain(_)
            | MslvError::ForbiddenRegion(_)
            | MslvError::Validation(_)
            | MslvError::Parse { .. }
            | MslvError::Degenerate(_) => 2,
            MslvError::NoBracket { .. }
            | MslvError::NoConvergence { .. }
            | MslvError::SingularJacobian(_)
            | MslvError::MaxDepth(_)
            | MslvError::BranchViolation(_) => 3,
            MslvError::Io(_) => 4,
        }
    }
}

impl From<std::io::Error> for MslvError {
    fn from(err: std::io::Error) -> Self {
        MslvError::Io(err.to_string())
    }
}
