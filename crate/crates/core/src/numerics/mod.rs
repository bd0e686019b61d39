//! Numerical kernels shared by both mechanisms: adaptive 1-D quadrature,
//! bracketed scalar root finding, and a damped Newton solver for square
//! nonlinear systems with finite-difference Jacobians.
//!
//! Everything here is a pure function of its inputs.

mod newton;
mod quadrature;
mod roots;

pub use newton::{solve_system, SolverSettings, SystemSolution};
pub use quadrature::{integrate_1d, Integral, QuadratureGrid, MAX_SUBINTERVALS};
pub use roots::{find_root, find_root_with, RootTolerance};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    QuadratureNotConverged { estimate: f64, error_bound: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("function is not finite at x = {x}")]
    NonFiniteFunction { x: f64 },

    #[error("newton solver hit max_iter = {iterations}, final residual {residual:e}")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error(
        "newton step leaves the positive orthant after full backtracking (residual {residual:e})"
    )]
    LeftPositiveOrthant { residual: f64 },

    #[error("backtracking found no decrease from residual {residual:e}")]
    LineSearchStalled { residual: f64 },

    #[error("singular jacobian at iteration {iteration}")]
    SingularJacobian { iteration: usize },
}

pub type Result<T> = std::result::Result<T, NumericsError>;
