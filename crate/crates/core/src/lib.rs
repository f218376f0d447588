//! Nonlinear primal-dual hybrid gradient solvers for sparse logistic
//! regression.
//!
//! The problem is
//!
//! ```text
//! min_theta (1/m) sum_i log(1 + exp((A theta)_i)) - (1/m) <y, A theta>
//!           + lambda (alpha |theta|_1 + (1 - alpha)/2 |theta|_2^2)
//! ```
//!
//! with a binary response `y`. It is solved in saddle-point form, where the
//! log-partition term is replaced by its conjugate, the negative binary
//! entropy `psi`. The dual step is a Kullback-Leibler proximal step and has
//! a closed form in logit coordinates, so each iteration costs one product
//! with `A` and one with `A^T`. Step sizes only need the largest Euclidean
//! row norm of `A`, which takes one pass over the data.
//!
//! * [`solver::solve`] runs the fixed-step scheme for `alpha < 1` (linear rate).
//! * [`solver::solve_l1`] runs the accelerated adaptive-step scheme for `alpha = 1`.
//! * [`solver::solve_with_penalty`] accepts any [`prox::Penalty`].
//! * [`path::solve_path`] computes warm-started regularization paths.
//! * [`oracle`] holds the independent checks: optimality residuals,
//!   `lambda_max` and a proximal-gradient reference solver.
//!
//! The crate is `no_std` and only needs an allocator. The `parallel` feature
//! enables row-parallel products through rayon.
#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod entropy;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod model;
pub mod oracle;
pub mod path;
pub mod prox;
pub mod solver;

pub use entropy::DualPoint;
pub use error::{Error, Result};
pub use matrix::DesignMatrix;
pub use model::{objective, Dataset, PenaltyParams};
pub use path::{solve_path, PathConfig, PathResult};
pub use solver::{solve, solve_l1, SolveConfig, SolveReport, StepNorm, Termination, WarmStart};
