//! Power fractional calculus.
//!
//! * [`kernel`]: parameters `(α, β, p, N)` and the power Mittag-Leffler function
//! * [`operators`]: weighted Riemann-Liouville integral, power fractional
//!   integral and derivative on uniform grids
//! * [`analysis`]: Gronwall bounds, uniqueness certificate, remainder bound
//! * [`solver`]: the explicit two-step Lagrange scheme and convergence studies
//! * [`app`]: expression language, configuration and the `powfrac` commands

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod analysis;
pub mod app;
pub mod error;
pub mod kernel;
pub mod operators;
mod quadrature;
pub mod solver;

pub use error::{Error, Result};
pub use kernel::{power_mlf, FracParams, MlfQuery, Normalization};
pub use operators::{Grid, ScalarFn, Trajectory};
pub use solver::{solve, Ivp};
