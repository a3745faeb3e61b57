//! Built-in benchmark problems.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::kernel::{gamma, FracParams};
use crate::operators::ScalarFn;
use crate::solver::Ivp;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinId {
    Example1,
    Example2,
}

impl BuiltinId {
    pub const ALL: [BuiltinId; 2] = [BuiltinId::Example1, BuiltinId::Example2];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinId::Example1 => "example1",
            BuiltinId::Example2 => "example2",
        }
    }

    /// Default right end of the time interval.
    pub fn default_b(self) -> f64 {
        match self {
            BuiltinId::Example1 => 10.0,
            BuiltinId::Example2 => 4.0,
        }
    }
}

impl fmt::Display for BuiltinId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownProblem(pub String);

impl fmt::Display for UnknownProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown problem '{}' (expected example1 or example2)", self.0)
    }
}

impl std::error::Error for UnknownProblem {}

impl FromStr for BuiltinId {
    type Err = UnknownProblem;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| UnknownProblem(s.to_string()))
    }
}

/// `y(t) = φ t² + 2 ln p ψ t^{β+2} / Γ(β+3)`.
pub fn example1_exact(params: &FracParams) -> ScalarFn {
    let phi = params.phi();
    let coef = 2.0 * params.ln_p() * params.psi() / gamma(params.beta() + 3.0);
    let beta = params.beta();
    ScalarFn::new(move |t| phi * t * t + coef * t.powf(beta + 2.0))
}

pub fn example2_rhs(t: f64, y: f64) -> f64 {
    t * t / 15.0 * (2.0 * t).cos() / (1.0 + y.abs())
}

/// The problem `id` on `[a, b]` (`b` defaults to the benchmark's value),
/// with its exact solution when one is known.
pub fn builtin_problem(id: BuiltinId, params: &FracParams, b: Option<f64>) -> crate::Result<(Ivp, Option<ScalarFn>)> {
    let b = b.unwrap_or(id.default_b());
    match id {
        BuiltinId::Example1 => {
            let ivp = Ivp::new(|t, _| t * t, ScalarFn::constant(1.0), 0.0, b, 0.0)?;
            Ok((ivp, Some(example1_exact(params))))
        }
        BuiltinId::Example2 => {
            let ivp = Ivp::new(example2_rhs, ScalarFn::new(|t| t + 2.0), 0.0, b, PI.sqrt())?;
            Ok((ivp, None))
        }
    }
}
