//! Bindings behind `www/index.html`.
//!
//! Each export is a thin wrapper over a plain function of the same name
//! with a `_native` suffix, so the numerics can be tested off the browser.

use wasm_bindgen::prelude::*;

use powfrac::analysis::uniqueness_certificate;
use powfrac::app::{builtin_problem, BuiltinId};
use powfrac::kernel::{power_mlf, FracParams, MlfQuery, Normalization};
use powfrac::solver::solve;

/// Largest α on the certificate sweep.
pub const ALPHA_MAX: f64 = 0.99;

fn normalization(name: &str) -> Result<Normalization, String> {
    match name {
        "one" => Ok(Normalization::One),
        "paper" => Ok(Normalization::Paper),
        other => Err(format!("unknown normalization '{other}' (expected one or paper)")),
    }
}

fn params(alpha: f64, beta: f64, p: f64, norm: &str) -> Result<FracParams, String> {
    FracParams::new(alpha, beta, p, normalization(norm)?).map_err(|e| e.to_string())
}

/// Solution of a built-in problem on its default interval.
#[wasm_bindgen]
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    t: Vec<f64>,
    y: Vec<f64>,
    exact: Vec<f64>,
    max_error: f64,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn t(&self) -> Vec<f64> {
        self.t.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }

    /// Empty when the problem has no closed-form solution.
    #[wasm_bindgen(getter)]
    pub fn exact(&self) -> Vec<f64> {
        self.exact.clone()
    }

    /// `NaN` when the problem has no closed-form solution.
    #[wasm_bindgen(getter, js_name = maxError)]
    pub fn max_error(&self) -> f64 {
        self.max_error
    }
}

pub fn solve_example_native(problem: &str, alpha: f64, beta: f64, p: f64, norm: &str, h: f64) -> Result<Curve, String> {
    let id: BuiltinId = problem.parse().map_err(|e: powfrac::app::problems::UnknownProblem| e.to_string())?;
    let params = params(alpha, beta, p, norm)?;
    let (ivp, exact) = builtin_problem(id, &params, None).map_err(|e| e.to_string())?;
    if h.is_nan() || h <= 0.0 || (ivp.b - ivp.a) / h > 20_000.0 {
        return Err(format!("step {h} must be positive and give at most 20000 steps"));
    }
    let mut tr = solve(&ivp, &params, h).map_err(|e| e.to_string())?;
    if let Some(ex) = &exact {
        tr = tr.with_exact(ex);
    }
    Ok(Curve {
        t: tr.times(),
        max_error: tr.max_error().unwrap_or(f64::NAN),
        exact: tr.exact.take().unwrap_or_default(),
        y: tr.values,
    })
}

/// `pE_{k,l}(s)` at `points` equally spaced `s` in `[s_min, s_max]`.
pub fn mlf_curve_native(k: f64, l: f64, p: f64, s_min: f64, s_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 || s_min.is_nan() || s_max.is_nan() || s_max <= s_min {
        return Err("need at least two points on a non-empty range".into());
    }
    (0..points)
        .map(|i| {
            let s = s_min + (s_max - s_min) * i as f64 / (points - 1) as f64;
            MlfQuery::new(k, l, p, s).and_then(|q| power_mlf(&q)).map_err(|e| e.to_string())
        })
        .collect()
}

/// Contraction condition value at `points` equally spaced `α` in
/// `[0, ALPHA_MAX]` for an interval of length `width`.
pub fn certificate_curve_native(
    lipschitz: f64,
    beta: f64,
    p: f64,
    norm: &str,
    width: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    if points < 2 {
        return Err("need at least two points".into());
    }
    (0..points)
        .map(|i| {
            let alpha = ALPHA_MAX * i as f64 / (points - 1) as f64;
            let params = params(alpha, beta, p, norm)?;
            uniqueness_certificate(lipschitz, &params, 0.0, width)
                .map(|c| c.condition_value)
                .map_err(|e| e.to_string())
        })
        .collect()
}

#[wasm_bindgen(js_name = solveExample)]
pub fn solve_example(problem: &str, alpha: f64, beta: f64, p: f64, norm: &str, h: f64) -> Result<Curve, JsError> {
    solve_example_native(problem, alpha, beta, p, norm, h).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = mlfCurve)]
pub fn mlf_curve(k: f64, l: f64, p: f64, s_min: f64, s_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    mlf_curve_native(k, l, p, s_min, s_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = certificateCurve)]
pub fn certificate_curve(
    lipschitz: f64,
    beta: f64,
    p: f64,
    norm: &str,
    width: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    certificate_curve_native(lipschitz, beta, p, norm, width, points).map_err(|e| JsError::new(&e))
}
