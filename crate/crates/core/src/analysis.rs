//! Gronwall bounds, the contraction certificate and the a-priori remainder
//! bound of the two-step scheme.

use crate::error::{Error, Result};
use crate::kernel::{gamma, log_gamma_unchecked, sum_log_series, FracParams, DEFAULT_SERIES_TOL};
use crate::operators::ScalarFn;
use crate::quadrature::GaussLegendre;

/// Coefficient `v` multiplying the power fractional integral in the
/// Gronwall hypothesis.
#[derive(Clone, Debug)]
pub enum Coefficient {
    Constant(f64),
    Function(ScalarFn),
}

impl Coefficient {
    fn eval(&self, t: f64) -> f64 {
        match self {
            Coefficient::Constant(c) => *c,
            Coefficient::Function(f) => f.eval(t),
        }
    }
}

/// Inputs of a Gronwall bound evaluated at time `t`.
#[derive(Clone, Debug)]
pub struct GronwallInput {
    pub u: ScalarFn,
    pub v: Coefficient,
    pub params: FracParams,
    pub a: f64,
    pub t: f64,
    pub tol: f64,
    /// Gauss-Legendre panels for the memory integral.
    pub panels: usize,
}

impl GronwallInput {
    pub fn new(u: ScalarFn, v: Coefficient, params: FracParams, a: f64, t: f64) -> Self {
        GronwallInput { u, v, params, a, t, tol: DEFAULT_SERIES_TOL, panels: 64 }
    }

    fn validate_common(&self) -> Result<()> {
        if !(self.t >= self.a) || !self.a.is_finite() || !self.t.is_finite() {
            return Err(Error::param("t", format!("need finite t >= a, got a = {}, t = {}", self.a, self.t)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::param("tol", "must be positive"));
        }
        if self.params.p() < 1.0 {
            return Err(Error::Hypothesis { inequality: "p >= 1", value: self.params.p() });
        }
        Ok(())
    }
}

/// Bound for constant `v ≡ λ`:
/// `u(t)/(1-λφ) · (1 + Σ_{n≥1} x^n (t-a)^{nβ} / Γ(nβ))`,
/// `x = ln p λ ψ / (1 - λφ)`.
pub fn gronwall_bound_constant(inp: &GronwallInput) -> Result<f64> {
    inp.validate_common()?;
    let lambda = match inp.v {
        Coefficient::Constant(c) => c,
        Coefficient::Function(_) => {
            return Err(Error::param("v", "constant bound needs a constant coefficient"))
        }
    };
    if !(lambda >= 0.0) {
        return Err(Error::Hypothesis { inequality: "lambda >= 0", value: lambda });
    }
    let fp = &inp.params;
    let denom = 1.0 - lambda * fp.phi();
    if !(denom > 0.0) {
        return Err(Error::Hypothesis { inequality: "1 - lambda*phi(alpha) > 0", value: denom });
    }
    let ut = inp.u.eval(inp.t);
    if !(ut >= 0.0) {
        return Err(Error::Hypothesis { inequality: "u(t) >= 0", value: ut });
    }
    let x = fp.ln_p() * lambda * fp.psi() / denom;
    let tau = inp.t - inp.a;
    let series = if x == 0.0 || tau == 0.0 {
        1.0
    } else {
        let ln_step = x.ln() + fp.beta() * tau.ln();
        let beta = fp.beta();
        1.0 + sum_log_series(
            1,
            |n| (n as f64 * ln_step - log_gamma_unchecked(n as f64 * beta), false),
            inp.tol,
            "Gronwall series",
        )?
    };
    Ok(ut / denom * series)
}

const HYPOTHESIS_SAMPLES: usize = 257;

/// Full bound for a non-negative, non-decreasing `v`:
///
/// ```text
/// u(t)/(1-φv(t)) + Σ_{n≥1} V^n/Γ(nβ) ∫_a^t (t-s)^{nβ-1} u(s)/(1-φv(s)) ds,
/// V = ln p ψ v(t) / (1 - φ v(t)).
/// ```
///
/// Each memory integral is mapped by `s = t - (t-a) x^{1/(nβ)}` onto a
/// bounded integrand and evaluated with geometrically graded Gauss-Legendre
/// panels toward `x = 0`, that is toward `s = t`.
pub fn gronwall_bound_series(inp: &GronwallInput) -> Result<f64> {
    inp.validate_common()?;
    let fp = &inp.params;
    let phi = fp.phi();
    let (a, t) = (inp.a, inp.t);
    let tau = t - a;

    let mut prev_v = f64::NEG_INFINITY;
    for i in 0..HYPOTHESIS_SAMPLES {
        let s = if i + 1 == HYPOTHESIS_SAMPLES { t } else { a + tau * i as f64 / (HYPOTHESIS_SAMPLES - 1) as f64 };
        let us = inp.u.eval(s);
        if !(us >= 0.0) {
            return Err(Error::Hypothesis { inequality: "u(s) >= 0", value: us });
        }
        let vs = inp.v.eval(s);
        if !(vs >= 0.0) {
            return Err(Error::Hypothesis { inequality: "v(s) >= 0", value: vs });
        }
        if vs < prev_v - 1e-14 * prev_v.abs().max(1.0) {
            return Err(Error::Hypothesis { inequality: "v non-decreasing", value: vs - prev_v });
        }
        prev_v = vs;
        let d = 1.0 - phi * vs;
        if !(d > 0.0) {
            return Err(Error::Hypothesis { inequality: "1 - phi(alpha)*v(s) > 0", value: d });
        }
    }

    let vt = inp.v.eval(t);
    let denom_t = 1.0 - phi * vt;
    let head = inp.u.eval(t) / denom_t;
    let big_v = fp.ln_p() * fp.psi() * vt / denom_t;
    if big_v == 0.0 || tau == 0.0 {
        return Ok(head);
    }
    let weight = |s: f64| inp.u.eval(s) / (1.0 - phi * inp.v.eval(s));
    let rule = GaussLegendre::ten();
    let beta = fp.beta();
    let ln_v = big_v.ln();
    let memory = |n: usize| -> f64 {
        let order = n as f64 * beta;
        let inv = 1.0 / order;
        let inner = rule
            .integrate_graded_toward_lo(0.0, 1.0, inp.panels, |x| {
                Ok::<_, std::convert::Infallible>(weight(t - tau * x.powf(inv)))
            })
            .unwrap_or(0.0);
        // log of τ^{nβ}/(nβ) · inner
        order * tau.ln() - order.ln() + inner.ln()
    };
    let tail = sum_log_series(
        1,
        |n| (n as f64 * ln_v - log_gamma_unchecked(n as f64 * beta) + memory(n), false),
        inp.tol,
        "Gronwall memory series",
    )?;
    Ok(head + tail)
}

/// Result of checking the contraction condition
/// `L (φ + ln p ψ (b-a)^β / Γ(β+1)) < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniquenessCertificate {
    pub lipschitz: f64,
    pub a: f64,
    pub b: f64,
    /// `φ + ln p ψ (b-a)^β / Γ(β+1)`.
    pub factor: f64,
    pub condition_value: f64,
    pub satisfied: bool,
    pub margin: f64,
}

pub fn uniqueness_certificate(lipschitz: f64, params: &FracParams, a: f64, b: f64) -> Result<UniquenessCertificate> {
    if !(lipschitz >= 0.0) || !lipschitz.is_finite() {
        return Err(Error::param("L", format!("must be a finite non-negative number, got {lipschitz}")));
    }
    if !(b > a) {
        return Err(Error::param("b", format!("must exceed a = {a}, got {b}")));
    }
    let factor = params.phi()
        + params.ln_p() * params.psi() * (b - a).powf(params.beta()) / gamma(params.beta() + 1.0);
    let condition_value = lipschitz * factor;
    Ok(UniquenessCertificate {
        lipschitz,
        a,
        b,
        factor,
        condition_value,
        satisfied: condition_value < 1.0,
        margin: 1.0 - condition_value,
    })
}

/// Sampled lower estimate of the Lipschitz constant of `f` in `y`:
/// the largest difference quotient over a `samples × samples` grid of
/// `(t, y)` points, taking every pair of `y` values at each `t`.
///
/// This is an estimate, never a proof.
pub fn estimate_lipschitz(
    f: impl Fn(f64, f64) -> f64,
    t_range: (f64, f64),
    y_range: (f64, f64),
    samples: usize,
) -> Result<f64> {
    if samples < 2 {
        return Err(Error::param("samples", "need at least 2 per axis"));
    }
    if !(t_range.1 >= t_range.0) || !(y_range.1 > y_range.0) {
        return Err(Error::param("y_range", "ranges must be non-degenerate"));
    }
    let axis = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (samples - 1) as f64;
    let ys: Vec<f64> = (0..samples).map(|i| axis(y_range.0, y_range.1, i)).collect();
    let mut best = 0.0_f64;
    let mut fy = vec![0.0; samples];
    for i in 0..samples {
        let t = axis(t_range.0, t_range.1, i);
        for (slot, &y) in fy.iter_mut().zip(&ys) {
            *slot = f(t, y);
        }
        for j in 0..samples {
            for k in j + 1..samples {
                let q = (fy[j] - fy[k]).abs() / (ys[k] - ys[j]);
                best = best.max(q);
            }
        }
    }
    Ok(best)
}

/// A-priori bound on the local remainder of the scheme at step `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RemainderBound {
    pub n: usize,
    pub h: f64,
    pub m2: f64,
    pub omega_at_tn: f64,
    pub bound: f64,
}

/// `|ln p| ψ h^{β+2} / (4 Γ(β+2) ω(t_n)) (n+1)(n+4+2β) |(n+1)^β - β n^β| M2`.
pub fn remainder_bound(
    params: &FracParams,
    omega: &ScalarFn,
    h: f64,
    n: usize,
    m2: f64,
    a: f64,
) -> Result<RemainderBound> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::param("h", format!("must be positive, got {h}")));
    }
    if !(m2 >= 0.0) || !m2.is_finite() {
        return Err(Error::param("M2", format!("must be non-negative, got {m2}")));
    }
    let tn = a + n as f64 * h;
    let w = omega.eval(tn);
    if !(w > 0.0) {
        return Err(Error::WeightNotPositive { t: tn, value: w });
    }
    let beta = params.beta();
    let nf = n as f64;
    let n_pow = if n == 0 { 0.0 } else { nf.powf(beta) };
    let shape = (nf + 1.0) * (nf + 4.0 + 2.0 * beta) * ((nf + 1.0).powf(beta) - beta * n_pow).abs();
    let bound = params.ln_p().abs() * params.psi() * h.powf(beta + 2.0) / (4.0 * gamma(beta + 2.0) * w) * shape * m2;
    Ok(RemainderBound { n, h, m2, omega_at_tn: w, bound })
}

/// `Σ_{n=0}^{n_steps-1}` of [`remainder_bound`].
pub fn remainder_bound_total(
    params: &FracParams,
    omega: &ScalarFn,
    h: f64,
    n_steps: usize,
    m2: f64,
    a: f64,
) -> Result<f64> {
    (0..n_steps).map(|n| remainder_bound(params, omega, h, n, m2, a).map(|r| r.bound)).sum()
}

/// Largest `|g''|` seen by second central differences on `samples` equally
/// spaced points of `[lo, hi]`.
pub fn estimate_m2(g: &ScalarFn, lo: f64, hi: f64, samples: usize) -> Result<f64> {
    if samples < 5 {
        return Err(Error::param("samples", "need at least 5"));
    }
    if !(hi > lo) {
        return Err(Error::param("interval", "must be non-degenerate"));
    }
    let d = (hi - lo) / (samples - 1) as f64;
    let vals: Vec<f64> = (0..samples).map(|i| g.eval(lo + d * i as f64)).collect();
    Ok(vals
        .windows(3)
        .map(|w| ((w[0] - 2.0 * w[1] + w[2]) / (d * d)).abs())
        .fold(0.0, f64::max))
}
