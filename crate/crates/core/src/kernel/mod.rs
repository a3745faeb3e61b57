//! Parameter bookkeeping and the power Mittag-Leffler function
//!
//! ```text
//! pE_{k,l}(s) = Σ_{n≥0} (s ln p)^n / Γ(kn + l)
//! ```

mod gamma;

use std::fmt;
use std::sync::Arc;

pub use self::gamma::{gamma, log_gamma, recip_gamma};
pub(crate) use self::gamma::log_gamma_unchecked;

use crate::error::{Error, Result};

/// Default truncation tolerance for Mittag-Leffler type series.
pub const DEFAULT_SERIES_TOL: f64 = 1e-14;
/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 1_000_000;

/// The normalization function `N(α)` entering `φ(α)` and `ψ(α)`.
#[derive(Clone, Default)]
pub enum Normalization {
    /// `N ≡ 1`.
    #[default]
    One,
    /// `N(α) = 1 - α + α / Γ(α)`.
    Paper,
    /// Any user function of `α` with `N(0) = 1`.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Normalization {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Normalization::Custom(Arc::new(f))
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        match self {
            Normalization::One => 1.0,
            // α/Γ(α) = α²/Γ(α+1), finite at α = 0
            Normalization::Paper => 1.0 - alpha + alpha * alpha * recip_gamma(alpha + 1.0),
            Normalization::Custom(f) => f(alpha),
        }
    }
}

impl fmt::Debug for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Normalization::One => f.write_str("One"),
            Normalization::Paper => f.write_str("Paper"),
            Normalization::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Fractional order `α`, kernel order `β`, power base `p` and normalization.
///
/// Immutable after construction; all derived quantities are cached.
#[derive(Clone, Debug)]
pub struct FracParams {
    alpha: f64,
    beta: f64,
    p: f64,
    normalization: Normalization,
    n_alpha: f64,
}

impl FracParams {
    pub fn new(alpha: f64, beta: f64, p: f64, normalization: Normalization) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::param("alpha", format!("must lie in [0, 1), got {alpha}")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::param("beta", format!("must be positive, got {beta}")));
        }
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::param("p", format!("must be positive, got {p}")));
        }
        let at_zero = normalization.eval(0.0);
        if (at_zero - 1.0).abs() > 1e-12 {
            return Err(Error::param("normalization", format!("N(0) must equal 1, got {at_zero}")));
        }
        let n_alpha = normalization.eval(alpha);
        if !(n_alpha > 0.0) || !n_alpha.is_finite() {
            return Err(Error::param(
                "normalization",
                format!("N(alpha) must be positive, got {n_alpha} at alpha = {alpha}"),
            ));
        }
        Ok(FracParams { alpha, beta, p, normalization, n_alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn ln_p(&self) -> f64 {
        self.p.ln()
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    /// `N(α)` at the configured order.
    pub fn n_alpha(&self) -> f64 {
        self.n_alpha
    }

    /// `φ(α) = (1 - α) / N(α)`.
    pub fn phi(&self) -> f64 {
        (1.0 - self.alpha) / self.n_alpha
    }

    /// `ψ(α) = α / N(α)`.
    pub fn psi(&self) -> f64 {
        self.alpha / self.n_alpha
    }

    /// `μ_α = α / (1 - α)`.
    pub fn mu(&self) -> f64 {
        self.alpha / (1.0 - self.alpha)
    }

    /// Kernel of the derivative, `pE_{β,1}(-μ_α u^β)` for a lag `u ≥ 0`.
    pub fn kernel(&self, lag: f64) -> Result<f64> {
        let s = -self.mu() * lag.powf(self.beta);
        power_mlf(&MlfQuery::new(self.beta, 1.0, self.p, s)?)
    }
}

/// Arguments of one power Mittag-Leffler evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MlfQuery {
    pub k: f64,
    pub l: f64,
    pub p: f64,
    pub s: f64,
    pub tol: f64,
}

impl MlfQuery {
    pub fn new(k: f64, l: f64, p: f64, s: f64) -> Result<Self> {
        Self::with_tol(k, l, p, s, DEFAULT_SERIES_TOL)
    }

    pub fn with_tol(k: f64, l: f64, p: f64, s: f64, tol: f64) -> Result<Self> {
        for (name, v) in [("k", k), ("l", l), ("p", p), ("tol", tol)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if !s.is_finite() {
            return Err(Error::param("s", "must be finite"));
        }
        Ok(MlfQuery { k, l, p, s, tol })
    }

    /// The series variable `s ln p`.
    pub fn z(&self) -> f64 {
        self.s * self.p.ln()
    }
}

/// Power Mittag-Leffler function `pE_{k,l}(s)` for real `s`.
///
/// Terms are formed in log space with sign tracking. Summation stops once
/// the term magnitudes are past their peak and the last term is below
/// `tol * max(1, |sum|)`. For `k = l = 1` and a negative argument the
/// alternating series is replaced by `exp(z)`, which it equals exactly.
pub fn power_mlf(q: &MlfQuery) -> Result<f64> {
    let z = q.z();
    if z == 0.0 {
        return Ok(recip_gamma(q.l));
    }
    if q.k == 1.0 && q.l == 1.0 && z < 0.0 {
        return Ok(z.exp());
    }
    let ln_abs_z = z.abs().ln();
    let negative = z < 0.0;
    sum_log_series(
        0,
        |n| {
            let nf = n as f64;
            (nf * ln_abs_z - log_gamma_unchecked(q.k * nf + q.l), negative && n % 2 == 1)
        },
        q.tol,
        "power Mittag-Leffler series",
    )
}

/// Sums `Σ_{n ≥ first} ± exp(log_mag(n))` whose log-magnitudes are concave in
/// `n` (true for every series of the form `x^n / Γ(kn + l)`).
pub(crate) fn sum_log_series(
    first: usize,
    term: impl Fn(usize) -> (f64, bool),
    tol: f64,
    what: &'static str,
) -> Result<f64> {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut prev_log = f64::NEG_INFINITY;
    for n in first..first + MAX_SERIES_TERMS {
        let (log_mag, negative) = term(n);
        let mag = log_mag.exp();
        if !mag.is_finite() {
            return Err(Error::NonConvergence { what, terms: n - first });
        }
        let value = if negative { -mag } else { mag };
        // Neumaier summation
        let t = sum + value;
        if sum.abs() >= value.abs() {
            comp += (sum - t) + value;
        } else {
            comp += (value - t) + sum;
        }
        sum = t;
        let decreasing = n > first && log_mag < prev_log;
        if (decreasing || log_mag == f64::NEG_INFINITY)
            && mag < tol * (sum + comp).abs().max(1.0)
        {
            return Ok(sum + comp);
        }
        prev_log = log_mag;
    }
    Err(Error::NonConvergence { what, terms: MAX_SERIES_TERMS })
}
