//! Explicit two-step Lagrange product-integration scheme.
//!
//! ```text
//! y_{n+1} = ω(a)/ω(t_n) y_0 + φ f(t_n, y_n)
//!         + ln p ψ h^β / (Γ(β+2) ω(t_n))
//!           Σ_{k=1}^{n} [ω(t_{k-1}) f_{k-1} A_{n-k} + ω(t_k) f_k B_{n-k}]
//! ```
//!
//! with `A_m = m^β (m+1+β) - (m+1)^{β+1}` and
//! `B_m = (m+1)^β (m+2+β) - m^β (m+2+2β)`. The history sum starts at
//! `k = 1`; the first subinterval is only represented through the standing
//! assumption `f(a, y_0) = 0`.

use std::fmt;
use std::sync::Arc;

use log::warn;

use crate::error::{Error, Result};
use crate::kernel::{gamma, FracParams};
use crate::operators::{sample_weight, Grid, ScalarFn, Trajectory};

/// Right-hand side `f(t, y)`.
pub type Rhs = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `pD^{α,β,p}_{a,t,ω} y = f(t, y)` on `[a, b]` with `y(a) = y0`.
#[derive(Clone)]
pub struct Ivp {
    pub rhs: Rhs,
    pub omega: ScalarFn,
    pub a: f64,
    pub b: f64,
    pub y0: f64,
}

impl Ivp {
    pub fn new(
        rhs: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        omega: ScalarFn,
        a: f64,
        b: f64,
        y0: f64,
    ) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || !(b > a) {
            return Err(Error::param("b", format!("need finite a < b, got [{a}, {b}]")));
        }
        if !y0.is_finite() {
            return Err(Error::param("y0", "must be finite"));
        }
        Ok(Ivp { rhs: Arc::new(rhs), omega, a, b, y0 })
    }

    #[inline]
    pub fn f(&self, t: f64, y: f64) -> f64 {
        (self.rhs)(t, y)
    }

    /// Whether `|f(a, y0)| ≤ 1e-12`, the compatibility condition the scheme
    /// relies on.
    pub fn start_is_compatible(&self) -> bool {
        self.f(self.a, self.y0).abs() <= 1e-12
    }
}

impl fmt::Debug for Ivp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ivp")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("y0", &self.y0)
            .finish_non_exhaustive()
    }
}

/// Node at which the weight prefactors `ω(a)/ω(·)` and `1/ω(·)` are taken
/// when advancing to `t_{n+1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WeightAt {
    /// `ω(t_n)`, as the scheme is usually written.
    #[default]
    Current,
    /// `ω(t_{n+1})`.
    Next,
}

#[inline]
fn pow_beta(m: f64, beta: f64) -> f64 {
    if m == 0.0 {
        0.0
    } else {
        m.powf(beta)
    }
}

/// `A^β` at lag `m = n - k`.
pub fn coeff_a(m: usize, beta: f64) -> f64 {
    let mf = m as f64;
    pow_beta(mf, beta) * (mf + 1.0 + beta) - pow_beta(mf + 1.0, beta + 1.0)
}

/// `B^β` at lag `m = n - k`.
pub fn coeff_b(m: usize, beta: f64) -> f64 {
    let mf = m as f64;
    pow_beta(mf + 1.0, beta) * (mf + 2.0 + beta) - pow_beta(mf, beta) * (mf + 2.0 + 2.0 * beta)
}

/// Lag-indexed tables of the scheme coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeCoeffs {
    pub beta: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl SchemeCoeffs {
    pub fn new(beta: f64, len: usize) -> Self {
        SchemeCoeffs {
            beta,
            a: (0..len).map(|m| coeff_a(m, beta)).collect(),
            b: (0..len).map(|m| coeff_b(m, beta)).collect(),
        }
    }
}

/// Integrates `ivp` with step `h` using the default weight placement.
pub fn solve(ivp: &Ivp, params: &FracParams, h: f64) -> Result<Trajectory> {
    solve_with(ivp, params, h, WeightAt::Current)
}

pub fn solve_with(ivp: &Ivp, params: &FracParams, h: f64, weight_at: WeightAt) -> Result<Trajectory> {
    let grid = Grid::over(ivp.a, ivp.b, h)?;
    let w = sample_weight(&ivp.omega, &grid)?;
    if !ivp.start_is_compatible() {
        warn!(
            "f(a, y0) = {} is not zero; the scheme drops the first history interval",
            ivp.f(ivp.a, ivp.y0)
        );
    }
    let n_steps = grid.n_steps();
    let beta = params.beta();
    let coeffs = SchemeCoeffs::new(beta, n_steps);
    let phi = params.phi();
    let hist_scale = params.ln_p() * params.psi() * h.powf(beta) / gamma(beta + 2.0);

    let mut y = Vec::with_capacity(n_steps + 1);
    // g_k = ω(t_k) f(t_k, y_k)
    let mut g = Vec::with_capacity(n_steps + 1);
    let mut f_last;
    y.push(ivp.y0);
    {
        let f0 = ivp.f(grid.node(0), ivp.y0);
        g.push(w[0] * f0);
        f_last = f0;
    }
    for n in 0..n_steps {
        let wn = match weight_at {
            WeightAt::Current => w[n],
            WeightAt::Next => w[n + 1],
        };
        let mut hist = 0.0;
        for k in 1..=n {
            let m = n - k;
            hist += g[k - 1] * coeffs.a[m] + g[k] * coeffs.b[m];
        }
        let next = w[0] / wn * ivp.y0 + phi * f_last + hist_scale / wn * hist;
        let t_next = grid.node(n + 1);
        if !next.is_finite() {
            return Err(Error::NonFinite { step: n + 1, t: t_next });
        }
        y.push(next);
        let f_next = ivp.f(t_next, next);
        g.push(w[n + 1] * f_next);
        f_last = f_next;
    }
    Ok(Trajectory::new(grid, y))
}

/// One row of a convergence table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub max_error: f64,
    /// `log(e_{i-1}/e_i) / log(h_{i-1}/h_i)`; `None` on the first row.
    pub observed_order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

/// Solves for every step in `h_list` (strictly decreasing) and tabulates the
/// max error, against `exact` when given or else against the finest run on
/// the nodes it shares with each coarser grid.
pub fn convergence_study(
    ivp: &Ivp,
    params: &FracParams,
    exact: Option<&ScalarFn>,
    h_list: &[f64],
    weight_at: WeightAt,
) -> Result<ConvergenceReport> {
    if h_list.is_empty() {
        return Err(Error::param("h_list", "must not be empty"));
    }
    if h_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::param("h_list", "must be strictly decreasing"));
    }
    let runs: Vec<Result<Trajectory>> = std::thread::scope(|scope| {
        let handles: Vec<_> = h_list
            .iter()
            .map(|&h| scope.spawn(move || solve_with(ivp, params, h, weight_at)))
            .collect();
        handles.into_iter().map(|hd| hd.join().expect("solver thread panicked")).collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    let errors: Vec<f64> = match exact {
        Some(ex) => runs.iter().map(|tr| tr.clone().with_exact(ex).max_error().unwrap_or(0.0)).collect(),
        None => {
            let reference = runs.last().expect("non-empty");
            let h_ref = reference.grid.h();
            runs.iter()
                .map(|tr| {
                    let stride = (tr.grid.h() / h_ref).round();
                    if (tr.grid.h() / h_ref - stride).abs() > 1e-9 * stride {
                        return Err(Error::param(
                            "h_list",
                            "each step must be an integer multiple of the finest step",
                        ));
                    }
                    let stride = stride as usize;
                    Ok(tr
                        .values
                        .iter()
                        .enumerate()
                        .map(|(k, v)| (v - reference.values[k * stride]).abs())
                        .fold(0.0, f64::max))
                })
                .collect::<Result<_>>()?
        }
    };

    let rows = h_list
        .iter()
        .zip(&errors)
        .enumerate()
        .map(|(i, (&h, &e))| ConvergenceRow {
            h,
            max_error: e,
            observed_order: (i > 0).then(|| (errors[i - 1] / e).ln() / (h_list[i - 1] / h).ln()),
        })
        .collect();
    Ok(ConvergenceReport { rows })
}
