//! Gauss-Legendre rules and graded composite quadrature.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// An `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub(crate) struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Chebyshev-like initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared 10-point rule.
    pub fn ten() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(10))
    }

    pub fn integrate<E>(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> Result<f64, E>) -> Result<f64, E> {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(acc * half)
    }

    /// Composite rule over panels whose widths shrink geometrically (ratio
    /// 1/2) toward `lo`. The innermost panel `[lo, lo + (hi-lo) 2^-panels]`
    /// is integrated with the same rule.
    pub fn integrate_graded_toward_lo<E>(
        &self,
        lo: f64,
        hi: f64,
        panels: usize,
        mut f: impl FnMut(f64) -> Result<f64, E>,
    ) -> Result<f64, E> {
        let width = hi - lo;
        let mut acc = 0.0;
        let mut right = 1.0_f64;
        for _ in 0..panels {
            let left = 0.5 * right;
            acc += self.integrate(lo + width * left, lo + width * right, &mut f)?;
            right = left;
        }
        acc += self.integrate(lo, lo + width * right, &mut f)?;
        Ok(acc)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
