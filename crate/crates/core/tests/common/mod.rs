//! Reference implementations shared by the integration tests. None of them
//! call into the crate's numerics.

#![allow(dead_code)]

use rand::Rng;
use statrs::function::gamma::ln_gamma;

use powfrac::app::expr::{BinOp, Constant, Expr, Func, Var};

/// `Σ_{n<terms} z^n / Γ(kn + l)` with Kahan summation and statrs' log-gamma.
pub fn mlf_brute(k: f64, l: f64, z: f64, terms: usize) -> f64 {
    let mut sum = 0.0_f64;
    let mut c = 0.0_f64;
    for n in 0..terms {
        let nf = n as f64;
        let mag = if n == 0 { 0.0 } else { nf * z.abs().ln() };
        let term = (mag - ln_gamma(k * nf + l)).exp();
        let term = if z < 0.0 && n % 2 == 1 { -term } else { term };
        let y = term - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `1 + Σ_{1≤n<terms} x^n τ^{nβ} / Γ(nβ)` for `x, τ > 0`.
pub fn gronwall_series_brute(x: f64, tau: f64, beta: f64, terms: usize) -> f64 {
    let mut sum = 1.0;
    for n in 1..terms {
        let nf = n as f64;
        let log_term = nf * x.ln() + nf * beta * tau.ln() - ln_gamma(nf * beta);
        sum += log_term.exp();
    }
    sum
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 40)
}

/// Random expression tree of at most `depth` levels.
pub fn random_expr(rng: &mut impl Rng, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..6) {
            0 => Expr::Var(Var::T),
            1 => Expr::Var(Var::Y),
            2 => Expr::Var(Var::Alpha),
            3 => Expr::Const(if rng.gen_bool(0.5) { Constant::Pi } else { Constant::E }),
            4 => Expr::Num(rng.gen_range(0..100) as f64),
            _ => Expr::Num(rng.gen::<f64>() * 10f64.powi(rng.gen_range(-20..20))),
        };
    }
    let sub = |rng: &mut _| Box::new(random_expr(rng, depth - 1));
    match rng.gen_range(0..7) {
        0 => Expr::Neg(sub(rng)),
        1 => {
            const FUNCS: [Func; 8] =
                [Func::Sin, Func::Cos, Func::Tan, Func::Exp, Func::Ln, Func::Sqrt, Func::Abs, Func::Gamma];
            Expr::Call(FUNCS[rng.gen_range(0..FUNCS.len())], sub(rng))
        }
        _ => {
            const OPS: [BinOp; 5] = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow];
            let op = OPS[rng.gen_range(0..OPS.len())];
            let l = sub(rng);
            Expr::Binary(op, l, sub(rng))
        }
    }
}
