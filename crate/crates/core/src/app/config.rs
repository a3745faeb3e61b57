//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, lists are comma-separated.
//! Numeric keys accept constant expressions (`y0 = sqrt(pi)`, `L = 1/15`).
//! Every key present is parsed and every object the command needs is
//! constructed in [`validate`], so a bad configuration fails before any
//! numerical work starts.

use std::collections::BTreeMap;

use thiserror::Error;

use super::expr::{parse_expr, Env, Expr, ParseError, Var};
use super::problems::{builtin_problem, BuiltinId};
use crate::analysis::{estimate_m2, Coefficient, GronwallInput};
use crate::kernel::{FracParams, MlfQuery, Normalization};
use crate::operators::{Grid, ScalarFn};
use crate::solver::{Ivp, WeightAt};

/// Every key the configuration understands.
pub const KEYS: [&str; 26] = [
    "problem",
    "rhs",
    "omega",
    "exact",
    "y0",
    "a",
    "b",
    "alpha",
    "beta",
    "p",
    "normalization",
    "h",
    "h_list",
    "L",
    "y_min",
    "y_max",
    "samples",
    "kind",
    "lambda",
    "u",
    "v",
    "t",
    "n",
    "M2",
    "weight-at",
    "tol",
];

/// Keys a built-in problem fixes itself.
const BUILTIN_FIXED: [&str; 5] = ["rhs", "omega", "exact", "y0", "a"];

const DEFAULT_SAMPLES: usize = 64;
const M2_SAMPLES: usize = 1025;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{0}` given twice")]
    Duplicate(String),
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
    #[error("key `{key}`: {source}")]
    Expr {
        key: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Core(#[from] crate::Error),
}

fn invalid(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key, message: message.into() }
}

fn canonical(key: &str) -> Option<&'static str> {
    KEYS.iter().copied().find(|k| *k == key)
}

/// Unvalidated key/value pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawConfig {
    values: BTreeMap<&'static str, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RawConfig::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = split_assignment(content).map_err(|message| ConfigError::Syntax { line: line_no, message })?;
            let key = canonical(key).ok_or_else(|| ConfigError::UnknownKey(key.to_string()))?;
            if cfg.values.insert(key, value.to_string()).is_some() {
                return Err(ConfigError::Duplicate(key.to_string()));
            }
        }
        Ok(cfg)
    }

    /// Applies a `key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = split_assignment(assignment.trim()).map_err(|message| invalid("--set", message))?;
        let key = canonical(key).ok_or_else(|| ConfigError::UnknownKey(key.to_string()))?;
        self.values.insert(key, value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

fn split_assignment(s: &str) -> Result<(&str, &str), String> {
    let (key, value) = s.split_once('=').ok_or_else(|| format!("expected `key = value`, got `{s}`"))?;
    let (key, value) = (key.trim(), value.trim());
    if key.is_empty() {
        return Err("empty key".into());
    }
    if value.is_empty() {
        return Err(format!("empty value for `{key}`"));
    }
    Ok((key, value))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Solve,
    Converge,
    Check,
    Mlf,
    Bound,
}

/// Arguments of the `mlf` command that are not configuration keys.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MlfArgs {
    pub k: Option<f64>,
    pub l: Option<f64>,
    pub s: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub ivp: Ivp,
    pub exact: Option<ScalarFn>,
    /// Built-in id, or `None` for a problem given by expressions.
    pub builtin: Option<BuiltinId>,
}

#[derive(Clone, Debug)]
pub enum LipschitzSource {
    Given(f64),
    Estimate { y_min: f64, y_max: f64, samples: usize },
}

#[derive(Clone, Debug)]
pub enum Task {
    Solve {
        problem: Problem,
        params: FracParams,
        h: f64,
        weight_at: WeightAt,
    },
    Converge {
        problem: Problem,
        exact: ScalarFn,
        params: FracParams,
        h_list: Vec<f64>,
        weight_at: WeightAt,
    },
    Check {
        problem: Problem,
        params: FracParams,
        lipschitz: LipschitzSource,
    },
    Mlf(MlfQuery),
    Gronwall(GronwallInput),
    Remainder {
        params: FracParams,
        omega: ScalarFn,
        a: f64,
        h: f64,
        /// Single step, or every step of `[a, b]` when `None`.
        n: Option<usize>,
        n_steps: usize,
        m2: f64,
    },
}

/// Typed view of every key that is present.
#[derive(Default)]
struct Fields {
    problem: Option<String>,
    rhs: Option<Expr>,
    omega: Option<Expr>,
    exact: Option<Expr>,
    u: Option<Expr>,
    v: Option<Expr>,
    normalization: Option<Normalization>,
    nums: BTreeMap<&'static str, f64>,
    h_list: Option<Vec<f64>>,
    samples: Option<usize>,
    n: Option<usize>,
    kind: Option<BoundKind>,
    weight_at: WeightAt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BoundKind {
    Gronwall,
    Remainder,
}

const NUMERIC: [&str; 14] = [
    "y0", "a", "b", "alpha", "beta", "p", "h", "L", "y_min", "y_max", "lambda", "t", "M2", "tol",
];

fn expr_in(key: &'static str, src: &str, allowed: &[Var]) -> Result<Expr, ConfigError> {
    let e = parse_expr(src).map_err(|source| ConfigError::Expr { key, source })?;
    if let Some(v) = e.vars().into_iter().find(|v| !allowed.contains(v)) {
        let names: Vec<_> = allowed.iter().map(|v| v.name()).collect();
        return Err(invalid(
            key,
            format!("variable `{}` is not available here (allowed: {})", v.name(), if names.is_empty() { "none".into() } else { names.join(", ") }),
        ));
    }
    Ok(e)
}

fn number(key: &'static str, src: &str) -> Result<f64, ConfigError> {
    let x = expr_in(key, src, &[])?.eval(&Env::default());
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(key, format!("`{src}` is not a finite number")))
    }
}

fn count(key: &'static str, src: &str) -> Result<usize, ConfigError> {
    src.parse().map_err(|_| invalid(key, format!("expected a non-negative integer, got `{src}`")))
}

fn parse_fields(raw: &RawConfig) -> Result<Fields, ConfigError> {
    let mut f = Fields::default();
    for &key in &KEYS {
        let Some(src) = raw.get(key) else { continue };
        match key {
            "problem" => f.problem = Some(src.to_string()),
            "rhs" => f.rhs = Some(expr_in(key, src, &[Var::T, Var::Y])?),
            "omega" => f.omega = Some(expr_in(key, src, &[Var::T])?),
            "exact" => f.exact = Some(expr_in(key, src, &[Var::T])?),
            "u" => f.u = Some(expr_in(key, src, &[Var::T])?),
            "v" => f.v = Some(expr_in(key, src, &[Var::T])?),
            "normalization" => {
                f.normalization = Some(match src {
                    "one" => Normalization::One,
                    "paper" => Normalization::Paper,
                    _ => {
                        let e = expr_in(key, src, &[Var::Alpha])?;
                        Normalization::custom(move |alpha| e.eval(&Env { alpha, ..Env::default() }))
                    }
                })
            }
            "h_list" => {
                let list = src.split(',').map(|item| number(key, item.trim())).collect::<Result<Vec<_>, _>>()?;
                f.h_list = Some(list);
            }
            "samples" => f.samples = Some(count(key, src)?),
            "n" => f.n = Some(count(key, src)?),
            "kind" => {
                f.kind = Some(match src {
                    "gronwall" => BoundKind::Gronwall,
                    "remainder" => BoundKind::Remainder,
                    _ => return Err(invalid(key, format!("expected `gronwall` or `remainder`, got `{src}`"))),
                })
            }
            "weight-at" => {
                f.weight_at = match src {
                    "n" => WeightAt::Current,
                    "n+1" => WeightAt::Next,
                    _ => return Err(invalid(key, format!("expected `n` or `n+1`, got `{src}`"))),
                }
            }
            _ => {
                debug_assert!(NUMERIC.contains(&key));
                f.nums.insert(key, number(key, src)?);
            }
        }
    }
    Ok(f)
}

impl Fields {
    fn num(&self, key: &'static str) -> Option<f64> {
        self.nums.get(key).copied()
    }

    fn require(&self, key: &'static str) -> Result<f64, ConfigError> {
        self.num(key).ok_or(ConfigError::Missing(key))
    }

    fn params(&self) -> Result<FracParams, ConfigError> {
        let norm = self.normalization.clone().unwrap_or(Normalization::One);
        Ok(FracParams::new(self.require("alpha")?, self.require("beta")?, self.require("p")?, norm)?)
    }

    fn problem(&self, params: &FracParams) -> Result<Option<Problem>, ConfigError> {
        let id = match self.problem.as_deref() {
            None if self.rhs.is_none() => return Ok(None),
            None | Some("custom") => None,
            Some(name) => Some(name.parse::<BuiltinId>().map_err(|e| invalid("problem", e.to_string()))?),
        };
        if let Some(id) = id {
            let fixed = |key: &'static str| match key {
                "rhs" => self.rhs.is_some(),
                "omega" => self.omega.is_some(),
                "exact" => self.exact.is_some(),
                _ => self.num(key).is_some(),
            };
            if let Some(key) = BUILTIN_FIXED.into_iter().find(|&k| fixed(k)) {
                return Err(invalid("problem", format!("`{key}` cannot be overridden for built-in problem {id}; only `b` can")));
            }
            let (ivp, exact) = builtin_problem(id, params, self.num("b"))?;
            return Ok(Some(Problem { ivp, exact, builtin: Some(id) }));
        }
        let rhs = self.rhs.clone().ok_or(ConfigError::Missing("rhs"))?;
        let omega = match self.omega.clone() {
            Some(e) => ScalarFn::new(move |t| e.eval(&Env { t, ..Env::default() })),
            None => ScalarFn::constant(1.0),
        };
        let ivp = Ivp::new(
            move |t, y| rhs.eval(&Env { t, y, alpha: 0.0 }),
            omega,
            self.require("a")?,
            self.require("b")?,
            self.require("y0")?,
        )?;
        let exact = self.exact.clone().map(|e| ScalarFn::new(move |t| e.eval(&Env { t, ..Env::default() })));
        Ok(Some(Problem { ivp, exact, builtin: None }))
    }

    fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }
}

fn positive(key: &'static str, x: f64) -> Result<f64, ConfigError> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(invalid(key, format!("must be positive, got {x}")))
    }
}

/// Parses every key and builds everything `command` needs.
pub fn validate(raw: &RawConfig, command: Command, mlf: MlfArgs) -> Result<Task, ConfigError> {
    let f = parse_fields(raw)?;
    if command == Command::Mlf {
        let p = f.require("p")?;
        let (k, l, s) = (
            mlf.k.ok_or(ConfigError::Missing("k"))?,
            mlf.l.ok_or(ConfigError::Missing("l"))?,
            mlf.s.ok_or(ConfigError::Missing("s"))?,
        );
        let q = match f.num("tol") {
            Some(tol) => MlfQuery::with_tol(k, l, p, s, tol)?,
            None => MlfQuery::new(k, l, p, s)?,
        };
        return Ok(Task::Mlf(q));
    }

    let params = f.params()?;
    let problem = f.problem(&params)?;
    match command {
        Command::Mlf => unreachable!("handled above"),
        Command::Solve => {
            let problem = problem.ok_or(ConfigError::Missing("problem"))?;
            let h = f.require("h")?;
            Grid::over(problem.ivp.a, problem.ivp.b, h)?;
            Ok(Task::Solve { problem, params, h, weight_at: f.weight_at })
        }
        Command::Converge => {
            let problem = problem.ok_or(ConfigError::Missing("problem"))?;
            let h_list = f.h_list.clone().ok_or(ConfigError::Missing("h_list"))?;
            if h_list.windows(2).any(|w| !(w[1] < w[0])) {
                return Err(invalid("h_list", "must be strictly decreasing"));
            }
            for &h in &h_list {
                Grid::over(problem.ivp.a, problem.ivp.b, h)?;
            }
            let exact = problem
                .exact
                .clone()
                .ok_or_else(|| invalid("exact", "the convergence table needs an exact solution"))?;
            Ok(Task::Converge { problem, exact, params, h_list, weight_at: f.weight_at })
        }
        Command::Check => {
            let problem = problem.ok_or(ConfigError::Missing("problem"))?;
            let lipschitz = match f.num("L") {
                Some(l) if l >= 0.0 => LipschitzSource::Given(l),
                Some(l) => return Err(invalid("L", format!("must be non-negative, got {l}"))),
                None => {
                    let (y_min, y_max) = (f.require("y_min")?, f.require("y_max")?);
                    if !(y_max > y_min) {
                        return Err(invalid("y_max", "must exceed y_min"));
                    }
                    if f.samples() < 2 {
                        return Err(invalid("samples", "need at least 2"));
                    }
                    LipschitzSource::Estimate { y_min, y_max, samples: f.samples() }
                }
            };
            Ok(Task::Check { problem, params, lipschitz })
        }
        Command::Bound => match f.kind.ok_or(ConfigError::Missing("kind"))? {
            BoundKind::Gronwall => {
                if f.num("lambda").is_some() && f.v.is_some() {
                    return Err(invalid("v", "give either `lambda` or `v`, not both"));
                }
                let v = match (f.num("lambda"), f.v.clone()) {
                    (Some(l), _) => Coefficient::Constant(l),
                    (None, Some(e)) => Coefficient::Function(ScalarFn::new(move |t| e.eval(&Env { t, ..Env::default() }))),
                    (None, None) => return Err(ConfigError::Missing("lambda")),
                };
                let u = f.u.clone().ok_or(ConfigError::Missing("u"))?;
                let u = ScalarFn::new(move |t| u.eval(&Env { t, ..Env::default() }));
                let a = problem.as_ref().map_or(f.num("a").unwrap_or(0.0), |p| p.ivp.a);
                let t = f.require("t")?;
                if !(t >= a) {
                    return Err(invalid("t", format!("must be at least a = {a}")));
                }
                let mut input = GronwallInput::new(u, v, params, a, t);
                if let Some(tol) = f.num("tol") {
                    input.tol = positive("tol", tol)?;
                }
                Ok(Task::Gronwall(input))
            }
            BoundKind::Remainder => {
                let h = positive("h", f.require("h")?)?;
                let (omega, a) = match &problem {
                    Some(p) => (p.ivp.omega.clone(), p.ivp.a),
                    None => (
                        f.omega.clone().map_or(ScalarFn::constant(1.0), |e| {
                            ScalarFn::new(move |t| e.eval(&Env { t, ..Env::default() }))
                        }),
                        f.num("a").unwrap_or(0.0),
                    ),
                };
                let n_steps = match (&problem, f.n) {
                    (Some(p), _) => Grid::over(p.ivp.a, p.ivp.b, h)?.n_steps(),
                    (None, Some(n)) => n + 1,
                    (None, None) => return Err(ConfigError::Missing("n")),
                };
                let m2 = match (f.num("M2"), &problem) {
                    (Some(m2), _) if m2 >= 0.0 => m2,
                    (Some(m2), _) => return Err(invalid("M2", format!("must be non-negative, got {m2}"))),
                    (None, Some(Problem { ivp, exact: Some(exact), .. })) => {
                        // |(ωf)''| along the exact solution
                        let (lo, hi) = (ivp.a, ivp.b);
                        let (ivp, exact) = (ivp.clone(), exact.clone());
                        let g = ScalarFn::new(move |t| ivp.omega.eval(t) * ivp.f(t, exact.eval(t)));
                        estimate_m2(&g, lo, hi, f.samples().max(M2_SAMPLES))?
                    }
                    (None, _) => return Err(invalid("M2", "required unless the problem has an exact solution")),
                };
                Ok(Task::Remainder { params, omega, a, h, n: f.n, n_steps, m2 })
            }
        },
    }
}
