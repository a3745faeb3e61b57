//! The `solve`, `converge`, `check`, `mlf` and `bound` commands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use thiserror::Error;

use super::config::{validate, Command, ConfigError, LipschitzSource, MlfArgs, RawConfig, Task};
use super::csv::{fmt_f64, write_convergence, write_trajectory};
use crate::analysis::{
    estimate_lipschitz, gronwall_bound_constant, gronwall_bound_series, remainder_bound, remainder_bound_total,
    uniqueness_certificate, Coefficient,
};
use crate::kernel::power_mlf;
use crate::solver::{convergence_study, solve_with};

/// One parsed command line.
#[derive(Clone, Debug)]
pub struct Invocation {
    pub command: Command,
    pub config: Option<PathBuf>,
    pub sets: Vec<String>,
    pub mlf: MlfArgs,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("cannot read {}: {source}", path.display())]
    ReadConfig { path: PathBuf, source: io::Error },
    #[error("cannot open {} for writing: {source}", path.display())]
    OpenOutput { path: PathBuf, source: io::Error },
    #[error("write failed: {0}")]
    Write(#[from] io::Error),
    #[error("numerical failure: {0}")]
    Numerical(#[from] crate::Error),
}

impl AppError {
    /// 2 for anything wrong with the inputs or files, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Numerical(_) => 3,
            _ => 2,
        }
    }
}

/// Validates the invocation, then runs it. Results go to `--out` or
/// `stdout`; human-readable summaries go to `stderr`.
pub fn run(inv: &Invocation, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), AppError> {
    let mut raw = match &inv.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| AppError::ReadConfig { path: path.clone(), source })?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    for s in &inv.sets {
        raw.set(s)?;
    }
    let task = validate(&raw, inv.command, inv.mlf)?;

    let mut file;
    let out: &mut dyn Write = match &inv.out {
        Some(path) => {
            let f = File::create(path).map_err(|source| AppError::OpenOutput { path: path.clone(), source })?;
            file = BufWriter::new(f);
            &mut file
        }
        None => stdout,
    };
    execute(task, out, stderr)?;
    out.flush()?;
    Ok(())
}

fn execute(task: Task, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), AppError> {
    match task {
        Task::Solve { problem, params, h, weight_at } => {
            let mut tr = solve_with(&problem.ivp, &params, h, weight_at)?;
            if let Some(exact) = &problem.exact {
                tr = tr.with_exact(exact);
            }
            write_trajectory(out, &tr)?;
            let name = problem.builtin.map_or("custom", |id| id.name());
            match tr.max_error() {
                Some(e) => writeln!(log, "{name}: h = {h}, {} steps, max error = {e:.4e}", tr.grid.n_steps())?,
                None => writeln!(
                    log,
                    "{name}: h = {h}, {} steps, y(b) = {}",
                    tr.grid.n_steps(),
                    fmt_f64(*tr.values.last().expect("grid has nodes"))
                )?,
            }
        }
        Task::Converge { problem, exact, params, h_list, weight_at } => {
            let report = convergence_study(&problem.ivp, &params, Some(&exact), &h_list, weight_at)?;
            write_convergence(out, &report)?;
            for row in &report.rows {
                match row.observed_order {
                    Some(q) => writeln!(log, "h = {:<8} max error = {:.4e}  order = {q:.3}", row.h, row.max_error)?,
                    None => writeln!(log, "h = {:<8} max error = {:.4e}", row.h, row.max_error)?,
                }
            }
        }
        Task::Check { problem, params, lipschitz } => {
            let ivp = &problem.ivp;
            let (l, source) = match lipschitz {
                LipschitzSource::Given(l) => (l, "given"),
                LipschitzSource::Estimate { y_min, y_max, samples } => (
                    estimate_lipschitz(|t, y| ivp.f(t, y), (ivp.a, ivp.b), (y_min, y_max), samples)?,
                    "estimated",
                ),
            };
            let cert = uniqueness_certificate(l, &params, ivp.a, ivp.b)?;
            writeln!(out, "lipschitz = {}", fmt_f64(cert.lipschitz))?;
            writeln!(out, "lipschitz_source = {source}")?;
            writeln!(out, "interval = [{}, {}]", cert.a, cert.b)?;
            writeln!(out, "factor = {}", fmt_f64(cert.factor))?;
            writeln!(out, "condition = {}", fmt_f64(cert.condition_value))?;
            writeln!(out, "margin = {}", fmt_f64(cert.margin))?;
            writeln!(out, "satisfied = {}", cert.satisfied)?;
        }
        Task::Mlf(q) => {
            writeln!(out, "{}", fmt_f64(power_mlf(&q)?))?;
        }
        Task::Gronwall(input) => {
            let bound = match input.v {
                Coefficient::Constant(_) => gronwall_bound_constant(&input)?,
                Coefficient::Function(_) => gronwall_bound_series(&input)?,
            };
            writeln!(out, "kind = gronwall")?;
            writeln!(out, "t = {}", input.t)?;
            writeln!(out, "bound = {}", fmt_f64(bound))?;
        }
        Task::Remainder { params, omega, a, h, n, n_steps, m2 } => {
            writeln!(out, "kind = remainder")?;
            writeln!(out, "M2 = {}", fmt_f64(m2))?;
            match n {
                Some(n) => {
                    let r = remainder_bound(&params, &omega, h, n, m2, a)?;
                    writeln!(out, "n = {n}")?;
                    writeln!(out, "bound = {}", fmt_f64(r.bound))?;
                }
                None => {
                    let total = remainder_bound_total(&params, &omega, h, n_steps, m2, a)?;
                    writeln!(out, "steps = {n_steps}")?;
                    writeln!(out, "bound_total = {}", fmt_f64(total))?;
                }
            }
        }
    }
    Ok(())
}
