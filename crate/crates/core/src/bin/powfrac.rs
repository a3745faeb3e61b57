use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use powfrac::app::{run, Command, Invocation, MlfArgs};

const CONFIG_HELP: &str = "\
Configuration keys (flat `key = value` lines, `#` comments, comma-separated lists):
  problem        example1 | example2 | custom (custom needs rhs, y0, a, b)
  rhs            f(t, y) as an expression in t and y
  omega          weight w(t) > 0, expression in t (default 1)
  exact          exact solution, expression in t
  y0, a, b       initial value and interval; built-in problems only take b
  alpha, beta, p fractional parameters
  normalization  one | paper | expression in alpha (default one)
  h              step (solve, bound kind=remainder)
  h_list         strictly decreasing steps (converge)
  L              Lipschitz constant (check); else estimated from y_min, y_max, samples
  y_min, y_max, samples
  kind           gronwall | remainder (bound)
  lambda, u, v, t  Gronwall data: constant lambda or function v(t), u(t), evaluation time t
  n, M2          remainder step index and bound on |(w f)''|
  weight-at      n | n+1, node of the weight prefactors in the scheme (default n)
  tol            series tolerance (mlf, bound)

Exit status: 0 success, 2 configuration or input error, 3 numerical failure.";

#[derive(Parser)]
#[command(name = "powfrac", version, about = "Power fractional calculus toolkit", after_help = CONFIG_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Configuration file
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override a configuration key, `key=value`; repeatable
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output file (default: standard output)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one initial value problem and write `t,y[,exact,error]` CSV
    Solve(Common),
    /// Max-error table over `h_list`
    Converge(Common),
    /// Contraction (uniqueness) certificate
    Check(Common),
    /// Evaluate the power Mittag-Leffler function; `p` comes from the config
    Mlf {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        l: f64,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Gronwall or remainder bound, per `kind`
    Bound(Common),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, common, mlf) = match cli.command {
        Cmd::Solve(c) => (Command::Solve, c, MlfArgs::default()),
        Cmd::Converge(c) => (Command::Converge, c, MlfArgs::default()),
        Cmd::Check(c) => (Command::Check, c, MlfArgs::default()),
        Cmd::Bound(c) => (Command::Bound, c, MlfArgs::default()),
        Cmd::Mlf { k, l, s, common } => (Command::Mlf, common, MlfArgs { k: Some(k), l: Some(l), s: Some(s) }),
    };
    let inv = Invocation { command, config: common.config, sets: common.sets, mlf, out: common.out };
    match run(&inv, &mut io::stdout().lock(), &mut io::stderr().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("powfrac: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
