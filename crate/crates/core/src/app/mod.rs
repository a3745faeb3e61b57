//! Command-line front end: expression language, configuration, built-in
//! problems, CSV output and the `powfrac` commands.

pub mod commands;
pub mod config;
pub mod csv;
pub mod expr;
pub mod problems;

pub use commands::{run, AppError, Invocation};
pub use config::{validate, Command, MlfArgs, RawConfig, Task};
pub use expr::{parse_expr, Expr, ParseError};
pub use problems::{builtin_problem, BuiltinId};
