//! A small expression language for right-hand sides, weights and
//! normalizations.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-t^2` is `-(t^2)`; its right
//! operand may itself carry a sign (`2^-t`).

use std::fmt;

use thiserror::Error;

use crate::kernel::gamma;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    Y,
    Alpha,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::Y => "y",
            Var::Alpha => "alpha",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Abs,
    Gamma,
}

impl Func {
    const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Abs,
        Func::Gamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Gamma => "gamma",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
            Func::Gamma => gamma(x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    // (left, right) binding power; right > left means left-associative
    fn binding_power(self) -> (u8, u8) {
        match self {
            BinOp::Add | BinOp::Sub => (1, 2),
            BinOp::Mul | BinOp::Div => (3, 4),
            BinOp::Pow => (8, 7),
        }
    }
}

const PREFIX_MINUS_BP: u8 = 5;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Const(Constant),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Values bound to the free variables during evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Env {
    pub t: f64,
    pub y: f64,
    pub alpha: f64,
}

impl Expr {
    pub fn eval(&self, env: &Env) -> f64 {
        match self {
            Expr::Num(x) => *x,
            Expr::Var(Var::T) => env.t,
            Expr::Var(Var::Y) => env.y,
            Expr::Var(Var::Alpha) => env.alpha,
            Expr::Const(Constant::Pi) => std::f64::consts::PI,
            Expr::Const(Constant::E) => std::f64::consts::E,
            Expr::Neg(e) => -e.eval(env),
            Expr::Binary(op, l, r) => {
                let (l, r) = (l.eval(env), r.eval(env));
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => l / r,
                    BinOp::Pow => l.powf(r),
                }
            }
            Expr::Call(f, arg) => f.apply(arg.eval(env)),
        }
    }

    /// Free variables, sorted and deduplicated.
    pub fn vars(&self) -> Vec<Var> {
        fn walk(e: &Expr, out: &mut Vec<Var>) {
            match e {
                Expr::Var(v) => out.push(*v),
                Expr::Num(_) | Expr::Const(_) => {}
                Expr::Neg(x) | Expr::Call(_, x) => walk(x, out),
                Expr::Binary(_, l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

/// Fully parenthesized form; parsing it gives back the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x:?}"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Const(Constant::Pi) => f.write_str("pi"),
            Expr::Const(Constant::E) => f.write_str("e"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based, counted in characters.
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(BinOp),
    LParen,
    RParen,
    End,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
}

impl Lexer {
    fn err<T>(column: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column, message: message.into() })
    }

    /// Next token and its 1-based column.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
        let col = self.pos + 1;
        let Some(&c) = self.chars.get(self.pos) else {
            return Ok((Tok::End, col));
        };
        let single = match c {
            '+' => Some(Tok::Op(BinOp::Add)),
            '-' => Some(Tok::Op(BinOp::Sub)),
            '*' => Some(Tok::Op(BinOp::Mul)),
            '/' => Some(Tok::Op(BinOp::Div)),
            '^' => Some(Tok::Op(BinOp::Pow)),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            self.pos += 1;
            return Ok((tok, col));
        }
        if c.is_ascii_digit() || c == '.' {
            return self.number(col);
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = self.pos;
            while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_') {
                self.pos += 1;
            }
            let ident: String = self.chars[start..self.pos].iter().collect();
            return Ok((Tok::Ident(ident), col));
        }
        Self::err(col, format!("unexpected character '{c}'"))
    }

    fn number(&mut self, col: usize) -> Result<(Tok, usize), ParseError> {
        let start = self.pos;
        let digits = |lx: &mut Lexer| {
            while lx.pos < lx.chars.len() && lx.chars[lx.pos].is_ascii_digit() {
                lx.pos += 1;
            }
        };
        digits(self);
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            digits(self);
        }
        // an exponent only when digits follow, so `2e` stays `2` then `e`
        if matches!(self.chars.get(self.pos), Some('e' | 'E')) {
            let mut look = self.pos + 1;
            if matches!(self.chars.get(look), Some('+' | '-')) {
                look += 1;
            }
            if self.chars.get(look).is_some_and(|c| c.is_ascii_digit()) {
                self.pos = look;
                digits(self);
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok((Tok::Num(x), col)),
            Ok(_) => Self::err(col, format!("number '{text}' is out of range")),
            Err(_) => Self::err(col, format!("malformed number '{text}'")),
        }
    }
}

struct Parser {
    lexer: Lexer,
    peeked: Option<(Tok, usize)>,
}

impl Parser {
    fn peek(&mut self) -> Result<&(Tok, usize), ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next()?);
        }
        Ok(self.peeked.as_ref().expect("just filled"))
    }

    fn bump(&mut self) -> Result<(Tok, usize), ParseError> {
        self.peek()?;
        Ok(self.peeked.take().expect("just filled"))
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.prefix()?;
        while let (Tok::Op(op), _) = self.peek()? {
            let op = *op;
            let (l_bp, r_bp) = op.binding_power();
            if l_bp < min_bp {
                break;
            }
            self.bump()?;
            let rhs = self.expr(r_bp)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr, ParseError> {
        let (tok, col) = self.bump()?;
        match tok {
            Tok::Num(x) => Ok(Expr::Num(x)),
            Tok::Op(BinOp::Sub) => Ok(Expr::Neg(Box::new(self.expr(PREFIX_MINUS_BP)?))),
            Tok::LParen => {
                let inner = self.expr(0)?;
                self.close(col)?;
                Ok(inner)
            }
            Tok::Ident(name) => self.ident(name, col),
            Tok::End => Lexer::err(col, "expected an operand, found end of input"),
            Tok::RParen => Lexer::err(col, "unexpected ')'"),
            Tok::Op(op) => Lexer::err(col, format!("unexpected operator '{}'", op.symbol())),
        }
    }

    fn ident(&mut self, name: String, col: usize) -> Result<Expr, ParseError> {
        let simple = match name.as_str() {
            "t" => Some(Expr::Var(Var::T)),
            "y" => Some(Expr::Var(Var::Y)),
            "alpha" => Some(Expr::Var(Var::Alpha)),
            "pi" => Some(Expr::Const(Constant::Pi)),
            "e" => Some(Expr::Const(Constant::E)),
            _ => None,
        };
        if let Some(e) = simple {
            return Ok(e);
        }
        let Some(func) = Func::ALL.into_iter().find(|f| f.name() == name) else {
            return Lexer::err(col, format!("unknown identifier '{name}'"));
        };
        match self.bump()? {
            (Tok::LParen, open) => {
                let arg = self.expr(0)?;
                self.close(open)?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            (_, at) => Lexer::err(at, format!("expected '(' after '{name}'")),
        }
    }

    fn close(&mut self, open: usize) -> Result<(), ParseError> {
        match self.bump()? {
            (Tok::RParen, _) => Ok(()),
            (Tok::End, at) => Lexer::err(at, format!("unbalanced parentheses: '(' at column {open} is never closed")),
            (_, at) => Lexer::err(at, "expected ')'"),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser { lexer: Lexer { chars: src.chars().collect(), pos: 0 }, peeked: None };
    if parser.peek()?.0 == Tok::End {
        return Lexer::err(1, "empty expression");
    }
    let expr = parser.expr(0)?;
    match parser.bump()? {
        (Tok::End, _) => Ok(expr),
        (Tok::RParen, at) => Lexer::err(at, "unbalanced parentheses: unexpected ')'"),
        (_, at) => Lexer::err(at, "unexpected trailing input"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_at(src: &str, t: f64, y: f64) -> f64 {
        parse_expr(src).unwrap().eval(&Env { t, y, alpha: 0.0 })
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(eval_at("2+3*t", 2.0, 0.0), 8.0);
        assert_eq!(eval_at("-2^2", 0.0, 0.0), -4.0);
        assert_eq!(eval_at("2^3^2", 0.0, 0.0), 512.0);
        assert_eq!(eval_at("8/4/2", 0.0, 0.0), 1.0);
        assert_eq!(eval_at("1-2-3", 0.0, 0.0), -4.0);
        assert_eq!(eval_at("2^-1", 0.0, 0.0), 0.5);
        assert_eq!(eval_at("2*e", 0.0, 0.0), 2.0 * std::f64::consts::E);
        assert_eq!(parse_expr("2e").unwrap_err().column, 2);
        assert_eq!(eval_at("1.5e2", 0.0, 0.0), 150.0);
    }

    #[test]
    fn example_rhs_vanishes_at_start() {
        let v = eval_at("t^2/15 * cos(2*t)/(1+abs(y))", 0.0, std::f64::consts::PI.sqrt());
        assert_eq!(v, 0.0);
    }

    #[test]
    fn error_columns() {
        assert_eq!(parse_expr("(t").unwrap_err().column, 3);
        assert_eq!(parse_expr("").unwrap_err().column, 1);
        assert_eq!(parse_expr("   ").unwrap_err().column, 1);
        let e = parse_expr("t + foo").unwrap_err();
        assert_eq!(e.column, 5);
        assert!(e.message.contains("unknown identifier"));
        assert_eq!(parse_expr("t)").unwrap_err().column, 2);
        assert_eq!(parse_expr("sin t").unwrap_err().column, 5);
        assert_eq!(parse_expr("2 * * 3").unwrap_err().column, 5);
        assert_eq!(parse_expr("t # 1").unwrap_err().column, 3);
    }

    #[test]
    fn printed_form_reparses() {
        for src in ["-t^2", "2^-1^2", "sin(t)*-y", "gamma(alpha+1)/e - pi", "1e-300 + 3"] {
            let ast = parse_expr(src).unwrap();
            assert_eq!(parse_expr(&ast.to_string()).unwrap(), ast, "{src} -> {ast}");
        }
    }

    #[test]
    fn free_variables() {
        assert_eq!(parse_expr("t*y + t").unwrap().vars(), vec![Var::T, Var::Y]);
        assert!(parse_expr("sqrt(pi)").unwrap().vars().is_empty());
    }
}
