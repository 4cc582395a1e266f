//! The ODE expression language.
//!
//! Expressions are built from numbers, `x`, `u`, `diff(u, k)`, the
//! constants `pi` and `e`, the operators `+ - * / ^` and a fixed set of
//! elementary functions. `u` is shorthand for `diff(u, 0)`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := base ('^' unary)?
//! base   := number | 'x' | 'u' | 'pi' | 'e'
//!         | fn '(' expr ')'
//!         | 'diff' '(' 'u' (',' int)? ')'
//!         | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! is `-(x^2)` and `2^-1` is `0.5`. Function names may carry a `math.`
//! prefix, which is ignored.

mod linear;
mod parser;

use std::fmt;

use thiserror::Error;

pub use linear::{classify, extract_lhs_terms, Classification, LhsTerm};
pub use parser::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Tan,
    Log,
    Sqrt,
    Abs,
    Sinh,
    Cosh,
    Tanh,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Exp,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, v: f64) -> Result<f64, &'static str> {
        match self {
            Func::Log if v <= 0.0 => Err("log of non-positive value"),
            Func::Sqrt if v < 0.0 => Err("sqrt of negative value"),
            Func::Exp => Ok(v.exp()),
            Func::Sin => Ok(v.sin()),
            Func::Cos => Ok(v.cos()),
            Func::Tan => Ok(v.tan()),
            Func::Log => Ok(v.ln()),
            Func::Sqrt => Ok(v.sqrt()),
            Func::Abs => Ok(v.abs()),
            Func::Sinh => Ok(v.sinh()),
            Func::Cosh => Ok(v.cosh()),
            Func::Tanh => Ok(v.tanh()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    X,
    /// `diff(u, k)`; order 0 is `u` itself.
    Diff(u32),
    Const(Constant),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("expression depends on diff(u,{order}) but no value was supplied (x = {x})")]
    MissingU { order: u32, x: f64 },
    #[error("{what} at x = {x}")]
    Domain { what: &'static str, x: f64 },
    #[error("non-finite result at x = {x}")]
    NonFinite { x: f64 },
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn negation(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    /// Highest derivative order mentioned, or `None` when `u` does not appear.
    pub fn max_diff_order(&self) -> Option<u32> {
        match self {
            Expr::Number(_) | Expr::X | Expr::Const(_) => None,
            Expr::Diff(k) => Some(*k),
            Expr::Neg(e) | Expr::Call(_, e) => e.max_diff_order(),
            Expr::Binary(_, l, r) => match (l.max_diff_order(), r.max_diff_order()) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            },
        }
    }

    pub fn depends_on_u(&self) -> bool {
        self.max_diff_order().is_some()
    }

    /// Evaluate at `x` with `u` bound to `u` (derivatives unavailable).
    pub fn eval(&self, x: f64, u: Option<f64>) -> Result<f64, EvalError> {
        match u {
            Some(u) => self.eval_with(x, &[u]),
            None => self.eval_with(x, &[]),
        }
    }

    /// Evaluate with `diff(u, k)` bound to `derivs[k]`.
    pub fn eval_with(&self, x: f64, derivs: &[f64]) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Number(v) => *v,
            Expr::X => x,
            Expr::Const(c) => c.value(),
            Expr::Diff(k) => *derivs
                .get(*k as usize)
                .ok_or(EvalError::MissingU { order: *k, x })?,
            Expr::Neg(e) => -e.eval_with(x, derivs)?,
            Expr::Call(f, arg) => {
                let a = arg.eval_with(x, derivs)?;
                f.apply(a).map_err(|what| EvalError::Domain { what, x })?
            }
            Expr::Binary(op, l, r) => {
                let a = l.eval_with(x, derivs)?;
                let b = r.eval_with(x, derivs)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::Domain {
                                what: "division by zero",
                                x,
                            });
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { x })
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            Expr::Number(v) if *v < 0.0 => 3,
            _ => 5,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Number(v) => write!(f, "{v}"),
            Expr::X => f.write_str("x"),
            Expr::Diff(0) => f.write_str("u"),
            Expr::Diff(k) => write!(f, "diff(u,{k})"),
            Expr::Const(Constant::Pi) => f.write_str("pi"),
            Expr::Const(Constant::E) => f.write_str("e"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, 3)
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            Expr::Binary(op, l, r) => {
                let p = self.precedence();
                let (lmin, rmin) = match op {
                    BinOp::Pow => (p + 1, p - 1),
                    BinOp::Sub | BinOp::Div => (p, p + 1),
                    _ => (p, p),
                };
                wrap(f, l, lmin)?;
                write!(f, " {} ", op.symbol())?;
                wrap(f, r, rmin)
            }
        }
    }
}
