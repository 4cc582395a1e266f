use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid domain [{a}, {b}]: endpoints must be finite with a < b")]
    InvalidDomain { a: f64, b: f64 },

    #[error("invalid point count {0}: at least {1} points are required")]
    InvalidPointCount(usize, usize),

    #[error("derivative order {order} out of range 1..={max}")]
    InvalidOrder { order: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("lhs term `{0}` is independent of u; move it to the right-hand side")]
    LhsTermWithoutU(String),

    #[error("nonlinear left-hand side unsupported: `{0}`")]
    NonlinearLhs(String),

    #[error("right-hand side may depend on u but not on its derivatives (found diff(u,{0}))")]
    UnsupportedRhs(u32),

    #[error("derivative order {0} unsupported: two Dirichlet conditions well-pose only order 2")]
    UnsupportedOrder(u32),

    #[error("problem is {0}; this operation requires a {1} problem")]
    WrongClassification(&'static str, &'static str),

    #[error("coefficient of diff(u,{order}) failed at node {index} (x = {x}): {source}")]
    Coefficient {
        order: u32,
        index: usize,
        x: f64,
        source: EvalError,
    },

    #[error("right-hand side evaluation failed at node {index}: {source}")]
    Rhs { index: usize, source: EvalError },

    #[error("singular system: pivot {pivot} has magnitude {magnitude:e}")]
    Singular { pivot: usize, magnitude: f64 },

    #[error(
        "fixed-point iteration did not converge in {iterations} iterations (last update {:e})",
        history.last().copied().unwrap_or(f64::NAN)
    )]
    NotConverged {
        iterations: usize,
        last_iterate: Vec<f64>,
        history: Vec<f64>,
    },

    #[error("precision {requested:e} unreachable with at most {max_points} points (best difference {best:e})")]
    PrecisionUnreachable {
        requested: f64,
        best: f64,
        max_points: usize,
    },

    #[error("{0}")]
    Io(String),
}
