use std::collections::BTreeMap;

use super::{BinOp, Expr};
use crate::error::{Error, Result};

/// One `coefficient(x) * diff(u, order)` term of a linear left-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct LhsTerm {
    pub order: u32,
    pub coefficient: Expr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Linear,
    NonlinearRhs,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Linear => "linear",
            Classification::NonlinearRhs => "nonlinear_rhs",
        }
    }
}

/// An expression split as `free + Σ coeff_k * diff(u, k)` where neither
/// `free` nor any `coeff_k` mention `u`.
#[derive(Debug, Default)]
struct Affine {
    free: Option<Expr>,
    terms: BTreeMap<u32, Expr>,
}

fn add(a: Option<Expr>, b: Expr) -> Expr {
    match a {
        None => b,
        Some(a) => match (&a, &b) {
            (Expr::Number(x), Expr::Number(y)) => Expr::Number(x + y),
            _ => Expr::binary(BinOp::Add, a, b),
        },
    }
}

fn mul(a: &Expr, b: Expr) -> Expr {
    match (a, &b) {
        (Expr::Number(x), Expr::Number(y)) => Expr::Number(x * y),
        (Expr::Number(x), _) if *x == 1.0 => b,
        (_, Expr::Number(y)) if *y == 1.0 => a.clone(),
        _ => Expr::binary(BinOp::Mul, a.clone(), b),
    }
}

fn negate(e: Expr) -> Expr {
    match e {
        Expr::Number(v) => Expr::Number(-v),
        Expr::Neg(inner) => *inner,
        e => Expr::negation(e),
    }
}

impl Affine {
    fn constant(e: &Expr) -> Affine {
        Affine {
            free: Some(e.clone()),
            terms: BTreeMap::new(),
        }
    }

    fn is_free(&self) -> bool {
        self.terms.is_empty()
    }

    fn into_free(self) -> Expr {
        self.free.unwrap_or(Expr::Number(0.0))
    }

    fn plus(mut self, other: Affine) -> Affine {
        if let Some(f) = other.free {
            self.free = Some(add(self.free.take(), f));
        }
        for (k, c) in other.terms {
            let merged = add(self.terms.remove(&k), c);
            self.terms.insert(k, merged);
        }
        self
    }

    fn negated(self) -> Affine {
        Affine {
            free: self.free.map(negate),
            terms: self
                .terms
                .into_iter()
                .map(|(k, c)| (k, negate(c)))
                .collect(),
        }
    }

    fn scaled(self, s: &Expr, on_left: bool) -> Affine {
        let apply = |c: Expr| {
            if on_left {
                mul(s, c)
            } else {
                mul(&c, s.clone())
            }
        };
        Affine {
            free: self.free.map(apply),
            terms: self.terms.into_iter().map(|(k, c)| (k, apply(c))).collect(),
        }
    }

    fn divided(self, d: &Expr) -> Affine {
        let apply = |c: Expr| match d {
            Expr::Number(v) if *v == 1.0 => c,
            _ => Expr::binary(BinOp::Div, c, d.clone()),
        };
        Affine {
            free: self.free.map(apply),
            terms: self.terms.into_iter().map(|(k, c)| (k, apply(c))).collect(),
        }
    }
}

fn linearize(e: &Expr) -> Result<Affine> {
    let nonlinear = || Error::NonlinearLhs(e.to_string());
    if !e.depends_on_u() {
        return Ok(Affine::constant(e));
    }
    match e {
        Expr::Diff(k) => {
            let mut terms = BTreeMap::new();
            terms.insert(*k, Expr::Number(1.0));
            Ok(Affine { free: None, terms })
        }
        Expr::Neg(inner) => Ok(linearize(inner)?.negated()),
        Expr::Binary(BinOp::Add, l, r) => Ok(linearize(l)?.plus(linearize(r)?)),
        Expr::Binary(BinOp::Sub, l, r) => Ok(linearize(l)?.plus(linearize(r)?.negated())),
        Expr::Binary(BinOp::Mul, l, r) => {
            let (a, b) = (linearize(l)?, linearize(r)?);
            match (a.is_free(), b.is_free()) {
                (true, false) => Ok(b.scaled(&a.into_free(), true)),
                (false, true) => Ok(a.scaled(&b.into_free(), false)),
                _ => Err(nonlinear()),
            }
        }
        Expr::Binary(BinOp::Div, l, r) => {
            if r.depends_on_u() {
                return Err(nonlinear());
            }
            Ok(linearize(l)?.divided(r))
        }
        Expr::Binary(BinOp::Pow, ..) | Expr::Call(..) => Err(nonlinear()),
        Expr::Number(_) | Expr::X | Expr::Const(_) => unreachable!("u-free leaves handled above"),
    }
}

/// Split a linear left-hand side into `coefficient(x) * diff(u, k)` terms,
/// one per distinct order, sorted by descending order.
pub fn extract_lhs_terms(lhs: &Expr) -> Result<Vec<LhsTerm>> {
    let affine = linearize(lhs)?;
    if let Some(free) = affine.free {
        return Err(Error::LhsTermWithoutU(free.to_string()));
    }
    Ok(affine
        .terms
        .into_iter()
        .rev()
        .map(|(order, coefficient)| LhsTerm { order, coefficient })
        .collect())
}

/// Linear when the right-hand side is free of `u`; `NonlinearRhs` when it
/// depends on `u` but on none of its derivatives.
pub fn classify(rhs: &Expr) -> Result<Classification> {
    match rhs.max_diff_order() {
        None => Ok(Classification::Linear),
        Some(0) => Ok(Classification::NonlinearRhs),
        Some(k) => Err(Error::UnsupportedRhs(k)),
    }
}
