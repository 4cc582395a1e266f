use crate::error::{Error, Result};
use crate::expr::{self, Classification, Expr, LhsTerm};
use crate::grid::Domain;

/// Highest derivative order the two Dirichlet conditions can close.
pub const SOLVER_ORDER: u32 = 2;

/// A second-order two-point boundary value problem
/// `L u = f(x[, u])` on `[a, b]` with `u(a) = lvalue`, `u(b) = rvalue`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeProblem {
    lhs_source: String,
    rhs_source: String,
    lhs_terms: Vec<LhsTerm>,
    rhs: Expr,
    domain: Domain,
    lvalue: f64,
    rvalue: f64,
    classification: Classification,
}

impl OdeProblem {
    pub fn new(lhs: &str, rhs: &str, domain: Domain, lvalue: f64, rvalue: f64) -> Result<Self> {
        if !(lvalue.is_finite() && rvalue.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "boundary values must be finite, got ({lvalue}, {rvalue})"
            )));
        }
        let lhs_expr = expr::parse(lhs)?;
        let rhs_expr = expr::parse(rhs)?;
        let lhs_terms = expr::extract_lhs_terms(&lhs_expr)?;
        let order = lhs_terms.iter().map(|t| t.order).max().unwrap_or(0);
        if order != SOLVER_ORDER {
            return Err(Error::UnsupportedOrder(order));
        }
        let classification = expr::classify(&rhs_expr)?;
        Ok(OdeProblem {
            lhs_source: lhs.to_string(),
            rhs_source: rhs.to_string(),
            lhs_terms,
            rhs: rhs_expr,
            domain,
            lvalue,
            rvalue,
            classification,
        })
    }

    pub fn lhs_source(&self) -> &str {
        &self.lhs_source
    }

    pub fn rhs_source(&self) -> &str {
        &self.rhs_source
    }

    pub fn lhs_terms(&self) -> &[LhsTerm] {
        &self.lhs_terms
    }

    pub fn rhs(&self) -> &Expr {
        &self.rhs
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Dirichlet value at the left endpoint `a`.
    pub fn lvalue(&self) -> f64 {
        self.lvalue
    }

    /// Dirichlet value at the right endpoint `b`.
    pub fn rvalue(&self) -> f64 {
        self.rvalue
    }

    pub fn classification(&self) -> Classification {
        self.classification
    }

    pub fn is_linear(&self) -> bool {
        self.classification == Classification::Linear
    }

    /// The equation as written, e.g. `diff(u,2) = exp(2*x)`.
    pub fn equation(&self) -> String {
        format!("{} = {}", self.lhs_source.trim(), self.rhs_source.trim())
    }
}
