//! Collocation operators and Dirichlet boundary rows.
//!
//! `L = Σ_k diag(coeff_k(x_j)) · D^k` with `D^0 = I`. Boundary conditions
//! replace rows `0` (the right endpoint `b`) and `p-1` (the left endpoint
//! `a`) with unit rows.

use crate::diffmat::first_derivative_matrix;
use crate::error::{Error, Result};
use crate::expr::{Expr, LhsTerm};
use crate::grid::Grid;
use crate::linalg::Matrix;
use crate::problem::SOLVER_ORDER;

/// A boundary-modified collocation system ready for a direct solve.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationSystem {
    pub matrix: Matrix,
    pub rhs: Vec<f64>,
}

pub fn assemble_operator(terms: &[LhsTerm], grid: &Grid) -> Result<Matrix> {
    let p = grid.len();
    let max_order = terms.iter().map(|t| t.order).max().unwrap_or(0);
    if max_order > SOLVER_ORDER {
        return Err(Error::UnsupportedOrder(max_order));
    }
    let d1 = first_derivative_matrix(grid).into_matrix();
    let d2 = if max_order >= 2 {
        Some(d1.matmul(&d1))
    } else {
        None
    };

    let mut op = Matrix::zeros(p, p);
    for term in terms {
        let coeffs = sample_coefficient(&term.coefficient, term.order, grid)?;
        match term.order {
            0 => {
                for (i, c) in coeffs.iter().enumerate() {
                    op[(i, i)] += c;
                }
            }
            k => {
                let dk = if k == 1 { &d1 } else { d2.as_ref().unwrap() };
                for (i, c) in coeffs.iter().enumerate() {
                    for (o, d) in op.row_mut(i).iter_mut().zip(dk.row(i)) {
                        *o += c * d;
                    }
                }
            }
        }
    }
    Ok(op)
}

fn sample_coefficient(coefficient: &Expr, order: u32, grid: &Grid) -> Result<Vec<f64>> {
    grid.nodes()
        .iter()
        .enumerate()
        .map(|(index, &x)| {
            coefficient
                .eval(x, None)
                .map_err(|source| Error::Coefficient {
                    order,
                    index,
                    x,
                    source,
                })
        })
        .collect()
}

/// Sample `rhs` at every node, with `u` bound to `u_current[j]` when given.
pub fn assemble_rhs(rhs: &Expr, grid: &Grid, u_current: Option<&[f64]>) -> Result<Vec<f64>> {
    if let Some(u) = u_current {
        if u.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "current iterate has length {}, grid has {} points",
                u.len(),
                grid.len()
            )));
        }
    }
    grid.nodes()
        .iter()
        .enumerate()
        .map(|(index, &x)| {
            let u = u_current.map(|u| u[index]);
            rhs.eval(x, u)
                .map_err(|source| Error::Rhs { index, source })
        })
        .collect()
}

/// Overwrite the boundary rows with unit rows carrying the Dirichlet values.
pub fn apply_boundary(
    mut matrix: Matrix,
    mut rhs: Vec<f64>,
    lvalue: f64,
    rvalue: f64,
) -> CollocationSystem {
    let p = matrix.rows();
    for i in [0, p - 1] {
        let row = matrix.row_mut(i);
        row.iter_mut().for_each(|v| *v = 0.0);
        row[i] = 1.0;
    }
    rhs[0] = rvalue;
    rhs[p - 1] = lvalue;
    CollocationSystem { matrix, rhs }
}
