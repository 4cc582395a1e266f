//! Dense Chebyshev differentiation matrices.
//!
//! The first-derivative matrix uses the classical off-diagonal entries
//!
//! ```text
//! D[i][j] = (c_i / c_j) * (-1)^(i+j) / (x_i - x_j),   i != j
//! ```
//!
//! with `c = 2` at both endpoints and `1` elsewhere. Diagonal entries are
//! the negated off-diagonal row sums, so every row of `D` annihilates
//! constants exactly. Higher orders are matrix powers of `D`.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::grid::{Domain, Grid};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct DiffMatrix {
    order: usize,
    domain: Domain,
    entries: Matrix,
}

impl DiffMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Side length `p`.
    pub fn len(&self) -> usize {
        self.entries.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.rows() == 0
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    pub fn into_matrix(self) -> Matrix {
        self.entries
    }

    /// Derivative samples of the interpolant through `values`.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        self.entries.matvec(values)
    }
}

impl Deref for DiffMatrix {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.entries
    }
}

pub fn first_derivative_matrix(grid: &Grid) -> DiffMatrix {
    let x = grid.nodes();
    let p = x.len();
    let weight = |i: usize| {
        let c = if i == 0 || i == p - 1 { 2.0 } else { 1.0 };
        if i.is_multiple_of(2) {
            c
        } else {
            -c
        }
    };
    let scale = 2.0 / grid.domain().width();
    let dom = grid.domain();
    let t: Vec<f64> = if dom.is_reference() {
        x.to_vec()
    } else {
        x.iter().map(|&xi| dom.to_reference(xi)).collect()
    };
    let mut d = Matrix::zeros(p, p);
    for i in 0..p {
        let mut row_sum = 0.0;
        for j in 0..p {
            if i != j {
                let v = scale * weight(i) / (weight(j) * (t[i] - t[j]));
                d[(i, j)] = v;
                row_sum += v;
            }
        }
        d[(i, i)] = -row_sum;
    }
    DiffMatrix {
        order: 1,
        domain: grid.domain(),
        entries: d,
    }
}

/// Order-`k` differentiation matrix `D^k`, `1 <= k <= p - 1`.
pub fn derivative_matrix(grid: &Grid, k: usize) -> Result<DiffMatrix> {
    let p = grid.len();
    if k == 0 || k >= p {
        return Err(Error::InvalidOrder {
            order: k,
            max: p.saturating_sub(1),
        });
    }
    let first = first_derivative_matrix(grid);
    let mut acc = first.entries.clone();
    for _ in 1..k {
        acc = acc.matmul(&first.entries);
    }
    Ok(DiffMatrix {
        order: k,
        domain: grid.domain(),
        entries: acc,
    })
}
