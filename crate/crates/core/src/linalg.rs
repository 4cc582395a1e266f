//! Dense row-major matrices and direct solvers.

use std::ops::{Index, IndexMut};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Pivots smaller than this fraction of `‖A‖∞` are treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

// Below this many rows the work per row is too small to be worth splitting.
const PARALLEL_THRESHOLD: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Build from nested rows. Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: f64, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        if other.cols == 0 {
            return out;
        }
        let fill = |(i, out_row): (usize, &mut [f64])| {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        };
        if self.rows > PARALLEL_THRESHOLD {
            out.data
                .par_chunks_mut(other.cols)
                .enumerate()
                .for_each(fill);
        } else {
            out.data.chunks_mut(other.cols).enumerate().for_each(fill);
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factors `PA = LU` of a square matrix, stored packed.
#[derive(Debug, Clone)]
pub struct Lu {
    packed: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factor with partial pivoting.
    ///
    /// Fails with [`Error::Singular`] when a pivot falls below
    /// `PIVOT_TOLERANCE * ‖A‖∞`.
    pub fn factor(a: &Matrix) -> Result<Lu> {
        if !a.is_square() {
            return Err(Error::InvalidArgument(format!(
                "matrix must be square, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let threshold = PIVOT_TOLERANCE * a.norm_inf();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (p, magnitude) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if magnitude.is_nan() || magnitude <= threshold {
                return Err(Error::Singular {
                    pivot: k,
                    magnitude,
                });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let (upper, lower) = lu.data.split_at_mut((k + 1) * n);
            let pivot_row = &upper[k * n..];
            let pivot = pivot_row[k];
            let eliminate = |row: &mut [f64]| {
                let factor = row[k] / pivot;
                row[k] = factor;
                if factor != 0.0 {
                    for (r, &pr) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                        *r -= factor * pr;
                    }
                }
            };
            if n - k > PARALLEL_THRESHOLD {
                lower.par_chunks_mut(n).for_each(eliminate);
            } else {
                lower.chunks_mut(n).for_each(eliminate);
            }
        }
        Ok(Lu { packed: lu, perm })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if b.len() != n {
            return Err(Error::InvalidArgument(format!(
                "right-hand side has length {}, expected {n}",
                b.len()
            )));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let s: f64 = self.packed.row(i)[..i]
                .iter()
                .zip(&x[..i])
                .map(|(l, v)| l * v)
                .sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.packed.row(i);
            let s: f64 = row[i + 1..]
                .iter()
                .zip(&x[i + 1..])
                .map(|(u, v)| u * v)
                .sum();
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }
}

/// Solve `A x = b` by LU factorization with partial pivoting.
pub fn solve_dense(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.rows() {
        return Err(Error::InvalidArgument(format!(
            "right-hand side has length {}, expected {}",
            b.len(),
            a.rows()
        )));
    }
    Lu::factor(a)?.solve(b)
}

/// Solve a tridiagonal system with partial pivoting.
///
/// `lower[i]` multiplies `x[i-1]` in row `i` (so `lower[0]` is ignored) and
/// `upper[i]` multiplies `x[i+1]` (so `upper[n-1]` is ignored).
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(Error::InvalidArgument(
            "tridiagonal bands must share one length".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let norm = (0..n)
        .map(|i| {
            let l = if i > 0 { lower[i].abs() } else { 0.0 };
            let u = if i + 1 < n { upper[i].abs() } else { 0.0 };
            l + diag[i].abs() + u
        })
        .fold(0.0, f64::max);
    let threshold = PIVOT_TOLERANCE * norm;

    // Row k of the reduced system holds (a0, a1, a2) at columns k, k+1, k+2;
    // pivoting can push fill-in into the second superdiagonal.
    let mut d0: Vec<f64> = diag.to_vec();
    let mut d1: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { upper[i] } else { 0.0 })
        .collect();
    let mut d2 = vec![0.0; n];
    let mut sub: Vec<f64> = (0..n).map(|i| if i > 0 { lower[i] } else { 0.0 }).collect();
    let mut x = rhs.to_vec();

    for k in 0..n {
        if k + 1 < n && sub[k + 1].abs() > d0[k].abs() {
            // swap rows k and k+1
            let (r0, r1, r2, rb) = (d0[k], d1[k], d2[k], x[k]);
            d0[k] = sub[k + 1];
            d1[k] = d0[k + 1];
            d2[k] = d1[k + 1];
            x[k] = x[k + 1];
            sub[k + 1] = r0;
            d0[k + 1] = r1;
            d1[k + 1] = r2;
            x[k + 1] = rb;
        }
        if d0[k].is_nan() || d0[k].abs() <= threshold {
            return Err(Error::Singular {
                pivot: k,
                magnitude: d0[k].abs(),
            });
        }
        if k + 1 < n {
            let factor = sub[k + 1] / d0[k];
            sub[k + 1] = 0.0;
            d0[k + 1] -= factor * d1[k];
            d1[k + 1] -= factor * d2[k];
            x[k + 1] -= factor * x[k];
        }
    }

    for k in (0..n).rev() {
        let mut s = x[k];
        if k + 1 < n {
            s -= d1[k] * x[k + 1];
        }
        if k + 2 < n {
            s -= d2[k] * x[k + 2];
        }
        x[k] = s / d0[k];
    }
    Ok(x)
}
