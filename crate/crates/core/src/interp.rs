//! Barycentric Lagrange interpolation on Chebyshev points.
//!
//! Uses the second (true) barycentric formula
//!
//! ```text
//! p(x) = Σ w_j u_j / (x - x_j)  /  Σ w_j / (x - x_j)
//! ```
//!
//! with the closed-form Chebyshev weights `w_j = (-1)^j δ_j`, where
//! `δ_j = 1/2` at the two endpoints and `1` elsewhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Domain, Grid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarycentricInterpolant {
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl BarycentricInterpolant {
    /// Interpolant through `values` sampled on a Chebyshev `grid`.
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        Self::from_parts(grid.nodes().to_vec(), values, barycentric_weights(grid))
    }

    pub fn from_parts(nodes: Vec<f64>, values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || values.len() != nodes.len() || weights.len() != nodes.len() {
            return Err(Error::InvalidArgument(format!(
                "interpolant needs matching arrays of length >= 2 (nodes {}, values {}, weights {})",
                nodes.len(),
                values.len(),
                weights.len()
            )));
        }
        Ok(BarycentricInterpolant {
            nodes,
            values,
            weights,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn eval_at(&self, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xj, &uj), &wj) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            if x == xj {
                return uj;
            }
            let t = wj / (x - xj);
            num += t * uj;
            den += t;
        }
        num / den
    }

    pub fn eval_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval_at(x)).collect()
    }

    /// `m` equispaced points spanning `domain` (ascending) and the
    /// interpolant's values there.
    pub fn sample_uniform(&self, m: usize, domain: Domain) -> Result<(Vec<f64>, Vec<f64>)> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 sample points, got {m}"
            )));
        }
        let xs = domain.linspace(m);
        let ys = self.eval_many(&xs);
        Ok((xs, ys))
    }
}

/// Chebyshev barycentric weights `(-1)^j δ_j` for `grid`.
pub fn barycentric_weights(grid: &Grid) -> Vec<f64> {
    let p = grid.len();
    (0..p)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == p - 1 {
                0.5 * sign
            } else {
                sign
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::chebyshev_nodes;
    use proptest::prelude::*;

    fn grid(p: usize) -> Grid {
        chebyshev_nodes(p, Domain::reference()).unwrap()
    }

    /// Generic weights `1 / Π_{k≠j} (x_j - x_k)`.
    fn generic_weights(x: &[f64]) -> Vec<f64> {
        (0..x.len())
            .map(|j| {
                1.0 / (0..x.len())
                    .filter(|&k| k != j)
                    .map(|k| x[j] - x[k])
                    .product::<f64>()
            })
            .collect()
    }

    #[test]
    fn small_weights() {
        assert_eq!(barycentric_weights(&grid(2)), vec![0.5, -0.5]);
        assert_eq!(barycentric_weights(&grid(3)), vec![0.5, -1.0, 0.5]);
        let w5 = barycentric_weights(&grid(5));
        assert_eq!(w5, vec![0.5, -1.0, 1.0, -1.0, 0.5]);
    }

    #[test]
    fn closed_form_weights_are_proportional_to_generic() {
        for p in [2, 3, 6, 11, 20] {
            let g = grid(p);
            let closed = barycentric_weights(&g);
            let generic = generic_weights(g.nodes());
            let ratio = generic[0] / closed[0];
            for (c, w) in closed.iter().zip(&generic) {
                assert!((w / c - ratio).abs() <= 1e-10 * ratio.abs(), "p={p}");
            }
        }
    }

    #[test]
    fn reproduces_nodes_exactly() {
        let g = grid(9);
        let vals: Vec<f64> = g.nodes().iter().map(|x| (3.0 * x).sin() + 0.1).collect();
        let itp = BarycentricInterpolant::new(&g, vals.clone()).unwrap();
        for (x, v) in g.nodes().iter().zip(&vals) {
            assert_eq!(itp.eval_at(*x), *v);
        }
    }

    #[test]
    fn quadratic_at_half() {
        let itp = BarycentricInterpolant::new(&grid(3), vec![1.0, 0.0, 1.0]).unwrap();
        assert!((itp.eval_at(0.5) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn constants_stay_constant() {
        let itp = BarycentricInterpolant::new(&grid(12), vec![-2.5; 12]).unwrap();
        for x in [-0.999, -0.3, 0.0001, 0.77, 1.3] {
            assert!((itp.eval_at(x) + 2.5).abs() < 1e-13, "{}", itp.eval_at(x));
        }
    }

    #[test]
    fn uniform_sampling() {
        let g = grid(4);
        let itp = BarycentricInterpolant::new(&g, vec![4.0, 1.0, 2.0, 3.0]).unwrap();
        let (xs, ys) = itp.sample_uniform(2, g.domain()).unwrap();
        assert_eq!(xs, vec![-1.0, 1.0]);
        assert_eq!(ys, vec![3.0, 4.0]);
        let (xs, _) = itp.sample_uniform(3, g.domain()).unwrap();
        assert_eq!(xs, vec![-1.0, 0.0, 1.0]);
        assert!(itp.sample_uniform(1, g.domain()).is_err());
    }

    #[test]
    fn rejects_mismatched_parts() {
        assert!(BarycentricInterpolant::from_parts(vec![1.0], vec![1.0], vec![1.0]).is_err());
        assert!(
            BarycentricInterpolant::from_parts(vec![1.0, 0.0], vec![1.0], vec![1.0, 1.0]).is_err()
        );
    }

    proptest! {
        #[test]
        fn polynomial_exactness(
            p in 2usize..=20,
            coeffs in prop::collection::vec(-2.0f64..2.0, 11),
            xs in prop::collection::vec(-1.0f64..1.0, 100),
        ) {
            let degree = (p - 1).min(10);
            let poly = |x: f64| coeffs[..=degree].iter().rev().fold(0.0, |acc, c| acc * x + c);
            let g = grid(p);
            let vals = g.nodes().iter().map(|&x| poly(x)).collect();
            let itp = BarycentricInterpolant::new(&g, vals).unwrap();
            let scale = coeffs[..=degree].iter().map(|c| c.abs()).sum::<f64>().max(1.0);
            for x in xs {
                prop_assert!((itp.eval_at(x) - poly(x)).abs() <= 1e-11 * scale);
            }
        }

        #[test]
        fn weight_scaling_is_invisible(
            s in prop_oneof![-1e6f64..-1e-6, 1e-6f64..1e6],
            exp2 in -40i32..40,
            x in -1.0f64..1.0,
        ) {
            let g = grid(13);
            let vals: Vec<f64> = g.nodes().iter().map(|x| x.exp()).collect();
            let a = BarycentricInterpolant::new(&g, vals.clone()).unwrap();
            let rescaled = |s: f64| {
                let w = a.weights().iter().map(|w| w * s).collect();
                BarycentricInterpolant::from_parts(g.nodes().to_vec(), vals.clone(), w).unwrap()
            };
            let ya = a.eval_at(x);
            // exact when the scale is a power of two; otherwise only the
            // per-weight rounding of w * s shows up
            prop_assert_eq!(rescaled(2f64.powi(exp2)).eval_at(x), ya);
            prop_assert!((rescaled(s).eval_at(x) - ya).abs() <= 64.0 * f64::EPSILON * ya.abs());
        }
    }
}
