//! Chebyshev collocation points and the affine map between a physical
//! interval `[a, b]` and the reference interval `[-1, 1]`.
//!
//! Nodes are stored in descending order, `x_0 = b` down to `x_{p-1} = a`,
//! which is the order produced by `cos(j*pi/(p-1))`. Every other module
//! relies on this ordering: row 0 of a collocation system is the right
//! endpoint.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[a, b]` with finite endpoints and `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    a: f64,
    b: f64,
}

impl Domain {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain { a, b });
        }
        Ok(Domain { a, b })
    }

    /// The reference interval `[-1, 1]`.
    pub fn reference() -> Self {
        Domain { a: -1.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_reference(&self) -> bool {
        self.a == -1.0 && self.b == 1.0
    }

    /// Map a physical coordinate to `[-1, 1]`. Points outside `[a, b]` are
    /// extrapolated.
    pub fn to_reference(&self, x: f64) -> f64 {
        (2.0 * x - self.a - self.b) / (self.b - self.a)
    }

    pub fn from_reference(&self, t: f64) -> f64 {
        0.5 * (self.b - self.a) * t + 0.5 * (self.a + self.b)
    }

    /// `m` equispaced points from `a` to `b` inclusive, ascending.
    pub fn linspace(&self, m: usize) -> Vec<f64> {
        match m {
            0 => Vec::new(),
            1 => vec![self.a],
            _ => {
                let h = self.width() / (m - 1) as f64;
                let mut xs: Vec<f64> = (0..m).map(|i| self.a + i as f64 * h).collect();
                xs[m - 1] = self.b;
                xs
            }
        }
    }
}

/// How the nodes of a [`Grid`] were placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Chebyshev,
    Equispaced,
}

/// Ordered collocation nodes on a [`Domain`], strictly decreasing from `b`
/// to `a` with both endpoints exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    domain: Domain,
    kind: GridKind,
    nodes: Vec<f64>,
}

impl Grid {
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of points `p`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Uniform grid with `m` points, stored descending like the Chebyshev grid.
    pub fn equispaced(m: usize, domain: Domain) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidPointCount(m, 2));
        }
        let mut nodes = domain.linspace(m);
        nodes.reverse();
        Ok(Grid {
            domain,
            kind: GridKind::Equispaced,
            nodes,
        })
    }
}

/// `p` Chebyshev points `cos(j*pi/(p-1))`, `j = 0..p-1`, mapped onto `domain`.
pub fn chebyshev_nodes(p: usize, domain: Domain) -> Result<Grid> {
    if p < 2 {
        return Err(Error::InvalidPointCount(p, 2));
    }
    let n = (p - 1) as f64;
    let mut nodes = Vec::with_capacity(p);
    for j in 0..p {
        // sin form of cos(j*pi/n) is symmetric about the midpoint to the last bit
        let t = (PI * (n - 2.0 * j as f64) / (2.0 * n)).sin();
        nodes.push(domain.from_reference(t));
    }
    nodes[0] = domain.b();
    nodes[p - 1] = domain.a();
    Ok(Grid {
        domain,
        kind: GridKind::Chebyshev,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> Domain {
        Domain::reference()
    }

    #[test]
    fn two_points_are_the_endpoints() {
        let g = chebyshev_nodes(2, reference()).unwrap();
        assert_eq!(g.nodes(), &[1.0, -1.0]);
    }

    #[test]
    fn sixteen_points_match_printed_table() {
        let printed = [
            1.0, 0.978, 0.914, 0.809, 0.669, 0.500, 0.309, 0.105, -0.105, -0.309, -0.500, -0.669,
            -0.809, -0.914, -0.978, -1.0,
        ];
        let g = chebyshev_nodes(16, reference()).unwrap();
        for (x, want) in g.nodes().iter().zip(printed) {
            assert_eq!((x * 1000.0).round() / 1000.0, want, "node {x}");
        }
    }

    #[test]
    fn three_points_on_zero_two() {
        let g = chebyshev_nodes(3, Domain::new(0.0, 2.0).unwrap()).unwrap();
        assert_eq!(g.nodes(), &[2.0, 1.0, 0.0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            chebyshev_nodes(1, reference()),
            Err(Error::InvalidPointCount(1, 2))
        );
        assert!(Domain::new(1.0, 1.0).is_err());
        assert!(Domain::new(2.0, 1.0).is_err());
        assert!(Domain::new(f64::NEG_INFINITY, 1.0).is_err());
        assert!(Domain::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn reference_map_examples() {
        let d = Domain::new(0.0, 2.0).unwrap();
        assert_eq!(d.to_reference(0.0), -1.0);
        assert_eq!(d.to_reference(2.0), 1.0);
        assert_eq!(d.to_reference(1.0), 0.0);
        assert_eq!(reference().to_reference(0.5), 0.5);
    }

    #[test]
    fn equispaced_grid_descends() {
        let g = Grid::equispaced(5, reference()).unwrap();
        assert_eq!(g.nodes(), &[1.0, 0.5, 0.0, -0.5, -1.0]);
        assert_eq!(g.kind(), GridKind::Equispaced);
    }

    #[test]
    fn linspace_inclusive() {
        assert_eq!(reference().linspace(3), vec![-1.0, 0.0, 1.0]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn domain() -> impl Strategy<Value = Domain> {
            (-1e3f64..1e3, 1e-3f64..1e3).prop_map(|(a, w)| Domain::new(a, a + w).unwrap())
        }

        proptest! {
            #[test]
            fn nodes_are_monotone_with_exact_endpoints(p in 2usize..200, d in domain()) {
                let g = chebyshev_nodes(p, d).unwrap();
                prop_assert_eq!(g.len(), p);
                prop_assert_eq!(g.nodes()[0], d.b());
                prop_assert_eq!(g.nodes()[p - 1], d.a());
                for w in g.nodes().windows(2) {
                    prop_assert!(w[0] > w[1]);
                }
            }

            #[test]
            fn reference_nodes_are_symmetric(p in 2usize..300) {
                let g = chebyshev_nodes(p, Domain::reference()).unwrap();
                let x = g.nodes();
                for j in 0..p {
                    prop_assert!((x[j] + x[p - 1 - j]).abs() <= 1e-15);
                }
            }

            #[test]
            fn reference_round_trip(d in domain(), s in 0.0f64..=1.0) {
                let x = d.a() + s * d.width();
                let back = d.from_reference(d.to_reference(x));
                let ulp = f64::EPSILON * x.abs().max(d.a().abs()).max(d.b().abs());
                prop_assert!((back - x).abs() <= 4.0 * ulp);
            }
        }
    }
}
