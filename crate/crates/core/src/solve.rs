//! Spectral collocation solves and the finite-difference baseline.

use serde::{Deserialize, Serialize};

use crate::assemble::{apply_boundary, assemble_operator, assemble_rhs};
use crate::error::{Error, Result};
use crate::grid::{chebyshev_nodes, Domain, Grid, GridKind};
use crate::interp::BarycentricInterpolant;
use crate::linalg::{solve_tridiagonal, Lu, Matrix};
use crate::problem::OdeProblem;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100;

/// First point count tried by [`solve_adaptive`].
pub const ADAPTIVE_START: usize = 8;
/// Largest point count [`solve_adaptive`] will try.
pub const ADAPTIVE_MAX_POINTS: usize = 2048;
/// Equispaced points used to compare successive adaptive solutions.
pub const ADAPTIVE_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub iterations: usize,
    /// Max `|L u - f|` over interior nodes.
    pub residual_inf: f64,
    pub final_p: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    grid: Grid,
    values: Vec<f64>,
    interpolant: Option<BarycentricInterpolant>,
    diagnostics: SolveDiagnostics,
}

impl Solution {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.grid.domain()
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Barycentric interpolant; `None` for finite-difference solutions.
    pub fn interpolant(&self) -> Option<&BarycentricInterpolant> {
        self.interpolant.as_ref()
    }

    pub fn diagnostics(&self) -> &SolveDiagnostics {
        &self.diagnostics
    }

    /// Evaluate the solution anywhere: barycentric on Chebyshev grids,
    /// piecewise linear on equispaced ones.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.interpolant {
            Some(itp) => itp.eval_at(x),
            None => linear_eval(self.grid.nodes(), &self.values, x),
        }
    }

    pub fn sample_uniform(&self, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 sample points, got {m}"
            )));
        }
        let xs = self.domain().linspace(m);
        let ys = xs.iter().map(|&x| self.eval(x)).collect();
        Ok((xs, ys))
    }
}

fn linear_eval(nodes: &[f64], values: &[f64], x: f64) -> f64 {
    // nodes descend; find the segment [nodes[i+1], nodes[i]] holding x
    let n = nodes.len();
    let i = nodes.partition_point(|&node| node > x).clamp(1, n - 1) - 1;
    let (x0, x1) = (nodes[i], nodes[i + 1]);
    let t = (x - x0) / (x1 - x0);
    values[i] + t * (values[i + 1] - values[i])
}

fn interior_residual(op: &Matrix, u: &[f64], f: &[f64]) -> f64 {
    let lu = op.matvec(u);
    let p = u.len();
    (1..p - 1).map(|i| (lu[i] - f[i]).abs()).fold(0.0, f64::max)
}

fn chebyshev_solution(
    grid: Grid,
    values: Vec<f64>,
    diagnostics: SolveDiagnostics,
) -> Result<Solution> {
    let interpolant = BarycentricInterpolant::new(&grid, values.clone())?;
    Ok(Solution {
        grid,
        values,
        interpolant: Some(interpolant),
        diagnostics,
    })
}

fn require_linear(problem: &OdeProblem) -> Result<()> {
    if problem.is_linear() {
        Ok(())
    } else {
        Err(Error::WrongClassification("nonlinear", "linear"))
    }
}

fn check_points(p: usize, min: usize) -> Result<()> {
    if p < min {
        Err(Error::InvalidPointCount(p, min))
    } else {
        Ok(())
    }
}

/// Direct solve of a linear problem on `p` Chebyshev points.
pub fn solve_bvp_linear(problem: &OdeProblem, p: usize) -> Result<Solution> {
    require_linear(problem)?;
    check_points(p, 4)?;
    let grid = chebyshev_nodes(p, problem.domain())?;
    let op = assemble_operator(problem.lhs_terms(), &grid)?;
    let f = assemble_rhs(problem.rhs(), &grid, None)?;
    let system = apply_boundary(op.clone(), f.clone(), problem.lvalue(), problem.rvalue());
    let values = Lu::factor(&system.matrix)?.solve(&system.rhs)?;
    let diagnostics = SolveDiagnostics {
        iterations: 1,
        residual_inf: interior_residual(&op, &values, &f),
        final_p: p,
        converged: true,
    };
    chebyshev_solution(grid, values, diagnostics)
}

/// Fixed-point iteration `L u_{n+1} = f(x, u_n)` from `u_0 = 0`, stopping
/// when successive iterates differ by less than `tol` in max norm.
pub fn solve_bvp_nonlinear(
    problem: &OdeProblem,
    p: usize,
    tol: f64,
    max_iter: usize,
) -> Result<Solution> {
    if problem.is_linear() {
        return Err(Error::WrongClassification("linear", "nonlinear"));
    }
    check_points(p, 4)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    let grid = chebyshev_nodes(p, problem.domain())?;
    let op = assemble_operator(problem.lhs_terms(), &grid)?;
    let bordered = apply_boundary(op.clone(), vec![0.0; p], problem.lvalue(), problem.rvalue());
    let lu = Lu::factor(&bordered.matrix)?;

    let mut u = vec![0.0; p];
    let mut history = Vec::new();
    for iteration in 1..=max_iter {
        let mut f = match assemble_rhs(problem.rhs(), &grid, Some(&u)) {
            Ok(f) => f,
            Err(Error::Rhs {
                source: crate::expr::EvalError::NonFinite { .. },
                ..
            }) if iteration > 1 => {
                return Err(Error::NotConverged {
                    iterations: iteration - 1,
                    last_iterate: u,
                    history,
                })
            }
            Err(e) => return Err(e),
        };
        f[0] = problem.rvalue();
        f[p - 1] = problem.lvalue();
        let next = lu.solve(&f)?;
        let change = next
            .iter()
            .zip(&u)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let change = if next.iter().all(|v| v.is_finite()) {
            change
        } else {
            f64::INFINITY
        };
        history.push(change);
        u = next;
        if !change.is_finite() {
            break;
        }
        if change < tol {
            let f = assemble_rhs(problem.rhs(), &grid, Some(&u))?;
            let diagnostics = SolveDiagnostics {
                iterations: iteration,
                residual_inf: interior_residual(&op, &u, &f),
                final_p: p,
                converged: true,
            };
            return chebyshev_solution(grid, u, diagnostics);
        }
    }
    Err(Error::NotConverged {
        iterations: history.len(),
        last_iterate: u,
        history,
    })
}

/// Solve with the default method for the problem's classification.
pub fn solve(problem: &OdeProblem, p: usize) -> Result<Solution> {
    if problem.is_linear() {
        solve_bvp_linear(problem, p)
    } else {
        solve_bvp_nonlinear(problem, p, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER)
    }
}

/// Max difference between two solutions at `ADAPTIVE_SAMPLES` equispaced points.
fn sampled_difference(a: &Solution, b: &Solution) -> f64 {
    a.domain()
        .linspace(ADAPTIVE_SAMPLES)
        .into_iter()
        .map(|x| (a.eval(x) - b.eval(x)).abs())
        .fold(0.0, f64::max)
}

/// Double the point count from `ADAPTIVE_START` until two successive
/// solutions agree to `precision` off-grid; returns the finer one.
pub fn solve_adaptive(problem: &OdeProblem, precision: f64) -> Result<Solution> {
    if precision.is_nan() || precision <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "precision must be positive, got {precision}"
        )));
    }
    let mut p = ADAPTIVE_START;
    let mut coarse = solve(problem, p)?;
    let mut best = f64::INFINITY;
    while 2 * p <= ADAPTIVE_MAX_POINTS {
        p *= 2;
        let fine = match solve(problem, p) {
            Ok(s) => s,
            // refinement failures past the first level mean the floor was reached
            Err(_) if best.is_finite() => break,
            Err(e) => return Err(e),
        };
        let diff = sampled_difference(&coarse, &fine);
        best = best.min(diff);
        if diff < precision {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(Error::PrecisionUnreachable {
        requested: precision,
        best,
        max_points: ADAPTIVE_MAX_POINTS,
    })
}

/// Second-order central differences on `m` equispaced points, with the
/// same boundary-row treatment as the spectral solver.
pub fn solve_fd_baseline(problem: &OdeProblem, m: usize) -> Result<Solution> {
    require_linear(problem)?;
    check_points(m, 4)?;
    let grid = Grid::equispaced(m, problem.domain())?;
    let h = problem.domain().width() / (m - 1) as f64;
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    for term in problem.lhs_terms() {
        for i in 1..m - 1 {
            let x = grid.nodes()[i];
            let c = term
                .coefficient
                .eval(x, None)
                .map_err(|source| Error::Coefficient {
                    order: term.order,
                    index: i,
                    x,
                    source,
                })?;
            // nodes descend: x[i-1] = x[i] + h
            match term.order {
                0 => diag[i] += c,
                1 => {
                    lower[i] += c / (2.0 * h);
                    upper[i] -= c / (2.0 * h);
                }
                2 => {
                    lower[i] += c / (h * h);
                    diag[i] -= 2.0 * c / (h * h);
                    upper[i] += c / (h * h);
                }
                k => return Err(Error::UnsupportedOrder(k)),
            }
        }
    }
    let f = assemble_rhs(problem.rhs(), &grid, None)?;
    let mut rhs = f.clone();
    diag[0] = 1.0;
    diag[m - 1] = 1.0;
    rhs[0] = problem.rvalue();
    rhs[m - 1] = problem.lvalue();

    let values = solve_tridiagonal(&lower, &diag, &upper, &rhs)?;
    let residual_inf = (1..m - 1)
        .map(|i| {
            let lu = lower[i] * values[i - 1] + diag[i] * values[i] + upper[i] * values[i + 1];
            (lu - f[i]).abs()
        })
        .fold(0.0, f64::max);
    debug_assert_eq!(grid.kind(), GridKind::Equispaced);
    Ok(Solution {
        grid,
        values,
        interpolant: None,
        diagnostics: SolveDiagnostics {
            iterations: 1,
            residual_inf,
            final_p: m,
            converged: true,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> Domain {
        Domain::reference()
    }

    fn exact(x: f64) -> f64 {
        ((2.0 * x).exp() - x * 2f64.sinh() - 2f64.cosh()) / 4.0
    }

    fn linear_example() -> OdeProblem {
        OdeProblem::new("diff(u,2)", "exp(2*x)", reference(), 0.0, 0.0).unwrap()
    }

    fn nonlinear_example() -> OdeProblem {
        OdeProblem::new("diff(u,2)", "exp(2*u)", reference(), 0.0, 0.0).unwrap()
    }

    #[test]
    fn linear_example_solution() {
        let s = solve_bvp_linear(&linear_example(), 16).unwrap();
        assert!((s.eval(0.0) - (-0.6905489227709078)).abs() < 1e-9);
        assert!(s.values()[0].abs() <= 1e-12);
        assert!(s.values()[15].abs() <= 1e-12);
        let d = s.diagnostics();
        assert_eq!((d.iterations, d.final_p, d.converged), (1, 16, true));
        let fmax = 2f64.exp() * 2f64.exp();
        assert!(d.residual_inf <= 1e-8 * (1.0 + fmax));
    }

    #[test]
    fn harmonic_is_linear() {
        let prob = OdeProblem::new("diff(u,2)", "0", reference(), 0.0, 1.0).unwrap();
        let s = solve_bvp_linear(&prob, 12).unwrap();
        for (x, u) in s.nodes().iter().zip(s.values()) {
            assert!((u - (x + 1.0) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_domain() {
        let prob = OdeProblem::new(
            "diff(u,2)",
            "exp(2*x)",
            Domain::new(0.0, 2.0).unwrap(),
            0.0,
            0.0,
        )
        .unwrap();
        let s = solve_bvp_linear(&prob, 24).unwrap();
        // e^{2x}/4 + (1 - e^4) x / 8 - 1/4 at x = 1
        let want = 1f64.exp().powi(2) / 4.0 + (1.0 - 4f64.exp()) / 8.0 - 0.25;
        assert!((want - (-5.1025047294103665)).abs() < 1e-12);
        assert!((s.eval(1.0) - want).abs() < 1e-8);
    }

    #[test]
    fn resonant_operator_is_singular() {
        // interior block of D² on 4 points has eigenvalues -8 and -8/3
        let prob = OdeProblem::new("diff(u,2) + 8*u", "1", reference(), 0.0, 0.0).unwrap();
        assert!(matches!(
            solve_bvp_linear(&prob, 4),
            Err(Error::Singular { .. })
        ));
        let prob = OdeProblem::new("0*diff(u,2)", "1", reference(), 0.0, 0.0).unwrap();
        assert!(matches!(
            solve_bvp_linear(&prob, 8),
            Err(Error::Singular { .. })
        ));
        assert!(matches!(
            solve_fd_baseline(&prob, 8),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn classification_guards() {
        assert!(matches!(
            solve_bvp_linear(&nonlinear_example(), 16),
            Err(Error::WrongClassification(..))
        ));
        assert!(matches!(
            solve_bvp_nonlinear(&linear_example(), 16, 1e-10, 10),
            Err(Error::WrongClassification(..))
        ));
        assert!(matches!(
            solve_fd_baseline(&nonlinear_example(), 16),
            Err(Error::WrongClassification(..))
        ));
        assert_eq!(
            solve_bvp_linear(&linear_example(), 3).unwrap_err(),
            Error::InvalidPointCount(3, 4)
        );
    }

    #[test]
    fn nonlinear_example_solution() {
        let s = solve_bvp_nonlinear(&nonlinear_example(), 16, 1e-10, 100).unwrap();
        let d = s.diagnostics();
        assert!(d.converged && d.iterations <= 100);
        assert!(d.residual_inf < 1e-8);
        let v = s.values();
        for j in 1..15 {
            assert!(v[j] < 0.0);
            assert!((v[j] - v[15 - j]).abs() < 1e-9);
        }
        let at_zero = s.eval(0.0);
        for x in [-0.9, -0.5, -0.1, 0.1, 0.5, 0.9] {
            assert!(s.eval(x) > at_zero);
        }
    }

    #[test]
    fn first_fixed_point_step_is_linear_solve_of_one() {
        let first = solve_bvp_nonlinear(&nonlinear_example(), 16, 1e3, 100).unwrap();
        assert_eq!(first.diagnostics().iterations, 1);
        assert!(first.diagnostics().converged);
        let ones = OdeProblem::new("diff(u,2)", "1", reference(), 0.0, 0.0).unwrap();
        let lin = solve_bvp_linear(&ones, 16).unwrap();
        for ((a, b), x) in first.values().iter().zip(lin.values()).zip(first.nodes()) {
            assert!((a - b).abs() < 1e-12);
            assert!((a - (x * x - 1.0) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn divergent_iteration_reports_history() {
        // strongly expansive fixed-point map
        let prob = OdeProblem::new("diff(u,2)", "-40*u + 1", reference(), 0.0, 0.0).unwrap();
        match solve_bvp_nonlinear(&prob, 16, 1e-12, 30) {
            Err(Error::NotConverged {
                iterations,
                last_iterate,
                history,
            }) => {
                assert_eq!(iterations, history.len());
                assert_eq!(last_iterate.len(), 16);
                assert!(history.last().unwrap() > &history[0]);
            }
            other => panic!("{other:?}"),
        }
        let prob = OdeProblem::new("diff(u,2)", "exp(-8*u)", reference(), 0.0, 0.0).unwrap();
        assert!(matches!(
            solve_bvp_nonlinear(&prob, 16, 1e-12, 500),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn nonlinear_argument_checks() {
        assert!(solve_bvp_nonlinear(&nonlinear_example(), 16, 0.0, 10).is_err());
        assert!(solve_bvp_nonlinear(&nonlinear_example(), 16, 1e-8, 0).is_err());
    }

    #[test]
    fn adaptive_loose_precision_stops_at_first_comparison() {
        let s = solve_adaptive(&linear_example(), 1.0).unwrap();
        assert_eq!(s.diagnostics().final_p, 16);
        assert!(solve_adaptive(&linear_example(), 0.0).is_err());
    }

    #[test]
    fn adaptive_meets_precision() {
        let s = solve_adaptive(&linear_example(), 1e-5).unwrap();
        assert!(s.diagnostics().final_p <= 64);
        for x in reference().linspace(100) {
            assert!((s.eval(x) - exact(x)).abs() < 1e-5);
        }
    }

    #[test]
    fn adaptive_nonlinear() {
        let s = solve_adaptive(&nonlinear_example(), 1e-4).unwrap();
        assert!(s.diagnostics().converged);
    }

    #[test]
    fn fd_exact_cases() {
        let prob = OdeProblem::new("diff(u,2)", "0", reference(), 0.0, 1.0).unwrap();
        let s = solve_fd_baseline(&prob, 9).unwrap();
        for (x, u) in s.nodes().iter().zip(s.values()) {
            assert!((u - (x + 1.0) / 2.0).abs() < 1e-12);
        }
        let prob = OdeProblem::new("diff(u,2)", "2", reference(), 0.0, 0.0).unwrap();
        let s = solve_fd_baseline(&prob, 17).unwrap();
        for (x, u) in s.nodes().iter().zip(s.values()) {
            assert!((u - (x * x - 1.0)).abs() < 1e-10);
        }
        assert!(s.interpolant().is_none());
        assert_eq!(s.eval(0.5), 0.25 - 1.0);
    }

    #[test]
    fn fd_first_derivative_terms() {
        // u'' + u' = 0, u(-1) = 0, u(1) = 1: u = (e^{-x} - e) / (e^{-1} - e)
        let prob = OdeProblem::new("diff(u,2) + diff(u)", "0", reference(), 0.0, 1.0).unwrap();
        let e = 1f64.exp();
        let exact = |x: f64| ((-x).exp() - e) / (1.0 / e - e);
        let err = |m| {
            let s = solve_fd_baseline(&prob, m).unwrap();
            s.nodes()
                .iter()
                .zip(s.values())
                .map(|(x, u)| (u - exact(*x)).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(64) / err(127);
        assert!((3.4..=4.6).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn fd_second_order_decay() {
        let err = |m| {
            let s = solve_fd_baseline(&linear_example(), m).unwrap();
            s.nodes()
                .iter()
                .zip(s.values())
                .map(|(x, u)| (u - exact(*x)).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(64) / err(128);
        assert!((3.4..=4.6).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn piecewise_linear_eval() {
        let nodes = [1.0, 0.0, -1.0];
        let vals = [2.0, 0.0, 4.0];
        assert_eq!(linear_eval(&nodes, &vals, 0.5), 1.0);
        assert_eq!(linear_eval(&nodes, &vals, -0.25), 1.0);
        assert_eq!(linear_eval(&nodes, &vals, 1.0), 2.0);
        assert_eq!(linear_eval(&nodes, &vals, -1.0), 4.0);
    }
}
