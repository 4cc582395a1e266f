//! Python bindings for `chebode`.

use chebode::report::{Mode, RequestEcho, SolutionReport};
use chebode::{Domain, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Singular { .. }
        | Error::NotConverged { .. }
        | Error::PrecisionUnreachable { .. }
        | Error::Eval(_)
        | Error::Coefficient { .. }
        | Error::Rhs { .. }
        | Error::Io(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn domain(bounds: (f64, f64)) -> PyResult<Domain> {
    Domain::new(bounds.0, bounds.1).map_err(to_py)
}

/// Chebyshev points on `domain`, in descending order.
#[pyfunction]
#[pyo3(signature = (p, domain = (-1.0, 1.0)))]
fn chebyshev_nodes(p: usize, domain: (f64, f64)) -> PyResult<Vec<f64>> {
    let grid = chebode::chebyshev_nodes(p, self::domain(domain)?).map_err(to_py)?;
    Ok(grid.nodes().to_vec())
}

/// Dense differentiation matrix of the given order as a list of rows.
#[pyfunction]
#[pyo3(signature = (p, order = 1, domain = (-1.0, 1.0)))]
fn differentiation_matrix(p: usize, order: usize, domain: (f64, f64)) -> PyResult<Vec<Vec<f64>>> {
    let grid = chebode::chebyshev_nodes(p, self::domain(domain)?).map_err(to_py)?;
    let d = chebode::derivative_matrix(&grid, order).map_err(to_py)?;
    Ok(d.to_rows())
}

#[pyfunction]
fn barycentric_weights(p: usize) -> PyResult<Vec<f64>> {
    let grid = chebode::chebyshev_nodes(p, Domain::reference()).map_err(to_py)?;
    Ok(chebode::barycentric_weights(&grid))
}

/// A parsed expression in `x`, `u` and `diff(u,k)`.
#[pyclass(frozen, module = "pychebode")]
struct Expression {
    inner: chebode::Expr,
}

#[pymethods]
impl Expression {
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        let inner = chebode::parse(source).map_err(|e| to_py(e.into()))?;
        Ok(Expression { inner })
    }

    #[pyo3(signature = (x, u = None))]
    fn evaluate(&self, x: f64, u: Option<f64>) -> PyResult<f64> {
        self.inner
            .eval(x, u)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn depends_on_u(&self) -> bool {
        self.inner.depends_on_u()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expression('{}')", self.inner)
    }
}

#[pyfunction]
fn parse(source: &str) -> PyResult<Expression> {
    Expression::new(source)
}

/// Second-order two-point boundary value problem `lhs = rhs` with
/// Dirichlet values `bc = (u(a), u(b))`.
#[pyclass(frozen, module = "pychebode")]
struct Problem {
    inner: chebode::OdeProblem,
}

#[pymethods]
impl Problem {
    #[new]
    #[pyo3(signature = (lhs, rhs, domain = (-1.0, 1.0), bc = (0.0, 0.0)))]
    fn new(lhs: &str, rhs: &str, domain: (f64, f64), bc: (f64, f64)) -> PyResult<Self> {
        let inner =
            chebode::OdeProblem::new(lhs, rhs, self::domain(domain)?, bc.0, bc.1).map_err(to_py)?;
        Ok(Problem { inner })
    }

    /// `"linear"` or `"nonlinear_rhs"`.
    #[getter]
    fn classification(&self) -> &'static str {
        self.inner.classification().as_str()
    }

    #[getter]
    fn equation(&self) -> String {
        self.inner.equation()
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        let d = self.inner.domain();
        (d.a(), d.b())
    }

    /// Solve on `n` points, or pick the point count adaptively when
    /// `precision` is given. Defaults to 10 points.
    #[pyo3(signature = (n = None, precision = None))]
    fn solve(
        &self,
        py: Python<'_>,
        n: Option<usize>,
        precision: Option<f64>,
    ) -> PyResult<Solution> {
        let (mode, result) = match (n, precision) {
            (Some(_), Some(_)) => {
                return Err(PyValueError::new_err("pass at most one of n and precision"))
            }
            (_, Some(eps)) => (
                Mode::Precision(eps),
                py.detach(|| chebode::solve_adaptive(&self.inner, eps)),
            ),
            (n, None) => {
                let p = n.unwrap_or(10);
                (
                    Mode::FixedP(p),
                    py.detach(|| chebode::solve(&self.inner, p)),
                )
            }
        };
        Ok(Solution {
            mode,
            request: self.echo(mode),
            inner: result.map_err(to_py)?,
        })
    }

    /// Second-order finite-difference solution on `m` equispaced points.
    fn solve_fd(&self, m: usize) -> PyResult<Solution> {
        let mode = Mode::FixedP(m);
        Ok(Solution {
            mode,
            request: self.echo(mode),
            inner: chebode::solve_fd_baseline(&self.inner, m).map_err(to_py)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Problem('{}')", self.inner.equation())
    }
}

impl Problem {
    fn echo(&self, mode: Mode) -> RequestEcho {
        let d = self.inner.domain();
        RequestEcho {
            lhs: self.inner.lhs_source().to_owned(),
            rhs: self.inner.rhs_source().to_owned(),
            domain: [d.a(), d.b()],
            bc: [self.inner.lvalue(), self.inner.rvalue()],
            mode,
        }
    }
}

#[pyclass(frozen, module = "pychebode")]
struct Solution {
    inner: chebode::Solution,
    request: RequestEcho,
    mode: Mode,
}

#[pymethods]
impl Solution {
    #[getter]
    fn nodes(&self) -> Vec<f64> {
        self.inner.nodes().to_vec()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    /// Barycentric weights; empty for finite-difference solutions.
    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner
            .interpolant()
            .map(|i| i.weights().to_vec())
            .unwrap_or_default()
    }

    #[getter]
    fn diagnostics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = self.inner.diagnostics();
        let dict = PyDict::new(py);
        dict.set_item("iterations", d.iterations)?;
        dict.set_item("residual_inf", d.residual_inf)?;
        dict.set_item("final_p", d.final_p)?;
        dict.set_item("converged", d.converged)?;
        Ok(dict)
    }

    fn evaluate(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn evaluate_many(&self, xs: Vec<f64>) -> Vec<f64> {
        xs.into_iter().map(|x| self.inner.eval(x)).collect()
    }

    fn __call__(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    /// `(xs, ys)` at `m` equispaced points across the domain.
    #[pyo3(signature = (m = 100))]
    fn sample(&self, m: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
        self.inner.sample_uniform(m).map_err(to_py)
    }

    /// The same JSON report the command-line tool prints.
    #[pyo3(signature = (eval_points = Vec::new()))]
    fn to_json(&self, eval_points: Vec<f64>) -> String {
        SolutionReport::new(self.request.clone(), &self.inner, &eval_points).to_json()
    }

    fn __repr__(&self) -> String {
        let mode = match self.mode {
            Mode::FixedP(p) => format!("n={p}"),
            Mode::Precision(eps) => format!("precision={eps}"),
        };
        format!(
            "Solution({} = {}, {mode}, final_p={})",
            self.request.lhs,
            self.request.rhs,
            self.inner.diagnostics().final_p
        )
    }
}

#[pymodule]
fn pychebode(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(chebyshev_nodes, m)?)?;
    m.add_function(wrap_pyfunction!(differentiation_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(barycentric_weights, m)?)?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_class::<Expression>()?;
    m.add_class::<Problem>()?;
    m.add_class::<Solution>()?;
    Ok(())
}
