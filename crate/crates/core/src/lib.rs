//! Chebyshev spectral collocation for second-order two-point boundary
//! value problems.
//!
//! A problem is written as two expressions in a small language, for
//! example `diff(u,2)` and `exp(2*x)`, plus a domain and Dirichlet values.
//! Linear problems are solved directly; right-hand sides that depend on
//! `u` are handled by fixed-point iteration from the zero vector.
//!
//! ```
//! use chebode::{Domain, OdeProblem, solve};
//!
//! let problem = OdeProblem::new("diff(u,2)", "exp(2*x)", Domain::reference(), 0.0, 0.0)?;
//! let solution = solve(&problem, 16)?;
//! assert!((solution.eval(0.0) + 0.690549).abs() < 1e-6);
//! # Ok::<(), chebode::Error>(())
//! ```

pub mod assemble;
pub mod cli;
pub mod diffmat;
pub mod error;
pub mod expr;
pub mod grid;
pub mod interp;
pub mod linalg;
pub mod problem;
pub mod report;
pub mod solve;

pub use diffmat::{derivative_matrix, first_derivative_matrix, DiffMatrix};
pub use error::{Error, Result};
pub use expr::{parse, Classification, Expr};
pub use grid::{chebyshev_nodes, Domain, Grid};
pub use interp::{barycentric_weights, BarycentricInterpolant};
pub use problem::OdeProblem;
pub use solve::{
    solve, solve_adaptive, solve_bvp_linear, solve_bvp_nonlinear, solve_fd_baseline, Solution,
    SolveDiagnostics,
};
