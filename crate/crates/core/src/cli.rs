//! Command-line front end: `solve` and `converge`.
//!
//! Exit codes: 0 on success, 2 for malformed flags, 1 for any failure while
//! parsing the equation or solving it.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::grid::Domain;
use crate::problem::OdeProblem;
use crate::report::{emit_svg, fmt_real, Mode, RequestEcho, SolutionReport, PLOT_SAMPLES};
use crate::solve::{self, Solution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Point count used when neither `--n` nor `--precision` is given.
pub const DEFAULT_POINTS: usize = 10;
/// Spectral reference resolution for `converge` without `--exact`.
pub const REFERENCE_POINTS: usize = 128;
/// Sample points used to measure errors in `converge`.
pub const ERROR_SAMPLES: usize = 200;
/// Grid sizes for the finite-difference rows of `converge --fd`.
pub const FD_LADDER: [usize; 7] = [16, 32, 64, 128, 256, 512, 1024];

const GRAMMAR: &str = "\
EXPRESSIONS:
  expr  := term (('+' | '-') term)*
  term  := unary (('*' | '/') unary)*
  unary := '-' unary | power
  power := base ('^' unary)?
  base  := number | x | u | pi | e | fn '(' expr ')'
         | diff '(' u [',' int] ')' | '(' expr ')'
  fn    := exp sin cos tan log sqrt abs sinh cosh tanh  (a 'math.' prefix is accepted)

  diff(u) is diff(u,1); u is diff(u,0). '^' is right-associative and binds
  tighter than unary minus. The left-hand side must be linear in u with
  order exactly 2; the right-hand side may depend on x and u.

EXAMPLE:
  chebode solve --lhs 'diff(u,2)' --rhs 'exp(2*x)' --domain -1,1 --bc 0,0 --n 16";

#[derive(Debug, Parser)]
#[command(
    name = "chebode",
    version,
    about = "Chebyshev spectral collocation solver for two-point boundary value problems",
    after_help = GRAMMAR
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one problem and print a JSON or CSV report.
    Solve(SolveArgs),
    /// Print max errors over a ladder of point counts as CSV.
    Converge(ConvergeArgs),
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Left-hand side, linear in u, e.g. 'diff(u,2) + 2*diff(u) + 3*u'.
    #[arg(long, allow_hyphen_values = true)]
    lhs: String,
    /// Right-hand side, e.g. 'exp(2*x)' or 'exp(2*u)'.
    #[arg(long, allow_hyphen_values = true)]
    rhs: String,
    /// Interval as a,b.
    #[arg(long, default_value = "-1,1", allow_hyphen_values = true, value_parser = parse_domain)]
    domain: Domain,
    /// Dirichlet values as u(a),u(b).
    #[arg(long, default_value = "0,0", allow_hyphen_values = true, value_parser = parse_pair)]
    bc: (f64, f64),
}

impl ProblemArgs {
    fn problem(&self) -> Result<OdeProblem> {
        OdeProblem::new(&self.lhs, &self.rhs, self.domain, self.bc.0, self.bc.1)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Number of Chebyshev points (default 10).
    #[arg(long, value_parser = parse_points, conflicts_with = "precision")]
    n: Option<usize>,
    /// Choose the number of points automatically to reach this precision.
    #[arg(long, value_parser = parse_positive)]
    precision: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write an SVG plot of the solution to this path.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Evaluate the solution at these points, e.g. --eval 0,0.5.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse_real)]
    eval: Vec<f64>,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Exact solution in x; defaults to a 128-point spectral reference.
    #[arg(long, allow_hyphen_values = true)]
    exact: Option<String>,
    /// Add second-order finite-difference rows for m = 16..1024.
    #[arg(long)]
    fd: bool,
    /// Point-count ladder as lo,hi,step.
    #[arg(long, default_value = "6,16,2", value_parser = parse_ladder)]
    ladder: Ladder,
}

#[derive(Debug, Clone)]
struct Ladder(Vec<usize>);

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated numbers, got `{s}`"))?;
    Ok((parse_real(a)?, parse_real(b)?))
}

fn parse_domain(s: &str) -> std::result::Result<Domain, String> {
    let (a, b) = parse_pair(s)?;
    Domain::new(a, b).map_err(|e| e.to_string())
}

fn parse_points(s: &str) -> std::result::Result<usize, String> {
    let p: usize = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a point count"))?;
    if p < 4 {
        return Err(format!("need at least 4 points, got {p}"));
    }
    Ok(p)
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let v = parse_real(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("precision must be positive, got {v}"))
    }
}

fn parse_ladder(s: &str) -> std::result::Result<Ladder, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(format!("expected lo,hi,step, got `{s}`"));
    };
    let (lo, hi) = (parse_points(lo)?, parse_points(hi)?);
    let step: usize = step
        .trim()
        .parse()
        .map_err(|_| format!("`{step}` is not a step"))?;
    if step == 0 || hi < lo {
        return Err(format!("ladder needs lo <= hi and step >= 1, got `{s}`"));
    }
    Ok(Ladder((lo..=hi).step_by(step).collect()))
}

/// Run the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(args) => run_solve(&args),
        Command::Converge(args) => run_converge(&args),
    };
    match result.and_then(|text| {
        out.write_all(text.as_bytes())
            .map_err(|e| Error::Io(format!("cannot write output: {e}")))
    }) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn run_solve(args: &SolveArgs) -> Result<String> {
    let problem = args.problem.problem()?;
    let (mode, solution) = match args.precision {
        Some(eps) => (Mode::Precision(eps), solve::solve_adaptive(&problem, eps)?),
        None => {
            let p = args.n.unwrap_or(DEFAULT_POINTS);
            (Mode::FixedP(p), solve::solve(&problem, p)?)
        }
    };
    if let Some(path) = &args.plot {
        let (xs, ys) = solution.sample_uniform(PLOT_SAMPLES)?;
        emit_svg(&xs, &ys, &problem.equation(), path)?;
    }
    let domain = problem.domain();
    let request = RequestEcho {
        lhs: args.problem.lhs.clone(),
        rhs: args.problem.rhs.clone(),
        domain: [domain.a(), domain.b()],
        bc: [problem.lvalue(), problem.rvalue()],
        mode,
    };
    let report = SolutionReport::new(request, &solution, &args.eval);
    Ok(match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    })
}

enum Reference {
    Exact(Expr),
    Spectral(Solution),
}

impl Reference {
    fn at(&self, x: f64) -> Result<f64> {
        match self {
            Reference::Exact(e) => Ok(e.eval(x, None)?),
            Reference::Spectral(s) => Ok(s.eval(x)),
        }
    }
}

fn max_error(solution: &Solution, xs: &[f64], reference: &[f64]) -> f64 {
    xs.iter()
        .zip(reference)
        .map(|(&x, r)| (solution.eval(x) - r).abs())
        .fold(0.0, f64::max)
}

fn run_converge(args: &ConvergeArgs) -> Result<String> {
    let problem = args.problem.problem()?;
    let reference = match &args.exact {
        Some(src) => {
            let e = expr::parse(src)?;
            if e.depends_on_u() {
                return Err(Error::InvalidArgument(
                    "--exact must be an expression in x only".into(),
                ));
            }
            Reference::Exact(e)
        }
        None => Reference::Spectral(solve::solve(&problem, REFERENCE_POINTS)?),
    };
    let xs = problem.domain().linspace(ERROR_SAMPLES);
    let ref_values: Vec<f64> = xs.iter().map(|&x| reference.at(x)).collect::<Result<_>>()?;

    let mut jobs: Vec<(&str, usize)> = args.ladder.0.iter().map(|&p| ("spectral", p)).collect();
    if args.fd {
        jobs.extend(FD_LADDER.iter().map(|&m| ("fd", m)));
    }
    let rows: Vec<Result<String>> = jobs
        .par_iter()
        .map(|&(method, n)| {
            let solution = match method {
                "fd" => solve::solve_fd_baseline(&problem, n)?,
                _ => solve::solve(&problem, n)?,
            };
            let e = max_error(&solution, &xs, &ref_values);
            Ok(format!("{method},{n},{}\n", fmt_real(e)))
        })
        .collect();
    let mut out = String::from("method,n,max_error\n");
    for row in rows {
        out.push_str(&row?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("chebode").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn ladder_parsing() {
        assert_eq!(
            parse_ladder("6,16,2").unwrap().0,
            vec![6, 8, 10, 12, 14, 16]
        );
        assert_eq!(parse_ladder("8,8,1").unwrap().0, vec![8]);
        assert!(parse_ladder("8,4,1").is_err());
        assert!(parse_ladder("8,16,0").is_err());
        assert!(parse_ladder("2,16,2").is_err());
        assert!(parse_ladder("8,16").is_err());
    }

    #[test]
    fn negative_domain_values_parse() {
        let (code, out, err) = run_str(&[
            "solve",
            "--lhs",
            "diff(u,2)",
            "--rhs",
            "0",
            "--domain",
            "-3,-1",
            "--bc",
            "-1,-2",
            "--format",
            "csv",
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out.starts_with("x,u\n"));
    }

    #[test]
    fn default_point_count_is_ten() {
        let (code, out, _) = run_str(&["solve", "--lhs", "diff(u,2)", "--rhs", "1"]);
        assert_eq!(code, 0);
        let report = SolutionReport::from_json(&out).unwrap();
        assert_eq!(report.request.mode, Mode::FixedP(10));
        assert_eq!(report.solution.nodes.len(), 10);
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = run_str(&["solve", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("--lhs"));
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("diff(u,1)"));
    }
}
