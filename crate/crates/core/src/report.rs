//! Machine-readable solve reports (JSON, CSV) and SVG plots.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solve::{Solution, SolveDiagnostics};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Fixed number of Chebyshev points.
    #[serde(rename = "n")]
    FixedP(usize),
    /// Target precision for adaptive point selection.
    Precision(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequestEcho {
    pub lhs: String,
    pub rhs: String,
    pub domain: [f64; 2],
    pub bc: [f64; 2],
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionData {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub x: f64,
    pub u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub request: RequestEcho,
    pub solution: SolutionData,
    pub diagnostics: SolveDiagnostics,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evaluations: Vec<Evaluation>,
}

impl SolutionReport {
    pub fn new(request: RequestEcho, solution: &Solution, eval_points: &[f64]) -> Self {
        let weights = solution
            .interpolant()
            .map(|itp| itp.weights().to_vec())
            .unwrap_or_default();
        SolutionReport {
            request,
            solution: SolutionData {
                nodes: solution.nodes().to_vec(),
                values: solution.values().to_vec(),
                weights,
            },
            diagnostics: *solution.diagnostics(),
            evaluations: eval_points
                .iter()
                .map(|&x| Evaluation {
                    x,
                    u: solution.eval(x),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report contains only finite reals")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s)
            .map_err(|e| Error::InvalidArgument(format!("malformed report: {e}")))
    }

    /// `x,u` rows for the evaluation points when present, else for the nodes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,u\n");
        let rows: Vec<(f64, f64)> = if self.evaluations.is_empty() {
            self.solution
                .nodes
                .iter()
                .copied()
                .zip(self.solution.values.iter().copied())
                .collect()
        } else {
            self.evaluations.iter().map(|e| (e.x, e.u)).collect()
        };
        for (x, u) in rows {
            writeln!(out, "{},{}", fmt_real(x), fmt_real(u)).unwrap();
        }
        out
    }
}

/// A real with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Points sampled from the interpolant for a plot.
pub const PLOT_SAMPLES: usize = 500;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Render `(xs, ys)` as a standalone 800×600 SVG line chart.
pub fn render_svg(xs: &[f64], ys: &[f64], title: &str) -> Result<String> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "plot needs at least 2 paired samples, got {} x and {} y",
            xs.len(),
            ys.len()
        )));
    }
    if let Some(i) = xs
        .iter()
        .zip(ys)
        .position(|(x, y)| !(x.is_finite() && y.is_finite()))
    {
        return Err(Error::InvalidArgument(format!(
            "non-finite sample ({}, {}) at index {i}; refusing to plot",
            xs[i], ys[i]
        )));
    }
    let (xmin, xmax) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let (ymin, ymax) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let pad = |lo: f64, hi: f64| {
        if hi > lo {
            (lo, hi)
        } else {
            let d = lo.abs().max(1.0) * 0.5;
            (lo - d, hi + d)
        }
    };
    let (x0, x1) = pad(xmin, xmax);
    let (y0, y1) = pad(ymin, ymax);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let px = |x: f64| left + (x - x0) / (x1 - x0) * (right - left);
    let py = |y: f64| bottom - (y - y0) / (y1 - y0) * (bottom - top);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>"#
    )
    .unwrap();
    let label = |svg: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        writeln!(
            svg,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="sans-serif" font-size="12">{text}</text>"#
        )
        .unwrap();
    };
    label(&mut svg, left, bottom + 16.0, "start", tick(x0));
    label(&mut svg, right, bottom + 16.0, "end", tick(x1));
    label(&mut svg, left - 4.0, bottom, "end", tick(y0));
    label(&mut svg, left - 4.0, top + 4.0, "end", tick(y1));

    let points: Vec<String> = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| format!("{:.3},{:.3}", px(x), py(y)))
        .collect();
    writeln!(
        svg,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#,
        points.join(" ")
    )
    .unwrap();
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_svg(xs: &[f64], ys: &[f64], title: &str, path: &Path) -> Result<()> {
    let svg = render_svg(xs, ys, title)?;
    std::fs::write(path, svg)
        .map_err(|e| Error::Io(format!("cannot write plot to {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polyline_points(svg: &str) -> Vec<(f64, f64)> {
        let start = svg.find("points=\"").unwrap() + 8;
        let end = start + svg[start..].find('"').unwrap();
        svg[start..end]
            .split(' ')
            .map(|pair| {
                let (a, b) = pair.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn minimal_plot() {
        let svg = render_svg(&[0.0, 1.0], &[1.0, 2.0], "u = x + 1").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        let pts = polyline_points(&svg);
        assert_eq!(pts, vec![(40.0, 560.0), (760.0, 40.0)]);
        assert!(svg.contains("width=\"800\" height=\"600\""));
        assert!(svg.contains("u = x + 1"));
    }

    #[test]
    fn flat_data_is_padded() {
        let svg = render_svg(&[0.0, 1.0], &[3.0, 3.0], "flat").unwrap();
        let pts = polyline_points(&svg);
        assert_eq!(pts[0].1, 300.0);
    }

    #[test]
    fn refuses_bad_samples() {
        assert!(render_svg(&[0.0, 1.0], &[0.0, f64::NAN], "t").is_err());
        assert!(render_svg(&[0.0], &[0.0], "t").is_err());
        assert!(render_svg(&[0.0, 1.0], &[0.0], "t").is_err());
    }

    #[test]
    fn title_is_escaped() {
        let svg = render_svg(&[0.0, 1.0], &[0.0, 1.0], "a < b & c").unwrap();
        assert!(svg.contains("a &lt; b &amp; c"));
    }

    #[test]
    fn real_formatting_round_trips() {
        for v in [
            0.1,
            -0.6905489227709078,
            1e-300,
            123456789.12345679,
            f64::MIN_POSITIVE,
        ] {
            let s = fmt_real(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }
}
