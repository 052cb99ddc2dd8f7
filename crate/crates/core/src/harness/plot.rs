//! Static SVG scatter plots of mean squared error per cell with min-max error
//! bars and a least-squares line per series.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::stats::linear_fit;
use super::{summarize, CellSummary, TrialRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotAxis {
    /// Error against `ln p`, one series per `(alpha, n)`.
    LogP,
    /// Error against `n^(−2α/(2α+1))`, one series per `(alpha, p)`.
    NRate,
}

impl FromStr for PlotAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log_p" => Ok(PlotAxis::LogP),
            "n_rate" => Ok(PlotAxis::NRate),
            other => Err(Error::InvalidAxis(other.to_string())),
        }
    }
}

impl PlotAxis {
    pub fn x_value(&self, cell: &CellSummary) -> f64 {
        match self {
            PlotAxis::LogP => (cell.p as f64).ln(),
            PlotAxis::NRate => rate_in_n(cell.n, cell.alpha),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            PlotAxis::LogP => "log p",
            PlotAxis::NRate => "n^(-2α/(2α+1))",
        }
    }

    fn series_label(&self, cell: &CellSummary) -> String {
        match self {
            PlotAxis::LogP => format!("α={}, n={}", cell.alpha, cell.n),
            PlotAxis::NRate => format!("α={}, p={}", cell.alpha, cell.p),
        }
    }

    fn same_series(&self, a: &CellSummary, b: &CellSummary) -> bool {
        a.alpha == b.alpha
            && match self {
                PlotAxis::LogP => a.n == b.n,
                PlotAxis::NRate => a.p == b.p,
            }
    }
}

/// `n^(−2α/(2α+1))`
pub fn rate_in_n(n: usize, alpha: f64) -> f64 {
    (n as f64).powf(-2.0 * alpha / (2.0 * alpha + 1.0))
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    /// `(x, mean, min, max)` sorted by `x`.
    pub points: Vec<(f64, f64, f64, f64)>,
}

/// Groups cell summaries into plot series in a deterministic order.
pub fn build_series(records: &[TrialRecord], axis: PlotAxis) -> Vec<Series> {
    let cells = summarize(records);
    let mut series: Vec<(CellSummary, Series)> = Vec::new();
    for cell in cells {
        let point = (axis.x_value(&cell), cell.mean, cell.min, cell.max);
        match series.iter_mut().find(|(key, _)| axis.same_series(key, &cell)) {
            Some((_, s)) => s.points.push(point),
            None => series.push((
                cell.clone(),
                Series {
                    label: axis.series_label(&cell),
                    points: vec![point],
                },
            )),
        }
    }
    series
        .into_iter()
        .map(|(_, mut s)| {
            s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
            s
        })
        .collect()
}

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 540.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn tick_label(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 0.01 && v.abs() < 1e4) {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn padded_range(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.06 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

/// Renders the SVG document as a string.
pub fn render_svg(records: &[TrialRecord], axis: PlotAxis) -> Result<String> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let series = build_series(records, axis);
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, _, lo, hi) in all {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(lo);
        y_hi = y_hi.max(hi);
    }
    let (x_lo, x_hi) = padded_range(x_lo, x_hi);
    let (y_lo, y_hi) = padded_range(y_lo, y_hi);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let w = &mut svg;
    // writes to a String cannot fail
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let title = match axis {
        PlotAxis::LogP => "Squared spectral error vs log p",
        PlotAxis::NRate => "Mean squared spectral error vs n^(-2α/(2α+1))",
    };
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="28" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );

    // axes and ticks
    let _ = writeln!(
        w,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let xv = x_lo + t * (x_hi - x_lo);
        let yv = y_lo + t * (y_hi - y_lo);
        let (px, py) = (sx(xv), sy(yv));
        let base = TOP + plot_h;
        let _ = writeln!(
            w,
            r##"<line x1="{px:.2}" y1="{base:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            base + 5.0,
            base + 20.0,
            tick_label(xv)
        );
        let _ = writeln!(
            w,
            r##"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT:.2}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 20.0,
        escape(axis.label())
    );
    let _ = writeln!(
        w,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">mean squared spectral error</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (si, s) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let _ = writeln!(w, r#"<g class="series" stroke="{color}" fill="{color}">"#);
        for &(x, mean, lo, hi) in &s.points {
            let (px, pm, plo, phi) = (sx(x), sy(mean), sy(lo), sy(hi));
            let _ = writeln!(
                w,
                r#"<line class="errorbar" x1="{px:.2}" y1="{plo:.2}" x2="{px:.2}" y2="{phi:.2}"/><line x1="{:.2}" y1="{plo:.2}" x2="{:.2}" y2="{plo:.2}"/><line x1="{:.2}" y1="{phi:.2}" x2="{:.2}" y2="{phi:.2}"/>"#,
                px - 4.0,
                px + 4.0,
                px - 4.0,
                px + 4.0
            );
            let _ = writeln!(w, r#"<circle class="point" cx="{px:.2}" cy="{pm:.2}" r="4"/>"#);
        }
        let xs: Vec<f64> = s.points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = s.points.iter().map(|p| p.1).collect();
        let fit = linear_fit(&xs, &ys);
        if fit.slope.is_finite() {
            let (a, b) = (xs[0], xs[xs.len() - 1]);
            let _ = writeln!(
                w,
                r#"<line class="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke-dasharray="6,3" fill="none"/>"#,
                sx(a),
                sy(fit.intercept + fit.slope * a),
                sx(b),
                sy(fit.intercept + fit.slope * b)
            );
        }
        let _ = writeln!(w, "</g>");

        let ly = TOP + 10.0 + 20.0 * si as f64;
        let lx = WIDTH - RIGHT + 20.0;
        let _ = writeln!(
            w,
            r#"<g class="legend"><rect x="{lx:.2}" y="{:.2}" width="12" height="12" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
            ly - 10.0,
            lx + 18.0,
            ly,
            escape(&s.label)
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}

pub fn render_plot(records: &[TrialRecord], axis: PlotAxis, path: impl AsRef<Path>) -> Result<()> {
    let svg = render_svg(records, axis)?;
    super::io::write_string(path.as_ref(), &svg)
}
