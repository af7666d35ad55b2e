//! Deterministic CSV and SVG emission for sweep results.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips `f64` and keeps output byte-identical across runs.

use crate::sweep::BifurcationSample;
use std::fmt::Write as FmtWrite;
use std::io::{self, Write};

#[derive(Debug, PartialEq, Eq)]
pub enum EmitError {
    NoPlottableData,
}

impl std::fmt::Display for EmitError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EmitError::NoPlottableData => write!(f, "no plottable data"),
        }
    }
}

impl std::error::Error for EmitError {}

pub fn fmt17(v: f64) -> String {
    format!("{:.16e}", v)
}

/// Header `a,n,x,flag`, one row per sample, ordered as given (the sweep
/// already orders by `(a, n)`). Flagged rows leave the `x` column empty.
pub fn emit_csv<W: Write>(samples: &[BifurcationSample], mut w: W) -> io::Result<()> {
    let mut buf = String::with_capacity(64 * (samples.len() + 1));
    buf.push_str("a,n,x,flag\n");
    for s in samples {
        match s.x {
            Some(x) => {
                let _ = writeln!(buf, "{},{},{},{}", fmt17(s.a), s.n, fmt17(x), s.flag.name());
            }
            None => {
                let _ = writeln!(buf, "{},{},,{}", fmt17(s.a), s.n, s.flag.name());
            }
        }
    }
    w.write_all(buf.as_bytes())
}

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
    /// Drop markers with `|x| > y_clip` before scaling the axes.
    pub y_clip: Option<f64>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            width: 900,
            height: 600,
            y_clip: None,
        }
    }
}

/// A static SVG 1.1 scatter plot of `(a, x)` over the ok samples.
pub fn emit_svg(samples: &[BifurcationSample], opts: &PlotOptions) -> Result<String, EmitError> {
    let points: Vec<(f64, f64)> = samples
        .iter()
        .filter_map(|s| s.x.map(|x| (s.a, x)))
        .filter(|(_, x)| match opts.y_clip {
            Some(clip) => x.abs() <= clip,
            None => true,
        })
        .collect();
    if points.is_empty() {
        return Err(EmitError::NoPlottableData);
    }
    let (mut a_lo, mut a_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (a, x) in &points {
        a_lo = a_lo.min(*a);
        a_hi = a_hi.max(*a);
        x_lo = x_lo.min(*x);
        x_hi = x_hi.max(*x);
    }
    if a_hi - a_lo < 1e-12 {
        a_lo -= 0.5;
        a_hi += 0.5;
    }
    if x_hi - x_lo < 1e-12 {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    let pad_a = 0.03 * (a_hi - a_lo);
    let pad_x = 0.05 * (x_hi - x_lo);
    a_lo -= pad_a;
    a_hi += pad_a;
    x_lo -= pad_x;
    x_hi += pad_x;

    let (w, h) = (opts.width as f64, opts.height as f64);
    let margin = 48.0;
    let sx = |a: f64| margin + (a - a_lo) / (a_hi - a_lo) * (w - 2.0 * margin);
    let sy = |x: f64| h - margin - (x - x_lo) / (x_hi - x_lo) * (h - 2.0 * margin);

    let mut svg = String::with_capacity(128 * points.len() + 2048);
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        opts.width, opts.height, opts.width, opts.height
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // axes box and tick labels
    let _ = writeln!(
        svg,
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
         fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
        margin,
        margin,
        w - 2.0 * margin,
        h - 2.0 * margin
    );
    for i in 0..=4u32 {
        let t = i as f64 / 4.0;
        let a = a_lo + t * (a_hi - a_lo);
        let x = x_lo + t * (x_hi - x_lo);
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{:.4}</text>",
            sx(a),
            h - margin + 16.0,
            a
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{:.4}</text>",
            margin - 6.0,
            sy(x) + 4.0,
            x
        );
    }
    svg.push_str("<g fill=\"black\">\n");
    for (a, x) in &points {
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.2\"/>",
            sx(*a),
            sy(*x)
        );
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}
