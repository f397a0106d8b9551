//! Output files. Every file starts with the run's header line: a `#`
//! comment in CSV, a `header` field in JSON and an XML comment in SVG.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

pub fn write_csv(path: &Path, header: &str, columns: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut text = format!("{header}\n{}\n", columns.join(","));
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct Document<'a, T> {
    header: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

pub fn write_json<T: Serialize>(path: &Path, header: &str, body: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&Document { header, body })?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_svg(path: &Path, header: &str, svg: &str) -> Result<()> {
    let comment = header.trim_start_matches('#').trim();
    fs::write(path, format!("<!-- {comment} -->\n{svg}")).with_context(|| format!("writing {}", path.display()))
}

/// Equal-width bins over `[min, max]` of the values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lower: f64,
    pub width: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// `None` unless there are at least `bins` finite values.
    pub fn new(values: &[f64], bins: usize) -> Option<Self> {
        let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        if bins == 0 || finite.len() < bins {
            return None;
        }
        let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0; bins];
        for v in finite {
            let i = (((v - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        Some(Self { lower: lo, width, counts })
    }

    pub fn edges(&self, i: usize) -> (f64, f64) {
        (self.lower + i as f64 * self.width, self.lower + (i + 1) as f64 * self.width)
    }
}

/// Sorted absolute errors with the fraction of samples at or below each.
pub fn cumulative(errors: &[f64]) -> Vec<(f64, f64)> {
    let mut abs: Vec<f64> = errors.iter().map(|e| e.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let n = abs.len() as f64;
    abs.into_iter()
        .enumerate()
        .map(|(i, e)| (e, (i + 1) as f64 / n))
        .collect()
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// One line panel of `w × h` pixels, placed at `(x0, y0)`.
pub fn line_panel(out: &mut String, (x0, y0, w, h): (f64, f64, f64, f64), title: &str, series: &[Series]) {
    let (m_left, m_bottom, m_top) = (50.0, 30.0, 24.0);
    let (pw, ph) = (w - m_left - 10.0, h - m_bottom - m_top);
    let (xl, xh) = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (yl, yh) = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let px = |x: f64| x0 + m_left + (x - xl) / (xh - xl) * pw;
    let py = |y: f64| y0 + m_top + ph - (y - yl) / (yh - yl) * ph;
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="13">{title}</text>"#,
        x0 + m_left,
        y0 + 16.0
    );
    let _ = writeln!(
        out,
        r##"<rect x="{:.1}" y="{:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="#888"/>"##,
        x0 + m_left,
        y0 + m_top
    );
    for (v, anchor, x, y) in [
        (yl, "end", x0 + m_left - 4.0, py(yl)),
        (yh, "end", x0 + m_left - 4.0, py(yh) + 10.0),
        (xl, "start", px(xl), y0 + h - 12.0),
        (xh, "end", px(xh), y0 + h - 12.0),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{y:.1}" font-size="10" text-anchor="{anchor}">{}</text>"#,
            short(v)
        );
    }
    for (k, s) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" fill="{colour}">{}</text>"#,
            x0 + m_left + 6.0,
            y0 + m_top + 12.0 * (k + 1) as f64,
            s.name
        );
    }
}

fn short(v: f64) -> String {
    if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{}", (v * 100.0).round() / 100.0)
    }
}

/// Panels laid out on a grid with `columns` columns.
pub fn panel_grid(panels: &[(String, Vec<Series>)], columns: usize) -> String {
    let (w, h) = (380.0, 260.0);
    let rows = panels.len().div_ceil(columns);
    let mut body = String::new();
    for (i, (title, series)) in panels.iter().enumerate() {
        let (c, r) = ((i % columns) as f64, (i / columns) as f64);
        line_panel(&mut body, (c * w, r * h, w, h), title, series);
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\">\n{body}</svg>\n",
        w * columns as f64,
        h * rows as f64
    )
}

pub fn histogram_svg(title: &str, hist: &Histogram) -> String {
    let (w, h) = (480.0, 280.0);
    let (m_left, m_bottom, m_top) = (50.0, 30.0, 24.0);
    let (pw, ph) = (w - m_left - 10.0, h - m_bottom - m_top);
    let max = hist.counts.iter().copied().max().unwrap_or(1).max(1) as f64;
    let bar = pw / hist.counts.len() as f64;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" font-family=\"sans-serif\">\n<text x=\"{m_left}\" y=\"16\" font-size=\"13\">{title}</text>\n"
    );
    for (i, &c) in hist.counts.iter().enumerate() {
        let bh = c as f64 / max * ph;
        let _ = writeln!(
            out,
            r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{bh:.1}" fill="#1f77b4"/>"##,
            m_left + i as f64 * bar,
            m_top + ph - bh,
            (bar - 1.0).max(0.5)
        );
    }
    let (lo, hi) = (hist.lower, hist.edges(hist.counts.len() - 1).1);
    let _ = writeln!(
        out,
        r#"<text x="{m_left}" y="{:.1}" font-size="10">{}</text>"#,
        h - 12.0,
        short(lo)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{}</text>"#,
        w - 10.0,
        h - 12.0,
        short(hi)
    );
    out.push_str("</svg>\n");
    out
}
