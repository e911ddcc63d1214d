//! Deterministic SVG output: grid-placed word clouds and ROC plots. The
//! same input always yields the same bytes.

use std::fmt::Write as _;

use super::frequency::FrequencyReport;
use crate::error::{Error, Result};
use crate::evaluation::RocCurve;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub max_font_size: f64,
    pub font_family: String,
    pub palette: Vec<String>,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            width: 640.0,
            height: 480.0,
            margin: 56.0,
            max_font_size: 48.0,
            font_family: "Helvetica, Arial, sans-serif".into(),
            palette: ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

impl SvgStyle {
    fn color(&self, i: usize) -> &str {
        if self.palette.is_empty() {
            "#000000"
        } else {
            &self.palette[i % self.palette.len()]
        }
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn open_svg(style: &SvgStyle) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
        w = style.width,
        h = style.height
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    s
}

/// Tokens on a near-square grid in rank order, font size proportional to
/// the square root of the count.
pub fn render_word_cloud(report: &FrequencyReport, style: &SvgStyle) -> Result<String> {
    if report.entries.is_empty() {
        return Err(Error::invalid("cannot render an empty frequency report"));
    }
    let n = report.entries.len();
    let cols = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(cols);
    let cell_w = style.width / cols as f64;
    let cell_h = style.height / rows as f64;
    let max_count = report.entries[0].1.max(1) as f64;

    let mut svg = open_svg(style);
    for (i, (token, count)) in report.entries.iter().enumerate() {
        let (r, c) = (i / cols, i % cols);
        let x = (c as f64 + 0.5) * cell_w;
        let y = (r as f64 + 0.5) * cell_h;
        let size = style.max_font_size * (*count as f64 / max_count).sqrt();
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="{font}" font-size="{size:.2}" fill="{color}" text-anchor="middle" dominant-baseline="middle">{text}</text>"#,
            font = escape(&style.font_family),
            color = style.color(i),
            text = escape(token)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Plot-space coordinates of an (fpr, tpr) pair.
pub fn roc_plot_coords(style: &SvgStyle, fpr: f64, tpr: f64) -> (f64, f64) {
    let pw = style.width - 2.0 * style.margin;
    let ph = style.height - 2.0 * style.margin;
    (style.margin + fpr * pw, style.margin + (1.0 - tpr) * ph)
}

/// One polyline per named curve over the chance diagonal, with a legend.
pub fn render_roc<T: Scalar>(curves: &[(String, RocCurve<T>)], style: &SvgStyle) -> Result<String> {
    if curves.is_empty() || curves.iter().any(|(_, c)| c.points.is_empty()) {
        return Err(Error::invalid("cannot render an empty ROC plot"));
    }
    let m = style.margin;
    let (x0, y0) = roc_plot_coords(style, 0.0, 0.0);
    let (x1, y1) = roc_plot_coords(style, 1.0, 1.0);
    let font = escape(&style.font_family);

    let mut svg = open_svg(style);
    let _ = writeln!(
        svg,
        r##"<rect x="{m:.2}" y="{m:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#333333" stroke-width="1"/>"##,
        w = x1 - x0,
        h = y0 - y1
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#999999" stroke-width="1" stroke-dasharray="4 4"/>"##
    );
    for tick in 0..=4 {
        let v = tick as f64 / 4.0;
        let (tx, _) = roc_plot_coords(style, v, 0.0);
        let (_, ty) = roc_plot_coords(style, 0.0, v);
        let _ = writeln!(svg, r#"<text x="{tx:.2}" y="{:.2}" font-family="{font}" font-size="11" text-anchor="middle">{v:.2}</text>"#, y0 + 16.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{ty:.2}" font-family="{font}" font-size="11" text-anchor="end" dominant-baseline="middle">{v:.2}</text>"#, x0 - 6.0);
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-family="{font}" font-size="13" text-anchor="middle">False positive rate</text>"#, (x0 + x1) / 2.0, y0 + 36.0);
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-family="{font}" font-size="13" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">True positive rate</text>"#, x0 - 38.0, (y0 + y1) / 2.0, x0 - 38.0, (y0 + y1) / 2.0);

    for (i, (name, curve)) in curves.iter().enumerate() {
        let points: Vec<String> = curve
            .points
            .iter()
            .map(|p| {
                let (x, y) = roc_plot_coords(style, p.fpr.as_f64(), p.tpr.as_f64());
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            points.join(" "),
            style.color(i)
        );
        let ly = y1 + 18.0 + 18.0 * i as f64;
        let lx = x1 - 190.0;
        let _ = writeln!(svg, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"/>"#, lx + 20.0, style.color(i));
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}" font-family="{font}" font-size="12" dominant-baseline="middle">{} (AUC = {:.3})</text>"#,
            lx + 26.0,
            escape(name),
            curve.auc.as_f64()
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
