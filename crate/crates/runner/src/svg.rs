//! Minimal static SVG charts. Every chart embeds the config hash.

use std::fmt::Write;

const W: f64 = 720.0;
const H: f64 = 460.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];

pub struct LineSeries<'a> {
    pub label: &'a str,
    pub values: &'a [f64],
    pub dashed: bool,
}

pub struct LineChart<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub x: &'a [f64],
    pub series: Vec<LineSeries<'a>>,
    pub log_x: bool,
    pub log_y: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str, hash: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, "<!-- config-hash: {hash} -->");
    let _ = writeln!(out, "<desc>config-hash: {hash}</desc>");
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-size="8" fill="#888">config {}</text>"##,
        LEFT,
        H - 6.0,
        &hash[..hash.len().min(16)]
    );
}

struct Scale1 {
    lo: f64,
    hi: f64,
    log: bool,
    a: f64,
    b: f64,
}

impl Scale1 {
    fn new(values: impl Iterator<Item = f64>, log: bool, a: f64, b: f64) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            lo = 0.0;
            hi = 1.0;
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        Self { lo, hi, log, a, b }
    }

    fn map(&self, v: f64) -> Option<f64> {
        if !v.is_finite() || (self.log && v <= 0.0) {
            return None;
        }
        let v = if self.log { v.log10() } else { v };
        Some(self.a + (v - self.lo) / (self.hi - self.lo) * (self.b - self.a))
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        (0..=5)
            .map(|i| {
                let t = self.lo + (self.hi - self.lo) * i as f64 / 5.0;
                let v = if self.log { 10f64.powf(t) } else { t };
                (self.a + (t - self.lo) / (self.hi - self.lo) * (self.b - self.a), format!("{v:.3}"))
            })
            .map(|(p, s)| {
                let s = if s.len() > 9 { format!("{:.2e}", s.parse::<f64>().unwrap_or(0.0)) } else { s };
                (p, s)
            })
            .collect()
    }
}

pub fn line_chart(chart: &LineChart, hash: &str) -> String {
    let mut out = String::new();
    header(&mut out, chart.title, hash);
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, H - BOTTOM, TOP);
    let sx = Scale1::new(chart.x.iter().copied(), chart.log_x, x0, x1);
    let sy = Scale1::new(chart.series.iter().flat_map(|s| s.values.iter().copied()), chart.log_y, y0, y1);
    let _ = writeln!(out, r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1);
    for (p, label) in sx.ticks() {
        let _ = writeln!(out, r#"<line x1="{p:.1}" y1="{y0}" x2="{p:.1}" y2="{}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(out, r#"<text x="{p:.1}" y="{}" text-anchor="middle">{label}</text>"#, y0 + 18.0);
    }
    for (p, label) in sy.ticks() {
        let _ = writeln!(out, r#"<line x1="{}" y1="{p:.1}" x2="{x0}" y2="{p:.1}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(out, r#"<text x="{}" y="{:.1}" text-anchor="end">{label}</text>"#, x0 - 8.0, p + 4.0);
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, H - 24.0, escape(chart.x_label));
    let _ = writeln!(
        out,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        (y0 + y1) / 2.0,
        escape(chart.y_label)
    );
    for (i, s) in chart.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let mut path = String::new();
        let mut pen_up = true;
        for (x, y) in chart.x.iter().zip(s.values) {
            match (sx.map(*x), sy.map(*y)) {
                (Some(px), Some(py)) => {
                    let _ = write!(path, "{}{px:.2},{py:.2} ", if pen_up { "M" } else { "L" });
                    pen_up = false;
                }
                _ => pen_up = true,
            }
        }
        let _ = writeln!(out, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#, path.trim_end());
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let _ = writeln!(out, r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>"#, x1 + 10.0, x1 + 34.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, x1 + 40.0, ly + 4.0, escape(s.label));
    }
    out.push_str("</svg>\n");
    out
}

/// Grid of categorical cells; `cells[row][col]` indexes `classes`.
#[allow(clippy::too_many_arguments)]
pub fn class_map(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    cells: &[Vec<usize>],
    classes: &[(&str, &str)],
    hash: &str,
) -> String {
    let mut out = String::new();
    header(&mut out, title, hash);
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, H - BOTTOM, TOP);
    let cw = (x1 - x0) / xs.len().max(1) as f64;
    let ch = (y0 - y1) / ys.len().max(1) as f64;
    for (r, row) in cells.iter().enumerate() {
        for (c, &k) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                x0 + c as f64 * cw,
                y0 - (r + 1) as f64 * ch,
                cw,
                ch,
                classes[k].1
            );
        }
    }
    let _ = writeln!(out, r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1);
    let step_x = (xs.len() / 6).max(1);
    for (c, x) in xs.iter().enumerate().step_by(step_x) {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{}" text-anchor="middle">{x:.3}</text>"#, x0 + (c as f64 + 0.5) * cw, y0 + 18.0);
    }
    let step_y = (ys.len() / 6).max(1);
    for (r, y) in ys.iter().enumerate().step_by(step_y) {
        let _ = writeln!(out, r#"<text x="{}" y="{:.1}" text-anchor="end">{y:.3}</text>"#, x0 - 8.0, y0 - (r as f64 + 0.5) * ch + 4.0);
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, H - 24.0, escape(x_label));
    let _ = writeln!(
        out,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
    for (i, (name, color)) in classes.iter().enumerate() {
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let _ = writeln!(out, r#"<rect x="{}" y="{}" width="14" height="12" fill="{color}"/>"#, x1 + 10.0, ly - 8.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, x1 + 30.0, ly + 2.0, escape(name));
    }
    out.push_str("</svg>\n");
    out
}
