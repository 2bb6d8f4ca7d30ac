//! Minimal static SVG charts.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 360.0;
const PAD_L: f64 = 60.0;
const PAD_R: f64 = 20.0;
const PAD_T: f64 = 30.0;
const PAD_B: f64 = 45.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, "<!-- covfix {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="13">{}</text>"#,
        W / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn fmt(v: f64) -> String {
    if v.abs() >= 1000.0 || v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        PAD_L + (x - self.x0) / (self.x1 - self.x0) * (W - PAD_L - PAD_R)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD_B - (y - self.y0) / (self.y1 - self.y0) * (H - PAD_T - PAD_B)
    }

    fn axes(&self, out: &mut String, xlabel: &str, ylabel: &str) {
        let (l, r, t, b) = (PAD_L, W - PAD_R, PAD_T, H - PAD_B);
        let _ = writeln!(out, r#"<path d="M{l} {t} L{l} {b} L{r} {b}" stroke="black" fill="none"/>"#);
        for k in 0..=4 {
            let f = k as f64 / 4.0;
            let xv = self.x0 + f * (self.x1 - self.x0);
            let yv = self.y0 + f * (self.y1 - self.y0);
            let (x, y) = (self.px(xv), self.py(yv));
            let _ = writeln!(out, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, b + 15.0, fmt(xv));
            let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, l - 5.0, y + 4.0, fmt(yv));
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            (l + r) / 2.0,
            H - 8.0,
            escape(xlabel)
        );
        let _ = writeln!(
            out,
            r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
            (t + b) / 2.0,
            (t + b) / 2.0,
            escape(ylabel)
        );
    }
}

fn legend(out: &mut String, labels: &[&str]) {
    for (k, label) in labels.iter().enumerate() {
        let y = PAD_T + 6.0 + 14.0 * k as f64;
        let x = W - PAD_R - 140.0;
        let c = PALETTE[k % PALETTE.len()];
        let _ = writeln!(out, r#"<rect x="{x}" y="{}" width="10" height="10" fill="{c}"/>"#, y - 9.0);
        let _ = writeln!(out, r#"<text x="{}" y="{y}">{}</text>"#, x + 14.0, escape(label));
    }
}

/// Line chart of one or more series sharing both axes.
pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut x1, mut y1) = (1.0f64, 1.0f64);
    for &(x, y) in pts {
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let frame = Frame {
        x0: 0.0,
        x1,
        y0: 0.0,
        y1,
    };
    let mut out = String::new();
    header(&mut out, title);
    frame.axes(&mut out, xlabel, ylabel);
    for (k, s) in series.iter().enumerate() {
        let mut d = String::new();
        for (idx, &(x, y)) in s.points.iter().enumerate() {
            let _ = write!(d, "{}{:.1} {:.1} ", if idx == 0 { "M" } else { "L" }, frame.px(x), frame.py(y));
        }
        let _ = writeln!(
            out,
            r#"<path d="{}" stroke="{}" stroke-width="1.5" fill="none"/>"#,
            d.trim_end(),
            PALETTE[k % PALETTE.len()]
        );
    }
    legend(&mut out, &series.iter().map(|s| s.label).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    out
}

/// Grouped bar chart: `groups[g]` holds one value per series.
pub fn bar_chart(title: &str, xlabel: &str, ylabel: &str, labels: &[&str], groups: &[Vec<f64>]) -> String {
    let y1 = groups.iter().flatten().fold(1.0f64, |a, &b| a.max(b));
    let frame = Frame {
        x0: 0.0,
        x1: groups.len().max(1) as f64,
        y0: 0.0,
        y1,
    };
    let mut out = String::new();
    header(&mut out, title);
    frame.axes(&mut out, xlabel, ylabel);
    let slot = (frame.px(1.0) - frame.px(0.0)) * 0.8;
    let bw = slot / labels.len().max(1) as f64;
    for (g, vals) in groups.iter().enumerate() {
        let left = frame.px(g as f64) + (frame.px(1.0) - frame.px(0.0)) * 0.1;
        for (k, &v) in vals.iter().enumerate() {
            let top = frame.py(v);
            let _ = writeln!(
                out,
                r#"<rect x="{:.1}" y="{top:.1}" width="{:.1}" height="{:.1}" fill="{}"/>"#,
                left + bw * k as f64,
                bw,
                frame.py(0.0) - top,
                PALETTE[k % PALETTE.len()]
            );
        }
    }
    legend(&mut out, labels);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_are_well_formed() {
        let s = line_chart(
            "a <b>",
            "x",
            "y",
            &[Series {
                label: "one",
                points: vec![(0.0, 0.0), (2.0, 5.0)],
            }],
        );
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("a &lt;b&gt;"));
        assert!(s.contains("<path d=\"M60.0 315.0 L620.0 30.0\""));
        let b = bar_chart("t", "x", "y", &["p", "q"], &[vec![1.0, 2.0], vec![0.0, 3.0]]);
        assert_eq!(b.matches("<rect").count(), 1 + 4 + 2);
        assert_eq!(line_chart("e", "x", "y", &[]), line_chart("e", "x", "y", &[]));
    }
}
