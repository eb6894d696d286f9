//! Minimal native SVG plotting: polylines on a linear-x / log-y chart with
//! decade ticks, a legend, and nothing else. Output is deterministic byte
//! for byte.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    pub dashed: bool,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

const W: f64 = 880.0;
const H: f64 = 640.0;
const ML: f64 = 90.0;
const MR: f64 = 30.0;
const MT: f64 = 46.0;
const MB: f64 = 70.0;

fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = (hi - lo).max(1e-300);
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= target as f64)
        .unwrap_or(mag * 10.0);
    let first = (lo / step).ceil() * step;
    let mut ticks = Vec::new();
    let mut t = first;
    while t <= hi + 1e-9 * span {
        ticks.push(t);
        t += step;
    }
    ticks
}

/// Renders `curves` to `path`: x linear, y log10.
pub fn render(
    path: &Path,
    title: &str,
    xlabel: &str,
    ylabel: &str,
    curves: &[Curve],
) -> io::Result<()> {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for c in curves {
        for &(x, y) in &c.points {
            let y = y.max(1e-12);
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() {
        (xmin, xmax, ymin, ymax) = (0.0, 1.0, 1e-3, 1.0);
    }
    if xmax - xmin < 1e-12 {
        xmax = xmin + 1.0;
    }
    let (lymin, lymax) = (ymin.log10().floor(), ymax.log10().ceil());
    let (lymin, lymax) = if lymax - lymin < 1.0 { (lymin - 1.0, lymax) } else { (lymin, lymax) };

    let px = |x: f64| ML + (x - xmin) / (xmax - xmin) * (W - ML - MR);
    let py = |y: f64| {
        let ly = y.max(1e-12).log10();
        H - MB - (ly - lymin) / (lymax - lymin) * (H - MT - MB)
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>"#,
        (ML + W - MR) / 2.0
    );

    // axes frame
    let _ = writeln!(
        s,
        r##"<rect x="{ML}" y="{MT}" width="{:.1}" height="{:.1}" fill="none" stroke="#333" stroke-width="1"/>"##,
        W - ML - MR,
        H - MT - MB
    );

    // x ticks
    for t in nice_ticks(xmin, xmax, 6) {
        let x = px(t);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#333"/>"##,
            H - MB,
            H - MB + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{t:.3}</text>"#,
            H - MB + 18.0
        );
    }
    // y decade ticks and gridlines
    let mut dec = lymin;
    while dec <= lymax + 1e-9 {
        let y = py(10f64.powf(dec));
        let _ = writeln!(
            s,
            r##"<line x1="{ML}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd" stroke-width="0.5"/>"##,
            W - MR
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">1e{dec:.0}</text>"#,
            ML - 8.0,
            y + 4.0
        );
        dec += 1.0;
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{xlabel}</text>"#,
        (ML + W - MR) / 2.0,
        H - 22.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 20 {:.1})">{ylabel}</text>"#,
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0
    );

    for c in curves {
        if c.points.is_empty() {
            continue;
        }
        let pts: Vec<String> =
            c.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let dash = if c.dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.8"{dash}/>"#,
            pts.join(" "),
            c.color
        );
    }

    // legend
    let lx = W - MR - 240.0;
    let mut ly = MT + 14.0;
    for c in curves {
        let dash = if c.dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="2"{dash}/>"#,
            lx + 26.0,
            c.color
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{}</text>"#,
            lx + 32.0,
            ly + 4.0,
            c.label
        );
        ly += 16.0;
    }
    let _ = writeln!(s, "</svg>");
    fs::write(path, s)
}
