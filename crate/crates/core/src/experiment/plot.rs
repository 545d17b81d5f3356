use std::fmt::Write as _;
use std::path::Path;

use super::LearningCurve;
use crate::error::{invalid, Result};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 80.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// Writes the curve as a standalone SVG and its plotted points as a CSV
/// twin next to it (same stem, `.csv`).
pub fn emit_plot(curve: &LearningCurve, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let svg = render_svg(curve)?;
    std::fs::write(path, svg)?;
    let mut w = csv::Writer::from_path(path.with_extension("csv"))?;
    w.write_record(["classifier", "train_size", "mean_e_s"])?;
    for name in &curve.classifiers {
        for (size, mean) in curve.series(name) {
            w.write_record([name.clone(), size.to_string(), mean.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One polyline per classifier: x is the training size per class, y the mean
/// e_S. Non-finite means are left out.
pub fn render_svg(curve: &LearningCurve) -> Result<String> {
    if curve.classifiers.is_empty() || curve.sizes.is_empty() {
        return Err(invalid("nothing to plot"));
    }
    let series: Vec<Vec<(usize, f64)>> = curve
        .classifiers
        .iter()
        .map(|c| curve.series(c).into_iter().filter(|(_, m)| m.is_finite()).collect())
        .collect();
    let ys: Vec<f64> = series.iter().flatten().map(|p| p.1).collect();
    let (mut y0, mut y1) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(y), b.max(y)));
    if !y0.is_finite() {
        (y0, y1) = (-1.0, 1.0);
    }
    if y1 - y0 < 1e-12 {
        (y0, y1) = (y0 - 0.5, y1 + 0.5);
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let x0 = *curve.sizes.first().expect("non-empty") as f64;
    let x1 = (*curve.sizes.last().expect("non-empty") as f64).max(x0 + 1.0);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="15">Learning curves: minimum signed boundary distance e_S</text>"#,
        LEFT + plot_w / 2.0
    );
    // axes
    let _ = writeln!(
        s,
        r#"<g stroke="black" fill="none"><line x1="{LEFT}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{b}"/></g>"#,
        b = TOP + plot_h,
        r = LEFT + plot_w
    );
    for &size in &curve.sizes {
        let x = px(size as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{t}" stroke="black"/><text x="{x:.2}" y="{l}" text-anchor="middle">{size}</text>"#,
            b = TOP + plot_h,
            t = TOP + plot_h + 5.0,
            l = TOP + plot_h + 20.0
        );
    }
    for k in 0..=5 {
        let y = y0 + (y1 - y0) * k as f64 / 5.0;
        let v = py(y);
        let _ = writeln!(
            s,
            r#"<line x1="{a}" y1="{v:.2}" x2="{LEFT}" y2="{v:.2}" stroke="black"/><text x="{t}" y="{v:.2}" text-anchor="end" dominant-baseline="middle">{y:.3}</text>"#,
            a = LEFT - 5.0,
            t = LEFT - 8.0
        );
    }
    if y0 < 0.0 && y1 > 0.0 {
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{z:.2}" x2="{r}" y2="{z:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            z = py(0.0),
            r = LEFT + plot_w
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">training objects per class</text>"#,
        LEFT + plot_w / 2.0,
        TOP + plot_h + 42.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(20 {}) rotate(-90)" text-anchor="middle">mean e_S</text>"#,
        TOP + plot_h / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-style="italic">Higher values indicate better performance.</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    for (i, (name, pts)) in curve.classifiers.iter().zip(&series).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x as f64), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline data-classifier="{}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            escape(name),
            coords.join(" ")
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = LEFT + plot_w + 20.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{ly}" dominant-baseline="middle">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
