//! Plot-data emission: degree distributions and precision curves as CSV plus
//! a minimal static SVG rendering (axes, points, step lines).

use std::fmt::Write as _;

use crate::error::Result;
use crate::graph::{degree_summary, Graph};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

const SERIES_COLORS: [&str; 6] = [
    "#c0392b", "#2758a8", "#1e8449", "#8e44ad", "#b7950b", "#16a085",
];

/// Degree histogram as CSV: `degree,count,probability`.
pub fn degree_csv(g: &Graph) -> Result<String> {
    let summary = degree_summary(g)?;
    let n = g.node_count() as f64;
    let mut out = String::from("degree,count,probability\n");
    for (&d, &count) in &summary.histogram {
        let _ = writeln!(out, "{d},{count},{}", crate::io::fmt_sig12(count as f64 / n));
    }
    Ok(out)
}

struct Frame {
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + v / self.x_max * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - v / self.y_max * (HEIGHT - 2.0 * MARGIN)
    }
}

fn svg_header(title: &str, x_label: &str, y_label: &str, frame: &Frame) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{title}</text>"#,
        WIDTH / 2.0
    );
    // axes
    let (x0, y0) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
        WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{MARGIN}" stroke="black"/>"#
    );
    // extreme ticks
    let _ = writeln!(
        s,
        r#"<text x="{x0}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">0</text>"#,
        y0 + 18.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
        WIDTH - MARGIN,
        y0 + 18.0,
        trim_float(frame.x_max)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
        x0 - 8.0,
        MARGIN + 4.0,
        trim_float(frame.y_max)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{x_label}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 18 {})">{y_label}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    s
}

fn trim_float(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v:.2}")
    }
}

/// Scatter plot of the degree distribution.
pub fn degree_svg(g: &Graph) -> Result<String> {
    let summary = degree_summary(g)?;
    let n = g.node_count() as f64;
    let x_max = summary.histogram.keys().max().copied().unwrap_or(1) as f64;
    let y_max = summary
        .histogram
        .values()
        .map(|&c| c as f64 / n)
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let frame = Frame { x_max, y_max };
    let mut s = svg_header("Degree distribution", "degree d", "P(d)", &frame);
    for (&d, &count) in &summary.histogram {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{}"/>"#,
            frame.x(d as f64),
            frame.y(count as f64 / n),
            SERIES_COLORS[0]
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Step-line plot of one or more precision curves over the retrieval depth.
pub fn precision_svg(curves: &[(String, Vec<f64>)]) -> String {
    let x_max = curves
        .iter()
        .map(|(_, v)| v.len())
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let frame = Frame { x_max, y_max: 1.0 };
    let mut s = svg_header(
        "Precision vs retrieved baskets",
        "retrieved baskets m",
        "precision p(m)",
        &frame,
    );
    for (i, (label, values)) in curves.iter().enumerate() {
        let color = SERIES_COLORS[i % SERIES_COLORS.len()];
        if values.is_empty() {
            continue;
        }
        // step-after path: horizontal segment at p(m) from depth m-1 to m
        let mut path = format!("M {:.2} {:.2}", frame.x(0.0), frame.y(values[0]));
        for (idx, &p) in values.iter().enumerate() {
            let _ = write!(path, " V {:.2}", frame.y(p));
            let _ = write!(path, " H {:.2}", frame.x((idx + 1) as f64));
        }
        let _ = writeln!(
            s,
            r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{label}</text>"#,
            WIDTH - MARGIN - 90.0,
            MARGIN + 18.0 * i as f64 + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Combined plot data for several precision curves:
/// `m_ret,<label>,<label>,...`; shorter curves pad with empty fields.
pub fn precision_plot_csv(curves: &[(String, Vec<f64>)]) -> String {
    let depth = curves.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut out = String::from("m_ret");
    for (label, _) in curves {
        let _ = write!(out, ",{label}");
    }
    out.push('\n');
    for m in 0..depth {
        let _ = write!(out, "{}", m + 1);
        for (_, values) in curves {
            match values.get(m) {
                Some(&p) => {
                    let _ = write!(out, ",{}", crate::io::fmt_sig12(p));
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}
