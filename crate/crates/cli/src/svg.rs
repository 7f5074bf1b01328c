//! Standalone SVG scatter plots of emitted CSV series.

use std::fmt::Write;

use crate::render::{format_sig, CsvRow};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

const BLUE: &str = "#1f4fd1";
const RED: &str = "#d62728";
const GREEN: &str = "#2ca02c";
const ORANGE: &str = "#ff7f0e";
const PALETTE: [&str; 8] = [BLUE, RED, GREEN, ORANGE, "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

/// Eigenspace tags keep fixed colors; other classes take the palette in
/// order of first appearance.
fn class_colors(classes: &[String]) -> Vec<&'static str> {
    let fixed = |c: &str| match c {
        "++" => Some(BLUE),
        "+-" => Some(RED),
        "--" => Some(GREEN),
        "-+" => Some(ORANGE),
        _ => None,
    };
    if classes.iter().all(|c| fixed(c).is_some()) {
        return classes.iter().map(|c| fixed(c).unwrap()).collect();
    }
    (0..classes.len()).map(|i| PALETTE[i % PALETTE.len()]).collect()
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders rows as a scatter of value against x_scaled, one color per class.
pub fn render_svg(rows: &[CsvRow], title: &str) -> String {
    let mut classes: Vec<String> = Vec::new();
    for r in rows {
        if !classes.contains(&r.class) {
            classes.push(r.class.clone());
        }
    }
    let colors = class_colors(&classes);
    let (x0, x1) = range(rows.iter().map(|r| r.x_scaled));
    let (y0, y1) = range(rows.iter().map(|r| r.value));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#, px(LEFT + plot_w / 2.0), escape(title)).unwrap();

    writeln!(s, r#"<g stroke="black" stroke-width="1" fill="none">"#).unwrap();
    writeln!(s, r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#, px(LEFT), px(TOP), px(plot_w), px(plot_h)).unwrap();
    if y0 < 0.0 && y1 > 0.0 {
        writeln!(s, r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="gray" stroke-dasharray="4 3"/>"#, px(LEFT), px(LEFT + plot_w), y = px(sy(0.0))).unwrap();
    }
    s.push_str("</g>\n");

    writeln!(s, r#"<g font-family="sans-serif" font-size="11" fill="black">"#).unwrap();
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let (xp, yp) = (sx(xv), sy(yv));
        writeln!(s, r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black"/>"#, px(TOP + plot_h), px(TOP + plot_h + 5.0), x = px(xp)).unwrap();
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, px(xp), px(TOP + plot_h + 18.0), format_sig(xv, 4)).unwrap();
        writeln!(s, r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="black"/>"#, px(LEFT - 5.0), px(LEFT), y = px(yp)).unwrap();
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, px(LEFT - 8.0), px(yp + 4.0), format_sig(yv, 4)).unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">p/X</text>"#, px(LEFT + plot_w / 2.0), px(HEIGHT - 12.0)).unwrap();
    s.push_str("</g>\n");

    for (class, color) in classes.iter().zip(&colors) {
        writeln!(s, r#"<g fill="{color}" stroke="none">"#).unwrap();
        for r in rows.iter().filter(|r| &r.class == class) {
            writeln!(s, r#"<circle cx="{}" cy="{}" r="2"/>"#, px(sx(r.x_scaled)), px(sy(r.value))).unwrap();
        }
        s.push_str("</g>\n");
    }

    if !classes.is_empty() {
        let lx = WIDTH - RIGHT + 15.0;
        writeln!(s, r#"<g font-family="sans-serif" font-size="12">"#).unwrap();
        for (i, (class, color)) in classes.iter().zip(&colors).enumerate() {
            let ly = TOP + 15.0 + 20.0 * i as f64;
            writeln!(s, r#"<circle cx="{}" cy="{}" r="5" fill="{color}"/>"#, px(lx), px(ly)).unwrap();
            writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, px(lx + 12.0), px(ly + 4.0), escape(class)).unwrap();
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
