//! Minimal SVG line plots of a [`SweepResult`].

use std::fmt::Write;

use crate::report::{format_sig, Method, SweepResult};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

fn colour(m: Method) -> &'static str {
    match m {
        Method::Main => "#d62728",
        Method::Corrected => "#2ca02c",
        Method::Exact => "#1f77b4",
        Method::Sim => "#000000",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Axis range padded by 5% on each side; a degenerate range is widened.
fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Round tick positions covering `[lo, hi]`, about six of them.
pub fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|k| k * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

/// SVG 1.1 document: one polyline per analytic method, simulated values as
/// markers with their confidence bars, a legend naming every method once.
pub fn render_svg(result: &SweepResult, title: &str) -> String {
    let xs = result.xs();
    let mut ys: Vec<f64> = result.rows.iter().flat_map(|r| r.values.iter().copied()).collect();
    ys.extend(result.rows.iter().filter_map(|r| r.ci).flat_map(|(a, b)| [a, b]));
    ys.retain(|v| v.is_finite());
    let fold = |v: &[f64]| {
        v.iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
    };
    let (x0, x1) = padded_or_unit(fold(&xs));
    let (y0, y1) = padded_or_unit(fold(&ys));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );

    // axes and ticks
    let _ = writeln!(s, r#"<g class="axes" stroke="black" stroke-width="1" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none"/>"#
    );
    for t in ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{b2}"/><text x="{x:.2}" y="{ty}" stroke="none" text-anchor="middle">{}</text>"#,
            format_sig(round_tick(t)),
            b = TOP + ph,
            b2 = TOP + ph + 5.0,
            ty = TOP + ph + 18.0
        );
    }
    for t in ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(
            s,
            r#"<line x1="{l2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}"/><text x="{tx}" y="{ty:.2}" stroke="none" text-anchor="end">{}</text>"#,
            format_sig(round_tick(t)),
            l2 = LEFT - 5.0,
            tx = LEFT - 8.0,
            ty = y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" stroke="none" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0,
        escape(&result.variable)
    );
    let _ = writeln!(s, "</g>");

    for (i, &m) in result.methods.iter().enumerate() {
        let c = colour(m);
        if m == Method::Sim {
            let _ = writeln!(s, r#"<g class="series" id="sim" fill="{c}" stroke="{c}">"#);
            for r in &result.rows {
                let (x, y) = (sx(r.x), sy(r.values[i]));
                if let Some((lo, hi)) = r.ci {
                    let _ = writeln!(
                        s,
                        r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke-width="0.8"/>"#,
                        sy(lo),
                        sy(hi)
                    );
                }
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5"/>"#);
            }
            let _ = writeln!(s, "</g>");
        } else {
            let pts: Vec<String> = result
                .rows
                .iter()
                .map(|r| format!("{:.2},{:.2}", sx(r.x), sy(r.values[i])))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline class="series" id="{}" fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#,
                m.name(),
                pts.join(" ")
            );
        }
    }

    let _ = writeln!(s, r#"<g class="legend" font-family="sans-serif" font-size="12">"#);
    for (i, &m) in result.methods.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * i as f64;
        let x = WIDTH - RIGHT + 15.0;
        let c = colour(m);
        if m == Method::Sim {
            let _ = writeln!(s, r#"<circle cx="{}" cy="{y}" r="3" fill="{c}"/>"#, x + 12.0);
        } else {
            let _ = writeln!(
                s,
                r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{c}" stroke-width="2"/>"#,
                x + 25.0
            );
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, x + 32.0, y + 4.0, m.name());
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}

fn padded_or_unit((lo, hi): (f64, f64)) -> (f64, f64) {
    if lo.is_finite() && hi.is_finite() {
        padded(lo, hi)
    } else {
        (0.0, 1.0)
    }
}

// tick positions come out as i * step; clean up the last binary digits
fn round_tick(t: f64) -> f64 {
    (t * 1e9).round() / 1e9
}
