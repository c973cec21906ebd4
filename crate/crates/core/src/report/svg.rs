//! Kiviat (radar) chart of one class's mnemonics.
//!
//! Each axis is scaled on its own: the min ring sits at a third of the
//! radius and the max ring at two thirds, so in-range values fall between
//! the rings and out-of-range ones inside or outside them.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::coupling::Mnemonic;
use crate::error::{Error, Result};
use crate::quality::KiviatRow;

const SIZE: f64 = 520.0;
const RADIUS: f64 = 180.0;
const LOW: f64 = 1.0 / 3.0;
const HIGH: f64 = 2.0 / 3.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Radial position in [0, 1] for a row's value.
fn position(row: &KiviatRow) -> f64 {
    let Some(v) = row.value else { return 0.0 };
    let scale = [row.min, row.max]
        .iter()
        .filter(|b| b.is_finite())
        .fold(1.0f64, |a, b| a.max(b.abs()));
    if v < row.min {
        LOW / (1.0 + (row.min - v) / scale)
    } else if v > row.max {
        1.0 - (1.0 - HIGH) / (1.0 + (v - row.max) / scale)
    } else if row.min.is_finite() && row.max.is_finite() && row.max > row.min {
        LOW + (HIGH - LOW) * (v - row.min) / (row.max - row.min)
    } else {
        (LOW + HIGH) / 2.0
    }
}

fn point(axis: usize, n: usize, r: f64) -> (f64, f64) {
    let a = -PI / 2.0 + 2.0 * PI * axis as f64 / n as f64;
    (SIZE / 2.0 + r * RADIUS * a.cos(), SIZE / 2.0 + r * RADIUS * a.sin())
}

fn polygon(pts: &[(f64, f64)]) -> String {
    pts.iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn emit_kiviat_svg(rows: &[KiviatRow], class: &str) -> Result<String> {
    let n = Mnemonic::ALL.len();
    if rows.len() != n {
        return Err(Error::WrongAxisCount {
            expected: n,
            got: rows.len(),
        });
    }
    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"##
    );
    let _ = writeln!(s, r##"  <title>Kiviat diagram for {}</title>"##, escape(class));
    let _ = writeln!(s, r##"  <rect width="{SIZE}" height="{SIZE}" fill="white"/>"##);
    for i in 0..n {
        let (x, y) = point(i, n, 1.0);
        let c = SIZE / 2.0;
        let _ = writeln!(
            s,
            r##"  <line class="axis" x1="{c:.2}" y1="{c:.2}" x2="{x:.2}" y2="{y:.2}" stroke="#bbb"/>"##
        );
    }
    for (name, r) in [("ring-min", LOW), ("ring-max", HIGH)] {
        let pts: Vec<_> = (0..n).map(|i| point(i, n, r)).collect();
        let _ = writeln!(
            s,
            r##"  <polygon class="{name}" points="{}" fill="none" stroke="#4a7" stroke-dasharray="4 3"/>"##,
            polygon(&pts)
        );
    }
    let pts: Vec<_> = rows.iter().enumerate().map(|(i, r)| point(i, n, position(r))).collect();
    let _ = writeln!(
        s,
        r##"  <polygon class="value" points="{}" fill="#36c" fill-opacity="0.2" stroke="#36c"/>"##,
        polygon(&pts)
    );
    for (row, (x, y)) in rows.iter().zip(&pts) {
        let (class_attr, fill) = if row.status != 0 {
            ("violation", "#d33")
        } else {
            ("vertex", "#36c")
        };
        let value = row.value.map_or("undefined".to_string(), |v| format!("{v}"));
        let _ = writeln!(
            s,
            r##"  <circle class="{class_attr}" cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}"><title>{} = {}</title></circle>"##,
            row.mnemonic, value
        );
    }
    for (i, row) in rows.iter().enumerate() {
        let (x, y) = point(i, n, 1.15);
        let _ = writeln!(
            s,
            r##"  <text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"##,
            row.mnemonic
        );
    }
    let _ = writeln!(
        s,
        r##"  <text x="{:.2}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"##,
        SIZE / 2.0,
        escape(class)
    );
    s.push_str("</svg>\n");
    Ok(s)
}
