#![allow(dead_code)]

use rand::Rng;

pub mod cohesion;
pub mod history;

/// Random structured (jump-free) Java statement sequence and the number
/// of decision points written into it, counted while generating.
pub fn structured_body<R: Rng>(rng: &mut R, depth: u32) -> (String, usize) {
    let mut out = String::new();
    let mut decisions = 0;
    for _ in 0..rng.gen_range(1..4) {
        let pick = if depth == 0 { 0 } else { rng.gen_range(0..9) };
        let (cond, cd) = condition(rng);
        let sub = |rng: &mut R| structured_body(rng, depth - 1);
        match pick {
            0 => {
                if rng.gen_bool(0.3) {
                    out.push_str("x = a ? b : c; ");
                    decisions += 1;
                } else {
                    out.push_str("f(x); ");
                }
            }
            1 => {
                let (b, d) = sub(rng);
                out.push_str(&format!("if ({cond}) {{ {b}}} "));
                decisions += d + cd + 1;
                if rng.gen_bool(0.5) {
                    let (e, d) = sub(rng);
                    out.push_str(&format!("else {{ {e}}} "));
                    decisions += d;
                }
            }
            2 => {
                let (b, d) = sub(rng);
                out.push_str(&format!("while ({cond}) {{ {b}}} "));
                decisions += d + cd + 1;
            }
            3 => {
                let (b, d) = sub(rng);
                out.push_str(&format!("do {{ {b}}} while ({cond}); "));
                decisions += d + cd + 1;
            }
            4 => {
                let (b, d) = sub(rng);
                out.push_str(&format!("for (int i = 0; {cond}; i++) {{ {b}}} "));
                decisions += d + cd + 1;
            }
            5 => {
                let (b, d) = sub(rng);
                out.push_str(&format!("for (T t : ts) {{ {b}}} "));
                decisions += d + 1;
            }
            6 | 7 => {
                out.push_str("switch (k) { ");
                for l in 0..rng.gen_range(1..4) {
                    let (b, d) = sub(rng);
                    let brk = if pick == 6 { "break; " } else { "" };
                    out.push_str(&format!("case {l}: {b}{brk}"));
                    decisions += d + 1;
                }
                if rng.gen_bool(0.5) {
                    let (b, d) = sub(rng);
                    out.push_str(&format!("default: {b}"));
                    decisions += d;
                }
                out.push_str("} ");
            }
            _ => {
                let (b, d) = sub(rng);
                out.push_str(&format!("try {{ {b}}} "));
                decisions += d;
                for _ in 0..rng.gen_range(1..3) {
                    let (h, d) = sub(rng);
                    out.push_str(&format!("catch (E e) {{ {h}}} "));
                    decisions += d + 1;
                }
                if rng.gen_bool(0.3) {
                    let (f, d) = sub(rng);
                    out.push_str(&format!("finally {{ {f}}} "));
                    decisions += d;
                }
            }
        }
    }
    (out, decisions)
}

fn condition<R: Rng>(rng: &mut R) -> (String, usize) {
    let n = rng.gen_range(0..3);
    let mut s = String::from("p0()");
    for i in 0..n {
        let op = if rng.gen_bool(0.5) { "&&" } else { "||" };
        s.push_str(&format!(" {op} p{}", i + 1));
    }
    (s, n)
}

pub fn fixture(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

/// Model of the Java fixture package `java/<name>`.
pub fn java_model(name: &str) -> oometrics::model::SystemModel {
    let a = oometrics::report::analyze_sources(&[fixture(&format!("java/{name}"))]).expect("fixture parses");
    assert!(a.parse_errors.is_empty(), "{:?}", a.parse_errors);
    a.model
}

/// MI computed straight from the formula, base-2 logs.
pub fn reference_mi(v: f64, g: f64, loc: f64, cm: f64) -> f64 {
    let lg = |x: f64| x.ln() / std::f64::consts::LN_2;
    171.0 - 5.2 * lg(v) - 0.23 * g - 16.2 * lg(loc) + 50.0 * (2.4 * cm).sqrt().sin()
}

// Columns: design size, hierarchies, abstraction, encapsulation, coupling,
// cohesion, composition, inheritance, polymorphism, messaging, complexity.
pub const QMOOD_WEIGHTS: [[f64; 11]; 6] = [
    [0.5, 0.0, 0.0, 0.0, -0.25, 0.25, 0.0, 0.0, 0.0, 0.5, 0.0],
    [0.0, 0.0, 0.0, 0.25, -0.25, 0.0, 0.5, 0.0, 0.5, 0.0, 0.0],
    [-0.33, 0.0, -0.33, 0.33, -0.33, 0.33, 0.0, 0.0, -0.33, 0.0, -0.33],
    [0.22, 0.22, 0.0, 0.0, 0.0, 0.12, 0.0, 0.0, 0.22, 0.22, 0.0],
    [0.0, 0.0, 0.5, 0.0, -0.5, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0],
    [0.0, 0.0, 0.2, 0.2, 0.0, 0.0, 0.2, 0.2, 0.2, 0.0, 0.0],
];

pub fn qmood_oracle(p: &[f64; 11]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (row, o) in QMOOD_WEIGHTS.iter().zip(out.iter_mut()) {
        *o = row.iter().zip(p).map(|(w, x)| w * x).sum();
    }
    out
}
