use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complexity::{quadrant_with, ComplexityTriple, MethodThresholds, Quadrant};
use crate::model::SystemModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodPoint {
    pub class: String,
    pub method: String,
    pub v: u32,
    pub ev: u32,
    pub iv: u32,
}

/// Complexity of every method with a body, in class then declaration order.
pub fn method_points(model: &SystemModel) -> Vec<MethodPoint> {
    model
        .system_classes()
        .flat_map(|c| {
            c.methods.iter().filter(|m| m.has_body()).map(move |m| {
                let t = ComplexityTriple::of(m.cfg.as_ref().expect("has_body implies a graph"));
                MethodPoint {
                    class: c.name.clone(),
                    method: m.signature(),
                    v: t.v,
                    ev: t.ev,
                    iv: t.iv,
                }
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterOutput {
    pub csv: String,
    /// Every quadrant is present, possibly with 0.
    pub counts: BTreeMap<Quadrant, usize>,
}

/// CSV with columns `method,class,v,ev,quadrant`.
pub fn emit_scatter(points: &[MethodPoint], t: &MethodThresholds) -> ScatterOutput {
    let mut counts: BTreeMap<Quadrant, usize> = [Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV]
        .into_iter()
        .map(|q| (q, 0))
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["method", "class", "v", "ev", "quadrant"])
        .expect("in-memory write");
    for p in points {
        let q = quadrant_with(p.v, p.ev, t);
        *counts.entry(q).or_default() += 1;
        w.write_record([
            p.method.as_str(),
            &p.class,
            &p.v.to_string(),
            &p.ev.to_string(),
            q.label(),
        ])
        .expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    ScatterOutput {
        csv: String::from_utf8(bytes).expect("csv of UTF-8 fields"),
        counts,
    }
}
