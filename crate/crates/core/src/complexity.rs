//! McCabe complexities over control-flow graphs.
//!
//! `essential` and `module_design` both work by repeatedly contracting the
//! graph; every contraction rule removes as many edges as nodes (so `v` is
//! preserved) except the loop and branch collapses, which remove one edge
//! each. Whatever cannot be collapsed is the unstructured residue.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cfg::{ControlFlowGraph, NodeKind};
use crate::error::{Error, Result};
use crate::model::ClassInfo;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityTriple {
    pub v: u32,
    pub ev: u32,
    pub iv: u32,
}

impl ComplexityTriple {
    pub fn of(g: &ControlFlowGraph) -> Self {
        ComplexityTriple {
            v: cyclomatic(g),
            ev: essential(g),
            iv: module_design(g),
        }
    }
}

/// `E - N + 2`.
pub fn cyclomatic(g: &ControlFlowGraph) -> u32 {
    (g.edge_count() + 2 - g.node_count()) as u32
}

/// Mutable multigraph used by the reductions; edge multiplicities are kept
/// per ordered node pair.
#[derive(Clone)]
struct Work {
    alive: Vec<bool>,
    out: Vec<BTreeMap<usize, usize>>,
    inn: Vec<BTreeMap<usize, usize>>,
    edges: usize,
    pinned: Vec<bool>,
    entry: usize,
    exit: usize,
}

impl Work {
    fn new(g: &ControlFlowGraph, pinned: Vec<bool>) -> Self {
        let n = g.node_count();
        let mut w = Work {
            alive: vec![true; n],
            out: vec![BTreeMap::new(); n],
            inn: vec![BTreeMap::new(); n],
            edges: 0,
            pinned,
            entry: g.entry(),
            exit: g.exit(),
        };
        for &(a, b) in g.edges() {
            w.add(a, b, 1);
        }
        w
    }

    fn add(&mut self, a: usize, b: usize, k: usize) {
        *self.out[a].entry(b).or_insert(0) += k;
        *self.inn[b].entry(a).or_insert(0) += k;
        self.edges += k;
    }

    fn remove(&mut self, a: usize, b: usize, k: usize) {
        for (map, key) in [(&mut self.out[a], b), (&mut self.inn[b], a)] {
            let c = map.get_mut(&key).expect("edge present");
            *c -= k;
            if *c == 0 {
                map.remove(&key);
            }
        }
        self.edges -= k;
    }

    fn outdeg(&self, n: usize) -> usize {
        self.out[n].values().sum()
    }

    fn only_out(&self, n: usize) -> Option<usize> {
        match self.out[n].iter().next() {
            Some((&t, &1)) if self.out[n].len() == 1 => Some(t),
            _ => None,
        }
    }

    fn only_in(&self, n: usize) -> Option<usize> {
        match self.inn[n].iter().next() {
            Some((&t, &1)) if self.inn[n].len() == 1 => Some(t),
            _ => None,
        }
    }

    fn v(&self) -> u32 {
        let n = self.alive.iter().filter(|&&a| a).count();
        (self.edges + 2 - n) as u32
    }

    fn inner(&self, n: usize) -> bool {
        self.alive[n] && n != self.entry && n != self.exit
    }

    /// Loop and branch collapses at `n`: self-loops and parallel edges.
    fn collapse(&mut self, n: usize) -> bool {
        let mut changed = false;
        if let Some(&k) = self.out[n].get(&n) {
            self.remove(n, n, k);
            changed = true;
        }
        let multi: Vec<(usize, usize)> = self.out[n]
            .iter()
            .filter(|(_, &k)| k > 1)
            .map(|(&t, &k)| (t, k))
            .collect();
        for (t, k) in multi {
            self.remove(n, t, k - 1);
            changed = true;
        }
        changed
    }

    /// Removes a pass-through node, joining its predecessor to its successor.
    fn bypass(&mut self, n: usize) -> bool {
        if !self.inner(n) || self.pinned[n] {
            return false;
        }
        match (self.only_in(n), self.only_out(n)) {
            (Some(p), Some(s)) if p != n && s != n => {
                self.remove(p, n, 1);
                self.remove(n, s, 1);
                self.add(p, s, 1);
                self.alive[n] = false;
                true
            }
            _ => false,
        }
    }

    /// Merges the single successor `v` of `u` into `u` when `u` is `v`'s
    /// only predecessor.
    fn merge(&mut self, u: usize, pinned_ok: bool) -> bool {
        if !self.alive[u] || u == self.exit {
            return false;
        }
        let Some(v) = self.only_out(u) else {
            return false;
        };
        if v == u || !self.inner(v) || self.only_in(v) != Some(u) || (self.pinned[v] && !pinned_ok) {
            return false;
        }
        self.remove(u, v, 1);
        let outs: Vec<(usize, usize)> = self.out[v].iter().map(|(&t, &k)| (t, k)).collect();
        for (t, k) in outs {
            self.remove(v, t, k);
            self.add(u, if t == v { u } else { t }, k);
        }
        self.pinned[u] = self.pinned[u] || self.pinned[v];
        self.alive[v] = false;
        true
    }

    /// Collapses the second test of a short-circuit condition: `c` is
    /// entered only from `b`, and both branch to a common target.
    fn short_circuit(&mut self, c: usize) -> bool {
        if !self.inner(c) || self.pinned[c] || self.outdeg(c) != 2 || self.out[c].len() != 2 {
            return false;
        }
        let Some(b) = self.only_in(c) else {
            return false;
        };
        if b == c {
            return false;
        }
        let targets: Vec<usize> = self.out[c].keys().copied().collect();
        let shared = |t: usize| t != c && self.out[b].contains_key(&t);
        let (keep, drop) = if shared(targets[1]) && targets[0] != c {
            (targets[0], targets[1])
        } else if shared(targets[0]) && targets[1] != c {
            (targets[1], targets[0])
        } else {
            return false;
        };
        self.remove(b, c, 1);
        self.remove(c, keep, 1);
        self.remove(c, drop, 1);
        self.add(b, keep, 1);
        self.alive[c] = false;
        true
    }

    fn reduce(&mut self, merge_pinned: bool) {
        loop {
            let mut changed = false;
            for n in 0..self.alive.len() {
                if !self.alive[n] {
                    continue;
                }
                changed |= self.collapse(n);
                changed |= self.bypass(n);
                changed |= self.merge(n, merge_pinned);
                changed |= self.short_circuit(n);
            }
            if !changed {
                return;
            }
        }
    }
}

/// Essential complexity: `v` of the graph left after collapsing every
/// structured construct. Early `return`/`throw` nodes and loop jumps are
/// never collapsed.
pub fn essential(g: &ControlFlowGraph) -> u32 {
    let pinned = g
        .kinds()
        .iter()
        .map(|k| matches!(k, NodeKind::Return | NodeKind::Jump))
        .collect();
    let mut w = Work::new(g, pinned);
    w.reduce(false);
    w.v()
}

/// Module design complexity using the call nodes recorded in the graph.
pub fn module_design(g: &ControlFlowGraph) -> u32 {
    reduce_calls(g, g.call_nodes())
}

/// Module design complexity for an explicit set of call-bearing nodes.
pub fn module_design_with(g: &ControlFlowGraph, call_nodes: &BTreeSet<usize>) -> Result<u32> {
    if let Some(bad) = call_nodes.iter().find(|&&n| n >= g.node_count()) {
        return Err(Error::MalformedGraph(format!("call node {bad} is not in the graph")));
    }
    Ok(reduce_calls(g, call_nodes))
}

fn reduce_calls(g: &ControlFlowGraph, calls: &BTreeSet<usize>) -> u32 {
    if calls.is_empty() {
        return 1;
    }
    let pinned = (0..g.node_count()).map(|n| calls.contains(&n)).collect();
    let mut w = Work::new(g, pinned);
    w.reduce(true);
    w.v().max(1)
}

/// WMC: sum of `v` over declared methods; bodiless methods count 1.
pub fn class_wmc(c: &ClassInfo) -> u32 {
    c.methods
        .iter()
        .map(|m| match &m.cfg {
            Some(g) if !m.is_abstract => cyclomatic(g),
            _ => 1,
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    I,
    II,
    III,
    IV,
}

impl Quadrant {
    pub fn label(self) -> &'static str {
        match self {
            Quadrant::I => "I",
            Quadrant::II => "II",
            Quadrant::III => "III",
            Quadrant::IV => "IV",
        }
    }

    pub fn meaning(self) -> &'static str {
        match self {
            Quadrant::I => "unreliable and unmaintainable",
            Quadrant::II => "reliable but unmaintainable",
            Quadrant::III => "reliable and maintainable",
            Quadrant::IV => "unreliable but maintainable",
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Method-level complexity thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodThresholds {
    pub v: u32,
    pub ev: u32,
    pub iv: u32,
}

impl Default for MethodThresholds {
    fn default() -> Self {
        MethodThresholds { v: 10, ev: 4, iv: 7 }
    }
}

/// Quadrant with the default thresholds.
pub fn quadrant(v: u32, ev: u32) -> Quadrant {
    quadrant_with(v, ev, &MethodThresholds::default())
}

pub fn quadrant_with(v: u32, ev: u32, t: &MethodThresholds) -> Quadrant {
    match (v > t.v, ev > t.ev) {
        (true, true) => Quadrant::I,
        (false, true) => Quadrant::II,
        (false, false) => Quadrant::III,
        (true, false) => Quadrant::IV,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{build_cfg, tokenize};

    fn triple(body: &str) -> ComplexityTriple {
        ComplexityTriple::of(&build_cfg(&tokenize(body).unwrap()).unwrap())
    }

    #[test]
    fn structured_bodies_are_essentially_simple() {
        let t = triple("{ while (a) { if (b && c) { f(); } else { g(); } } do { x++; } while (x < 3); }");
        assert_eq!(t.ev, 1);
        assert_eq!(t.v, 5);
    }

    #[test]
    fn early_return_survives() {
        assert_eq!(triple("{ if (a) return 1; f(); return 2; }").ev, 2);
    }

    #[test]
    fn break_out_of_loop_is_unstructured() {
        let t = triple("{ while (a) { if (b) break; c(); } }");
        assert_eq!(t.v, 3);
        assert_eq!(t.ev, 3);
    }

    #[test]
    fn labeled_continue_across_two_loops() {
        let t = triple("{ outer: while (a) { while (b) { if (c) continue outer; d(); } e(); } }");
        assert!(t.ev >= 3, "{t:?}");
    }

    #[test]
    fn module_design_cases() {
        assert_eq!(triple("{ if (a) { x = 1; } else { y = 2; } }").iv, 1);
        assert_eq!(triple("{ if (a) { f(); } else { y = 2; } }").iv, 2);
        assert_eq!(triple("{ if (a) { f(); } else { g(); } }").iv, 2);
        let t = triple("{ if (a) { f(); if (b) { g(); } else { h(); } } else { k(); } }");
        assert_eq!(t.iv, 3);
        assert_eq!(t.v, 3);
    }

    #[test]
    fn call_nodes_must_exist() {
        let g = ControlFlowGraph::trivial();
        assert!(module_design_with(&g, &BTreeSet::from([9])).is_err());
    }

    #[test]
    fn quadrant_rules() {
        assert_eq!(quadrant(1, 1), Quadrant::III);
        assert_eq!(quadrant(11, 5), Quadrant::I);
        assert_eq!(quadrant(10, 4), Quadrant::III);
        assert_eq!(quadrant(10, 5), Quadrant::II);
        assert_eq!(quadrant(11, 4), Quadrant::IV);
    }
}
