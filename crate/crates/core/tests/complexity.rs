mod common;

use std::collections::BTreeSet;

use oometrics::cfg::{ControlFlowGraph, NodeKind};
use oometrics::complexity::{class_wmc, cyclomatic, essential, module_design, quadrant, ComplexityTriple, Quadrant};
use oometrics::model::SystemModel;
use oometrics::parser::{build_cfg, parse_source, tokenize};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg_of(body: &str) -> ControlFlowGraph {
    build_cfg(&tokenize(body).unwrap()).unwrap()
}

/// Number of independent cycles of the underlying undirected multigraph,
/// via union-find over a spanning forest.
fn cycle_rank(nodes: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..nodes).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut extra = 0;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            extra += 1;
        } else {
            parent[ra] = rb;
        }
    }
    extra
}

/// Random valid CFG: a spine from entry to exit plus random extra edges
/// whose sources can still reach exit.
fn random_cfg(rng: &mut ChaCha8Rng) -> ControlFlowGraph {
    let n = rng.gen_range(3..12);
    let mut kinds = vec![NodeKind::Plain; n];
    kinds[0] = NodeKind::Entry;
    kinds[1] = NodeKind::Exit;
    let mut order: Vec<usize> = (2..n).collect();
    order.insert(0, 0);
    order.push(1);
    let mut edges: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
    for _ in 0..rng.gen_range(0..n) {
        let a = order[rng.gen_range(0..order.len() - 1)];
        let b = order[rng.gen_range(1..order.len())];
        edges.push((a, b));
    }
    for &(a, _) in &edges {
        if a != 0 && a != 1 {
            kinds[a] = NodeKind::Plain;
        }
    }
    ControlFlowGraph::new(kinds, edges, BTreeSet::new()).unwrap()
}

#[test]
fn cyclomatic_equals_cycle_rank_plus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let g = random_cfg(&mut rng);
        assert_eq!(cyclomatic(&g) as usize, cycle_rank(g.node_count(), g.edges()) + 1);
        let v = cyclomatic(&g);
        let ev = essential(&g);
        assert!(1 <= ev && ev <= v);
    }
}

#[test]
fn cyclomatic_from_decision_outdegrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let g = random_cfg(&mut rng);
        let sum: usize = (0..g.node_count())
            .filter(|&n| n != g.exit())
            .map(|n| g.out_degree(n) - 1)
            .sum();
        assert_eq!(cyclomatic(&g) as usize, 1 + sum);
    }
}

#[test]
fn structured_corpus_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let (body, decisions) = common::structured_body(&mut rng, 3);
        let g = cfg_of(&format!("{{ {body}}}"));
        let t = ComplexityTriple::of(&g);
        assert_eq!(t.v as usize, decisions + 1, "{body}");
        assert_eq!(t.ev, 1, "{body}");
        assert!(1 <= t.iv && t.iv <= t.v, "{body}");
    }
}

#[test]
fn essential_is_idempotent_on_unstructured_bodies() {
    let bodies = [
        "{ while (a) { if (b) break; c(); } }",
        "{ if (a) return 1; f(); return 2; }",
        "{ outer: for (;;) { while (b) { if (c) continue outer; d(); } if (e) break; } }",
    ];
    for b in bodies {
        let g = cfg_of(b);
        let ev = essential(&g);
        assert!(ev > 1, "{b}");
        assert!(ev <= cyclomatic(&g));
    }
}

/// Paths from entry to exit through the acyclic graph of nested ifs.
fn count_paths(g: &ControlFlowGraph, n: usize) -> u32 {
    if n == g.exit() {
        return 1;
    }
    g.successors(n).map(|s| count_paths(g, s)).sum()
}

#[test]
fn module_design_nested_calls_on_every_branch() {
    for k in 1..6 {
        let mut body = String::from("g();");
        for i in 0..k {
            body = format!("if (c{i}) {{ f{i}(); {body} }} else {{ h{i}(); }}");
        }
        let g = cfg_of(&format!("{{ {body} }}"));
        // acyclic: v equals the number of entry-exit paths
        assert_eq!(count_paths(&g, g.entry()), k + 1);
        assert_eq!(module_design(&g), k + 1);
        assert_eq!(cyclomatic(&g), k + 1);
    }
}

#[test]
fn module_design_without_calls_is_one() {
    let g = cfg_of("{ while (a) { if (b) break; x++; } }");
    assert_eq!(module_design(&g), 1);
    let g = cfg_of("{ if (a) { f(); } else { y = 2; } }");
    assert_eq!(module_design(&g), 2);
}

#[test]
fn two_method_class_wmc() {
    let src = "class Sample {
        void m1() { int i = 0; while (i < 10) { i++; } }
        void m2() { int x = 5; do { if (x % 2 == 0) { x--; } x--; } while (x > 0); }
    }";
    let f = parse_source(src, "Sample.java").unwrap();
    assert_eq!(f.classes.len(), 1);
    assert_eq!(f.classes[0].methods.len(), 2);
    let m = oometrics::model::build_system_model(&[f]).unwrap();
    let c = m.class("Sample").unwrap();
    let v: Vec<u32> = c.methods.iter().map(|m| cyclomatic(m.cfg.as_ref().unwrap())).collect();
    assert_eq!(v, vec![2, 3]);
    assert_eq!(class_wmc(c), 5);
}

#[test]
fn wmc_of_empty_and_abstract() {
    let m = SystemModel::from_json(
        r#"{"classes":[{"name":"E","kind":"class"},
            {"name":"A","kind":"abstract-class","methods":[{"name":"f","abstract":true},{"name":"g","abstract":true}]}]}"#,
    )
    .unwrap();
    assert_eq!(class_wmc(m.class("E").unwrap()), 0);
    assert_eq!(class_wmc(m.class("A").unwrap()), 2);
}

#[test]
fn quadrant_partition() {
    for v in 1..30 {
        for ev in 1..=v {
            let q = quadrant(v, ev);
            let expected = match (v > 10, ev > 4) {
                (true, true) => Quadrant::I,
                (false, true) => Quadrant::II,
                (false, false) => Quadrant::III,
                (true, false) => Quadrant::IV,
            };
            assert_eq!(q, expected);
        }
    }
}
