//! Per-method control-flow graphs.
//!
//! A graph is a directed multigraph over basic blocks with exactly one
//! `entry` and one `exit` node. Parallel edges are allowed (a `switch` with
//! two labels on the same arm, an `if` with an empty branch) and self-loops
//! appear for loops with an empty body.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Entry,
    Exit,
    Plain,
    Decision,
    LoopHead,
    SwitchHead,
    /// Straight-line block containing at least one call.
    Call,
    /// A `return`/`throw` that leaves the method before the end of its body.
    /// These blocks are never absorbed by structural reduction.
    Return,
    /// Block ending in `break`/`continue` that leaves a loop.
    Jump,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Entry => "entry",
            NodeKind::Exit => "exit",
            NodeKind::Plain => "plain",
            NodeKind::Decision => "decision",
            NodeKind::LoopHead => "loop-head",
            NodeKind::SwitchHead => "switch-head",
            NodeKind::Call => "call",
            NodeKind::Return => "return",
            NodeKind::Jump => "jump",
        }
    }
}

/// Wire form used in facts files: `{ "nodes": n, "edges": [[from,to]], "kinds": [...] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CfgRepr {
    nodes: usize,
    edges: Vec<[usize; 2]>,
    kinds: Vec<NodeKind>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    calls: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CfgRepr", into = "CfgRepr")]
pub struct ControlFlowGraph {
    kinds: Vec<NodeKind>,
    edges: Vec<(usize, usize)>,
    calls: BTreeSet<usize>,
    entry: usize,
    exit: usize,
}

impl TryFrom<CfgRepr> for ControlFlowGraph {
    type Error = Error;

    fn try_from(r: CfgRepr) -> Result<Self> {
        if r.kinds.len() != r.nodes {
            return Err(Error::MalformedGraph(format!(
                "{} nodes declared but {} kinds given",
                r.nodes,
                r.kinds.len()
            )));
        }
        ControlFlowGraph::new(
            r.kinds,
            r.edges.into_iter().map(|[a, b]| (a, b)).collect(),
            r.calls.into_iter().collect(),
        )
    }
}

impl From<ControlFlowGraph> for CfgRepr {
    fn from(g: ControlFlowGraph) -> Self {
        CfgRepr {
            nodes: g.kinds.len(),
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
            kinds: g.kinds,
            calls: g.calls.into_iter().collect(),
        }
    }
}

impl ControlFlowGraph {
    /// Builds and validates a graph. Nodes of kind [`NodeKind::Call`] are
    /// added to the call set automatically.
    pub fn new(kinds: Vec<NodeKind>, edges: Vec<(usize, usize)>, calls: BTreeSet<usize>) -> Result<Self> {
        let n = kinds.len();
        let find_one = |kind: NodeKind| -> Result<usize> {
            let mut it = kinds.iter().enumerate().filter(|(_, k)| **k == kind);
            match (it.next(), it.next()) {
                (Some((i, _)), None) => Ok(i),
                (None, _) => Err(Error::MalformedGraph(format!("no {} node", kind.as_str()))),
                _ => Err(Error::MalformedGraph(format!("more than one {} node", kind.as_str()))),
            }
        };
        let entry = find_one(NodeKind::Entry)?;
        let exit = find_one(NodeKind::Exit)?;
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::MalformedGraph(format!("edge {a}->{b} out of range")));
        }
        if let Some(&c) = calls.iter().find(|&&c| c >= n) {
            return Err(Error::MalformedGraph(format!("call node {c} out of range")));
        }
        let mut calls = calls;
        calls.extend(
            kinds
                .iter()
                .enumerate()
                .filter(|(_, k)| **k == NodeKind::Call)
                .map(|(i, _)| i),
        );
        let g = ControlFlowGraph {
            kinds,
            edges,
            calls,
            entry,
            exit,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.edges.iter().any(|&(_, b)| b == self.entry) {
            return Err(Error::MalformedGraph("entry node has incoming edges".into()));
        }
        if self.edges.iter().any(|&(a, _)| a == self.exit) {
            return Err(Error::MalformedGraph("exit node has outgoing edges".into()));
        }
        let fwd = self.reach(self.entry, false);
        if let Some(i) = fwd.iter().position(|r| !r) {
            return Err(Error::MalformedGraph(format!("node {i} unreachable from entry")));
        }
        let back = self.reach(self.exit, true);
        if let Some(i) = back.iter().position(|r| !r) {
            return Err(Error::MalformedGraph(format!("exit unreachable from node {i}")));
        }
        Ok(())
    }

    fn reach(&self, start: usize, reverse: bool) -> Vec<bool> {
        let n = self.kinds.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            if reverse {
                adj[b].push(a);
            } else {
                adj[a].push(b);
            }
        }
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn entry(&self) -> usize {
        self.entry
    }

    pub fn exit(&self) -> usize {
        self.exit
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    pub fn kind(&self, node: usize) -> NodeKind {
        self.kinds[node]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn call_nodes(&self) -> &BTreeSet<usize> {
        &self.calls
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|&&(a, _)| a == node).count()
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|&&(_, b)| b == node).count()
    }

    pub fn successors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |&&(a, _)| a == node).map(|&(_, b)| b)
    }

    /// Number of nodes with more than one outgoing edge, weighted by the
    /// extra outcomes each contributes.
    pub fn decision_outcomes(&self) -> usize {
        (0..self.node_count())
            .map(|n| self.out_degree(n).saturating_sub(1))
            .sum()
    }

    /// A straight-line graph `entry -> exit`.
    pub fn trivial() -> Self {
        ControlFlowGraph::new(vec![NodeKind::Entry, NodeKind::Exit], vec![(0, 1)], BTreeSet::new())
            .expect("trivial graph is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unreachable_node() {
        let err = ControlFlowGraph::new(
            vec![NodeKind::Entry, NodeKind::Exit, NodeKind::Plain],
            vec![(0, 1), (2, 1)],
            BTreeSet::new(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::MalformedGraph(_)));
    }

    #[test]
    fn rejects_dead_end() {
        let err = ControlFlowGraph::new(
            vec![NodeKind::Entry, NodeKind::Exit, NodeKind::Plain],
            vec![(0, 1), (0, 2)],
            BTreeSet::new(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::MalformedGraph(_)));
    }

    #[test]
    fn rejects_two_entries() {
        let err = ControlFlowGraph::new(
            vec![NodeKind::Entry, NodeKind::Exit, NodeKind::Entry],
            vec![(0, 1), (2, 1)],
            BTreeSet::new(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::MalformedGraph(_)));
    }

    #[test]
    fn wire_format() {
        let g = ControlFlowGraph::new(
            vec![NodeKind::Entry, NodeKind::Exit, NodeKind::Call],
            vec![(0, 2), (2, 1)],
            BTreeSet::new(),
        )
        .unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"nodes":3,"edges":[[0,2],[2,1]],"kinds":["entry","exit","call"],"calls":[2]}"#
        );
        let back: ControlFlowGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn kind_count_mismatch_is_malformed() {
        let r: std::result::Result<ControlFlowGraph, _> =
            serde_json::from_str(r#"{"nodes":3,"edges":[[0,1]],"kinds":["entry","exit"]}"#);
        assert!(r.is_err());
    }
}
