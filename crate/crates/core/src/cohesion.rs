//! Cohesion suite over the attribute-sharing and call graphs of a class's
//! methods. Constructors are left out; only attributes declared in the
//! class itself count.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ClassInfo;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LcomVariant {
    /// Pairs not sharing attributes minus pairs sharing, floored at 0.
    CK,
    /// Connected components over attribute sharing.
    LH,
    /// Connected components over attribute sharing and internal calls.
    HM,
    /// Henderson-Sellers ratio.
    HS,
}

impl LcomVariant {
    pub const ALL: [LcomVariant; 4] = [LcomVariant::CK, LcomVariant::LH, LcomVariant::HM, LcomVariant::HS];

    pub fn as_str(self) -> &'static str {
        match self {
            LcomVariant::CK => "CK",
            LcomVariant::LH => "LH",
            LcomVariant::HM => "HM",
            LcomVariant::HS => "HS",
        }
    }
}

/// Method nodes with their attribute sets and internal call edges.
#[derive(Debug, Clone, PartialEq)]
pub struct CohesionGraph {
    pub methods: Vec<String>,
    pub attributes: Vec<String>,
    /// `uses[i]` holds indices into `attributes`.
    pub uses: Vec<BTreeSet<usize>>,
    /// Undirected call edges `(i, j)` with `i < j`.
    pub calls: BTreeSet<(usize, usize)>,
}

impl CohesionGraph {
    pub fn of(c: &ClassInfo) -> Self {
        let attributes: Vec<String> = c.attributes.iter().map(|a| a.name.clone()).collect();
        let attr_index: BTreeMap<&str, usize> = attributes.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        let members: Vec<_> = c.methods.iter().filter(|m| !m.is_constructor).collect();
        let index: BTreeMap<(String, Vec<String>), usize> = members
            .iter()
            .enumerate()
            .map(|(i, m)| ((m.name.clone(), m.parameter_types.clone()), i))
            .collect();
        let uses = members
            .iter()
            .map(|m| {
                m.accessed_attributes
                    .iter()
                    .filter(|r| r.class == c.name)
                    .filter_map(|r| attr_index.get(r.member.as_str()).copied())
                    .collect()
            })
            .collect();
        let mut calls = BTreeSet::new();
        for (i, m) in members.iter().enumerate() {
            for inv in &m.invocations {
                if inv.target.class != c.name {
                    continue;
                }
                if let Some(&j) = index.get(&(inv.target.name.clone(), inv.target.params.clone())) {
                    if i != j {
                        calls.insert((i.min(j), i.max(j)));
                    }
                }
            }
        }
        CohesionGraph {
            methods: members.iter().map(|m| m.signature()).collect(),
            attributes,
            uses,
            calls,
        }
    }

    pub fn method_count(&self) -> usize {
        self.methods.len()
    }

    fn shares(&self, i: usize, j: usize) -> bool {
        !self.uses[i].is_disjoint(&self.uses[j])
    }

    /// Number of methods accessing each attribute.
    fn accessors(&self) -> Vec<usize> {
        let mut p = vec![0; self.attributes.len()];
        for u in &self.uses {
            for &a in u {
                p[a] += 1;
            }
        }
        p
    }

    fn components(&self, with_calls: bool) -> usize {
        let n = self.methods.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut union = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        };
        // attribute sharing joins every accessor of an attribute
        let mut first: Vec<Option<usize>> = vec![None; self.attributes.len()];
        for (i, u) in self.uses.iter().enumerate() {
            for &a in u {
                match first[a] {
                    Some(f) => union(f, i),
                    None => first[a] = Some(i),
                }
            }
        }
        if with_calls {
            for &(a, b) in &self.calls {
                union(a, b);
            }
        }
        (0..n).filter(|&i| find(&mut parent, i) == i).count()
    }
}

fn undefined(variant: &str, reason: impl Into<String>) -> Error {
    Error::Undefined {
        variant: variant.to_string(),
        reason: reason.into(),
    }
}

pub fn lcom(c: &ClassInfo, variant: LcomVariant) -> Result<f64> {
    lcom_of(&CohesionGraph::of(c), variant)
}

pub fn lcom_of(g: &CohesionGraph, variant: LcomVariant) -> Result<f64> {
    let m = g.method_count();
    let name = format!("LCOM-{}", variant.as_str());
    if m == 0 {
        return Err(undefined(&name, "class has no methods"));
    }
    match variant {
        LcomVariant::CK => {
            let (mut p, mut q) = (0i64, 0i64);
            for i in 0..m {
                for j in i + 1..m {
                    if g.shares(i, j) {
                        q += 1;
                    } else {
                        p += 1;
                    }
                }
            }
            Ok((p - q).max(0) as f64)
        }
        LcomVariant::LH => Ok(g.components(false) as f64),
        LcomVariant::HM => Ok(g.components(true) as f64),
        LcomVariant::HS => {
            let a = g.attributes.len();
            if m < 2 {
                return Err(undefined(&name, "needs at least two methods"));
            }
            if a == 0 {
                return Err(undefined(&name, "class has no attributes"));
            }
            let mean = g.accessors().iter().sum::<usize>() as f64 / a as f64;
            Ok((m as f64 - mean) / (m as f64 - 1.0))
        }
    }
}

/// Mean fraction of methods accessing each attribute.
pub fn coh(c: &ClassInfo) -> Result<f64> {
    coh_of(&CohesionGraph::of(c))
}

pub fn coh_of(g: &CohesionGraph) -> Result<f64> {
    let (m, a) = (g.method_count(), g.attributes.len());
    if m == 0 || a == 0 {
        return Err(undefined("Coh", "needs at least one method and one attribute"));
    }
    Ok(g.accessors().iter().sum::<usize>() as f64 / (m * a) as f64)
}

/// Tight and loose class cohesion.
pub fn tcc_lcc(c: &ClassInfo) -> Result<(f64, f64)> {
    tcc_lcc_of(&CohesionGraph::of(c))
}

pub fn tcc_lcc_of(g: &CohesionGraph) -> Result<(f64, f64)> {
    let m = g.method_count();
    if m < 2 {
        return Err(undefined("TCC/LCC", "needs at least two methods"));
    }
    let pairs = (m * (m - 1) / 2) as f64;
    let mut adj = vec![Vec::new(); m];
    let mut direct = 0usize;
    for i in 0..m {
        for j in i + 1..m {
            if g.shares(i, j) {
                direct += 1;
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    // pairs within each connected component
    let mut seen = vec![false; m];
    let mut indirect = 0usize;
    for s in 0..m {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut size = 0usize;
        while let Some(x) = stack.pop() {
            size += 1;
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        indirect += size * (size - 1) / 2;
    }
    Ok((direct as f64 / pairs, indirect as f64 / pairs))
}

/// Mean Jaccard similarity of the attribute sets over all method pairs.
pub fn similarity_cohesion(c: &ClassInfo) -> Result<f64> {
    similarity_cohesion_of(&CohesionGraph::of(c))
}

pub fn similarity_cohesion_of(g: &CohesionGraph) -> Result<f64> {
    let m = g.method_count();
    if m < 2 {
        return Err(undefined("SimCohesion", "needs at least two methods"));
    }
    let mut total = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            let union = g.uses[i].union(&g.uses[j]).count();
            if union > 0 {
                total += g.uses[i].intersection(&g.uses[j]).count() as f64 / union as f64;
            }
        }
    }
    Ok(total / (m * (m - 1) / 2) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(uses: &[&[usize]], attrs: usize) -> CohesionGraph {
        CohesionGraph {
            methods: (0..uses.len()).map(|i| format!("m{i}()")).collect(),
            attributes: (0..attrs).map(|i| format!("a{i}")).collect(),
            uses: uses.iter().map(|u| u.iter().copied().collect()).collect(),
            calls: BTreeSet::new(),
        }
    }

    #[test]
    fn maximal_cohesion() {
        let g = graph(&[&[0], &[0], &[0]], 1);
        assert_eq!(lcom_of(&g, LcomVariant::CK).unwrap(), 0.0);
        assert_eq!(lcom_of(&g, LcomVariant::LH).unwrap(), 1.0);
        assert_eq!(lcom_of(&g, LcomVariant::HM).unwrap(), 1.0);
        assert_eq!(lcom_of(&g, LcomVariant::HS).unwrap(), 0.0);
        assert_eq!(coh_of(&g).unwrap(), 1.0);
        assert_eq!(tcc_lcc_of(&g).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn minimal_cohesion() {
        let g = graph(&[&[0], &[1], &[2]], 3);
        assert_eq!(lcom_of(&g, LcomVariant::CK).unwrap(), 3.0);
        assert_eq!(lcom_of(&g, LcomVariant::LH).unwrap(), 3.0);
        assert_eq!(lcom_of(&g, LcomVariant::HS).unwrap(), 1.0);
        assert_eq!(tcc_lcc_of(&g).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn chain_tcc_lcc() {
        let g = graph(&[&[0], &[0, 1], &[1]], 2);
        let (t, l) = tcc_lcc_of(&g).unwrap();
        assert!((t - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(l, 1.0);
    }

    #[test]
    fn jaccard_pair() {
        let g = graph(&[&[0, 1], &[1, 2]], 3);
        assert!((similarity_cohesion_of(&g).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let same = graph(&[&[0, 1], &[0, 1]], 2);
        assert_eq!(similarity_cohesion_of(&same).unwrap(), 1.0);
    }

    #[test]
    fn call_edges_merge_components() {
        let mut g = graph(&[&[0], &[1]], 2);
        g.calls.insert((0, 1));
        assert_eq!(lcom_of(&g, LcomVariant::LH).unwrap(), 2.0);
        assert_eq!(lcom_of(&g, LcomVariant::HM).unwrap(), 1.0);
    }

    #[test]
    fn undefined_cases() {
        let one = graph(&[&[0]], 1);
        assert!(matches!(lcom_of(&one, LcomVariant::HS), Err(Error::Undefined { .. })));
        assert!(tcc_lcc_of(&one).is_err());
        assert!(similarity_cohesion_of(&one).is_err());
        assert!(coh_of(&graph(&[&[]], 0)).is_err());
        assert!(lcom_of(&graph(&[], 0), LcomVariant::CK).is_err());
    }
}
