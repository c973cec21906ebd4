//! History metrics: method-count evolution (Yesterday's Weather) and
//! relative complexity churn between builds.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coupling::{logiscope_mnemonics, Mnemonic};
use crate::error::{Error, Result};
use crate::model::SystemModel;

/// Ordered versions of one system. Versions are numbered from 1.
#[derive(Debug, Clone)]
pub struct HistoryTimeline {
    versions: Vec<(String, SystemModel)>,
}

impl HistoryTimeline {
    pub fn new(versions: Vec<(String, SystemModel)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (id, _) in &versions {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidFacts(format!(
                    "version `{id}` appears twice in the history"
                )));
            }
        }
        Ok(HistoryTimeline { versions })
    }

    pub fn len(&self) -> usize {
        self.versions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.versions.is_empty()
    }

    pub fn version_ids(&self) -> impl Iterator<Item = &str> {
        self.versions.iter().map(|(id, _)| id.as_str())
    }

    /// Methods of `c` in version `i`; 0 when the class is absent.
    pub fn nom(&self, c: &str, i: usize) -> u32 {
        self.versions[i - 1]
            .1
            .class(c)
            .map_or(0, |class| class.methods.len() as u32)
    }

    /// System class names present in any version of `j..=k`.
    pub fn classes(&self, j: usize, k: usize) -> BTreeSet<String> {
        self.versions[j - 1..k]
            .iter()
            .flat_map(|(_, m)| m.system_classes().map(|c| c.name.clone()))
            .collect()
    }

    fn check(&self, j: usize, k: usize) -> Result<()> {
        if j < 1 || j >= k || k > self.versions.len() {
            return Err(Error::BadRange {
                j,
                k,
                len: self.versions.len(),
            });
        }
        Ok(())
    }

    fn step(&self, c: &str, i: usize) -> u32 {
        self.nom(c, i).abs_diff(self.nom(c, i - 1))
    }
}

pub fn enom(h: &HistoryTimeline, c: &str, j: usize, k: usize) -> Result<u32> {
    h.check(j, k)?;
    Ok((j + 1..=k).map(|i| h.step(c, i)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Weighting {
    /// Weight 2^(i-k): recent changes count most.
    Latest,
    /// Weight 2^(k-i+1): early changes count most.
    Earliest,
}

pub fn weighted_enom(h: &HistoryTimeline, c: &str, j: usize, k: usize, mode: Weighting) -> Result<f64> {
    h.check(j, k)?;
    Ok((j + 1..=k)
        .map(|i| {
            let e = match mode {
                Weighting::Latest => i as i32 - k as i32,
                Weighting::Earliest => k as i32 - i as i32 + 1,
            };
            h.step(c, i) as f64 * 2f64.powi(e)
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassEvolution {
    pub class: String,
    pub enom: u32,
    pub lenom: f64,
    pub eenom: f64,
}

/// Evolution values for every class seen in the window.
pub fn evolution_table(h: &HistoryTimeline, j: usize, k: usize) -> Result<Vec<ClassEvolution>> {
    h.check(j, k)?;
    h.classes(j, k)
        .into_iter()
        .map(|c| {
            Ok(ClassEvolution {
                enom: enom(h, &c, j, k)?,
                lenom: weighted_enom(h, &c, j, k, Weighting::Latest)?,
                eenom: weighted_enom(h, &c, j, k, Weighting::Earliest)?,
                class: c,
            })
        })
        .collect()
}

/// Classes ranked by recent change: LENOM descending, then ENOM
/// descending, then name.
pub fn yw_rank(h: &HistoryTimeline, j: usize, k: usize) -> Result<Vec<ClassEvolution>> {
    let mut rows = evolution_table(h, j, k)?;
    rows.sort_by(|a, b| {
        b.lenom
            .partial_cmp(&a.lenom)
            .unwrap_or(Ordering::Equal)
            .then(b.enom.cmp(&a.enom))
            .then_with(|| a.class.cmp(&b.class))
    });
    Ok(rows)
}

pub const DEFAULT_CHURN_COLUMNS: [Mnemonic; 5] = [
    Mnemonic::ClStat,
    Mnemonic::ClWmc,
    Mnemonic::ClFunc,
    Mnemonic::ClData,
    Mnemonic::CuCdused,
];

/// Raw metric values, one row per module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleMatrix {
    pub columns: Vec<String>,
    pub modules: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ModuleMatrix {
    pub fn new(columns: Vec<String>, modules: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if modules.len() != rows.len() || rows.iter().any(|r| r.len() != columns.len()) {
            return Err(Error::InvalidFacts("module matrix rows do not match its header".into()));
        }
        Ok(ModuleMatrix { columns, modules, rows })
    }
}

pub fn module_matrix(model: &SystemModel, columns: &[Mnemonic]) -> Result<ModuleMatrix> {
    let mut modules = Vec::new();
    let mut rows = Vec::new();
    for c in model.system_classes() {
        let m = logiscope_mnemonics(model, &c.name)?;
        modules.push(c.name.clone());
        rows.push(columns.iter().map(|&col| m.get(col).unwrap_or(0.0)).collect());
    }
    ModuleMatrix::new(columns.iter().map(|c| c.as_str().to_string()).collect(), modules, rows)
}

fn mean_sd(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Standardization and principal components fitted on a baseline build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub id: String,
    pub columns: Vec<String>,
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
    /// Retained eigenvalues, largest first.
    pub eigenvalues: Vec<f64>,
    /// Matching unit eigenvectors of the correlation matrix.
    pub components: Vec<Vec<f64>>,
    /// Mean and sample deviation of raw scores over the baseline build.
    pub raw_mean: f64,
    pub raw_sd: f64,
}

impl Baseline {
    /// Fits on `build`. Components with eigenvalue above 1 are kept; when
    /// none qualifies, the largest one is.
    pub fn fit(build: &ModuleMatrix) -> Result<Self> {
        let (n, p) = (build.rows.len(), build.columns.len());
        if p == 0 || n < 2 || n < p {
            return Err(Error::DegenerateBaseline(format!("{n} modules for {p} metrics")));
        }
        let mut mean = Vec::with_capacity(p);
        let mut sd = Vec::with_capacity(p);
        for j in 0..p {
            let (m, s) = mean_sd(build.rows.iter().map(|r| r[j]));
            if !(s > 1e-12) {
                return Err(Error::DegenerateBaseline(format!(
                    "metric `{}` has no variance",
                    build.columns[j]
                )));
            }
            mean.push(m);
            sd.push(s);
        }
        let z = DMatrix::from_fn(n, p, |i, j| (build.rows[i][j] - mean[j]) / sd[j]);
        let corr = (z.transpose() * &z) / (n as f64 - 1.0);
        let eig = SymmetricEigen::new(corr);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut keep: Vec<usize> = order.iter().copied().filter(|&i| eig.eigenvalues[i] > 1.0).collect();
        if keep.is_empty() {
            keep.push(order[0]);
        }
        let eigenvalues: Vec<f64> = keep.iter().map(|&i| eig.eigenvalues[i]).collect();
        let components: Vec<Vec<f64>> = keep
            .iter()
            .map(|&i| {
                let v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
                let lead = v
                    .iter()
                    .copied()
                    .fold(0.0, |a: f64, x| if x.abs() > a.abs() { x } else { a });
                if lead < 0.0 {
                    v.iter().map(|x| -x).collect()
                } else {
                    v
                }
            })
            .collect();
        let mut b = Baseline {
            id: String::new(),
            columns: build.columns.clone(),
            mean,
            sd,
            eigenvalues,
            components,
            raw_mean: 0.0,
            raw_sd: 1.0,
        };
        let raw = b.raw_scores(build)?;
        let (m, s) = mean_sd(raw.iter().copied());
        if !(s > 1e-12) {
            return Err(Error::DegenerateBaseline(
                "relative complexity has no spread on the baseline".into(),
            ));
        }
        b.raw_mean = m;
        b.raw_sd = s;
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(&b)?);
        b.id = hex::encode(&hasher.finalize()[..8]);
        Ok(b)
    }

    fn raw_scores(&self, build: &ModuleMatrix) -> Result<Vec<f64>> {
        if build.columns != self.columns {
            return Err(Error::BaselineMismatch(format!(
                "build columns {:?} differ from baseline columns {:?}",
                build.columns, self.columns
            )));
        }
        Ok(build
            .rows
            .iter()
            .map(|row| {
                let z: Vec<f64> = row
                    .iter()
                    .enumerate()
                    .map(|(j, x)| (x - self.mean[j]) / self.sd[j])
                    .collect();
                self.eigenvalues
                    .iter()
                    .zip(&self.components)
                    .map(|(l, v)| {
                        let d: f64 = z.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / l.sqrt();
                        l * d
                    })
                    .sum()
            })
            .collect())
    }
}

/// Relative complexity of each module, rescaled so the baseline build has
/// mean 50 and standard deviation 10.
pub fn relative_complexity(build: &ModuleMatrix, baseline: &Baseline) -> Result<Vec<f64>> {
    Ok(baseline
        .raw_scores(build)?
        .into_iter()
        .map(|r| 50.0 + 10.0 * (r - baseline.raw_mean) / baseline.raw_sd)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChurnBuildRecord {
    pub baseline_id: String,
    pub rho: BTreeMap<String, f64>,
    pub mean: f64,
    pub total: f64,
}

pub fn churn_record(build: &ModuleMatrix, baseline: &Baseline) -> Result<ChurnBuildRecord> {
    let rho: BTreeMap<String, f64> = build
        .modules
        .iter()
        .cloned()
        .zip(relative_complexity(build, baseline)?)
        .collect();
    let total: f64 = rho.values().sum();
    Ok(ChurnBuildRecord {
        baseline_id: baseline.id.clone(),
        mean: if rho.is_empty() { 0.0 } else { total / rho.len() as f64 },
        total,
        rho,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChurnVerdict {
    LaterMoreComplex,
    LaterLessComplex,
    Neutral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChurnComparison {
    pub r1: f64,
    pub r2: f64,
    pub verdict: ChurnVerdict,
    /// Removed modules.
    pub ma: Vec<String>,
    /// Added modules.
    pub mb: Vec<String>,
    /// Modules in both builds.
    pub mc: Vec<String>,
}

pub fn churn_compare(earlier: &ChurnBuildRecord, later: &ChurnBuildRecord) -> Result<ChurnComparison> {
    if earlier.baseline_id != later.baseline_id {
        return Err(Error::BaselineMismatch(format!(
            "builds scored against baselines {} and {}",
            earlier.baseline_id, later.baseline_id
        )));
    }
    let split = |a: &ChurnBuildRecord, b: &ChurnBuildRecord| -> Vec<String> {
        a.rho.keys().filter(|k| !b.rho.contains_key(*k)).cloned().collect()
    };
    let ma = split(earlier, later);
    let mb = split(later, earlier);
    let mc: Vec<String> = earlier
        .rho
        .keys()
        .filter(|k| later.rho.contains_key(*k))
        .cloned()
        .collect();
    let r1 = mc.iter().map(|m| earlier.rho[m]).sum::<f64>() + ma.iter().map(|m| earlier.rho[m]).sum::<f64>();
    let r2 = mc.iter().map(|m| later.rho[m]).sum::<f64>() + mb.iter().map(|m| later.rho[m]).sum::<f64>();
    let verdict = match r2.partial_cmp(&r1) {
        Some(Ordering::Greater) => ChurnVerdict::LaterMoreComplex,
        Some(Ordering::Less) => ChurnVerdict::LaterLessComplex,
        _ => ChurnVerdict::Neutral,
    };
    Ok(ChurnComparison {
        r1,
        r2,
        verdict,
        ma,
        mb,
        mc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn history(noms: &[u32]) -> HistoryTimeline {
        let versions = noms
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let methods: Vec<String> = (0..n).map(|k| format!(r#"{{"name":"m{k}"}}"#)).collect();
                let json = format!(
                    r#"{{"classes":[{{"name":"C","kind":"class","methods":[{}]}}]}}"#,
                    methods.join(",")
                );
                (format!("v{}", i + 1), SystemModel::from_json(&json).unwrap())
            })
            .collect();
        HistoryTimeline::new(versions).unwrap()
    }

    #[test]
    fn enom_and_weights() {
        let h = history(&[5, 7, 6, 6]);
        assert_eq!(enom(&h, "C", 1, 4).unwrap(), 3);
        assert_eq!(weighted_enom(&h, "C", 1, 4, Weighting::Earliest).unwrap(), 20.0);
        assert_eq!(
            weighted_enom(&h, "C", 1, 4, Weighting::Latest).unwrap(),
            2.0 * 0.25 + 0.5
        );
        assert_eq!(enom(&h, "Missing", 1, 4).unwrap(), 0);
        assert!(matches!(enom(&h, "C", 3, 3), Err(Error::BadRange { .. })));
        assert!(matches!(enom(&h, "C", 1, 5), Err(Error::BadRange { .. })));
    }

    #[test]
    fn single_late_change() {
        let h = history(&[2, 2, 2, 6]);
        assert_eq!(weighted_enom(&h, "C", 1, 4, Weighting::Latest).unwrap(), 4.0);
        let h = history(&[2, 6, 6, 6]);
        assert_eq!(weighted_enom(&h, "C", 1, 4, Weighting::Latest).unwrap(), 1.0);
    }

    #[test]
    fn baseline_rescales_to_fifty_ten() {
        let rows = vec![
            vec![1.0, 2.0, 0.5],
            vec![3.0, 1.0, 2.5],
            vec![4.0, 7.0, 1.0],
            vec![2.0, 5.0, 3.0],
            vec![9.0, 4.0, 0.0],
        ];
        let cols = vec!["a".into(), "b".into(), "c".into()];
        let mods = (0..5).map(|i| format!("M{i}")).collect();
        let m = ModuleMatrix::new(cols, mods, rows).unwrap();
        let b = Baseline::fit(&m).unwrap();
        let rho = relative_complexity(&m, &b).unwrap();
        let (mean, sd) = mean_sd(rho.iter().copied());
        assert!((mean - 50.0).abs() < 1e-9 && (sd - 10.0).abs() < 1e-9);
    }

    #[test]
    fn constant_column_rejected() {
        let m = ModuleMatrix::new(
            vec!["a".into(), "b".into()],
            vec!["x".into(), "y".into(), "z".into()],
            vec![vec![1.0, 3.0], vec![2.0, 3.0], vec![4.0, 3.0]],
        )
        .unwrap();
        assert!(matches!(Baseline::fit(&m), Err(Error::DegenerateBaseline(_))));
    }
}
