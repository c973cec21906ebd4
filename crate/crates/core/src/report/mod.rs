//! Pipeline from inputs to a [`QualityReport`], plus the text, SVG and CSV
//! renderings.

mod config;
mod scatter;
mod svg;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::complexity::{quadrant_with, Quadrant};
use crate::coupling::coupling_factor;
use crate::error::{Error, Result};
use crate::evolution::{evolution_table, ClassEvolution, HistoryTimeline};
use crate::maintainability::{class_mi, duplication, sig_rating, Duplication, SigRating};
use crate::model::{FactsFile, SystemModel};
use crate::mood::{mood, MoodFactors};
use crate::parser::parse_bytes;
use crate::qmood::{
    property_vector, qmood_system_metrics, quality_indices, PropertyVector, QmoodSystemMetrics, QualityIndices,
};
use crate::quality::{
    criteria, kiviat_rows, maintainability, recommendations, Advice, Category, Criterion, CriterionResult, KiviatRow,
};
use crate::record::{class_record, ClassMetricsRecord};

pub use config::Config;
pub use scatter::{emit_scatter, method_points, MethodPoint, ScatterOutput};
pub use svg::emit_kiviat_svg;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseIssue {
    pub path: String,
    pub message: String,
}

/// A resolved model with what is needed to report on it.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub model: SystemModel,
    pub inputs: Vec<String>,
    /// Source texts, for the duplication scan. Empty for facts input.
    pub sources: Vec<String>,
    pub parse_errors: Vec<ParseIssue>,
}

fn is_java(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "java")
}

/// Java files under the given paths, sorted and deduplicated.
pub fn collect_sources(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for root in paths {
        if !root.exists() {
            return Err(Error::Io(format!("{}: no such file or directory", root.display())));
        }
        for entry in WalkDir::new(root).follow_links(true) {
            let entry = entry.map_err(|e| Error::Io(e.to_string()))?;
            if entry.file_type().is_file() && is_java(entry.path()) {
                files.push(entry.into_path());
            }
        }
    }
    files.sort();
    files.dedup();
    if files.is_empty() {
        return Err(Error::NoInput);
    }
    Ok(files)
}

/// Parses every Java file under `paths`. Files that fail to parse are
/// recorded and skipped.
pub fn analyze_sources(paths: &[PathBuf]) -> Result<Analysis> {
    let files = collect_sources(paths)?;
    let parsed: Vec<_> = files
        .par_iter()
        .map(|f| {
            let name = f.display().to_string();
            let bytes = std::fs::read(f).map_err(|e| Error::Io(format!("{name}: {e}")))?;
            let facts = parse_bytes(&bytes, &name);
            Ok((name, String::from_utf8_lossy(&bytes).into_owned(), facts))
        })
        .collect::<Result<_>>()?;
    let mut classes = Vec::new();
    let mut sources = Vec::new();
    let mut parse_errors = Vec::new();
    let mut inputs = Vec::new();
    let mut first_error = None;
    for (name, text, facts) in parsed {
        match facts {
            Ok(f) => {
                classes.extend(f.classes);
                sources.push(text);
            }
            Err(e) => {
                parse_errors.push(ParseIssue {
                    path: name.clone(),
                    message: e.to_string(),
                });
                first_error.get_or_insert(e);
            }
        }
        inputs.push(name);
    }
    // nothing parsed: the parse failure is the real error
    if classes.is_empty() {
        if let Some(e) = first_error {
            return Err(e);
        }
    }
    Ok(Analysis {
        model: SystemModel::from_facts(FactsFile { classes })?,
        inputs,
        sources,
        parse_errors,
    })
}

pub fn load_facts(path: &Path) -> Result<SystemModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    SystemModel::from_json(&text)
}

pub fn analyze_facts(path: &Path) -> Result<Analysis> {
    Ok(Analysis {
        model: load_facts(path)?,
        inputs: vec![path.display().to_string()],
        sources: Vec::new(),
        parse_errors: Vec::new(),
    })
}

/// History from a directory of facts files, one per version, ordered by
/// file name. The version id is the file name up to its first dot.
pub fn load_history(dir: &Path) -> Result<HistoryTimeline> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::NoInput);
    }
    let versions = files
        .iter()
        .map(|f| {
            let name = f.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            let id = name.split('.').next().unwrap_or(name).to_string();
            Ok((id, load_facts(f)?))
        })
        .collect::<Result<_>>()?;
    HistoryTimeline::new(versions)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub record: ClassMetricsRecord,
    pub criteria: Vec<CriterionResult>,
    pub maintainability: Category,
    pub kiviat: Vec<KiviatRow>,
    pub advice: Vec<Advice>,
    /// CK measures above their class thresholds.
    pub ck_flags: Vec<String>,
    pub mi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub class: String,
    pub method: String,
    pub v: u32,
    pub ev: u32,
    pub iv: u32,
    pub quadrant: Quadrant,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    pub classes: usize,
    pub qmood: Option<QmoodSystemMetrics>,
    pub properties: Option<PropertyVector>,
    /// Only with a baseline to normalize against.
    pub quality_indices: Option<QualityIndices>,
    pub mood: Option<MoodFactors>,
    pub coupling_factor: Option<f64>,
    pub sig: Option<SigRating>,
    pub duplication: Option<Duplication>,
    pub mi_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: BTreeMap<Category, u32>,
    pub percentages: BTreeMap<Category, f64>,
}

impl Histogram {
    pub fn of(categories: impl Iterator<Item = Category>) -> Self {
        let mut counts: BTreeMap<Category, u32> = Category::ALL.iter().map(|&c| (c, 0)).collect();
        for c in categories {
            *counts.entry(c).or_default() += 1;
        }
        let total: u32 = counts.values().sum();
        let percentages = counts
            .iter()
            .map(|(&c, &n)| {
                (
                    c,
                    if total == 0 {
                        0.0
                    } else {
                        100.0 * n as f64 / total as f64
                    },
                )
            })
            .collect();
        Histogram { counts, percentages }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionSection {
    pub versions: Vec<String>,
    pub classes: Vec<ClassEvolution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QualityReport {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub config_fingerprint: String,
    pub inputs: Vec<String>,
    pub parse_errors: Vec<ParseIssue>,
    /// Set when some inputs could not be parsed.
    pub partial: bool,
    pub classes: Vec<ClassReport>,
    pub methods: Vec<MethodReport>,
    pub system: SystemReport,
    /// Keyed by "Maintainability" and the criterion names.
    pub histograms: BTreeMap<String, Histogram>,
    pub evolution: Option<EvolutionSection>,
}

impl QualityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn ck_flags(r: &ClassMetricsRecord, cfg: &Config) -> Vec<String> {
    let t = &cfg.ranges.class;
    [
        ("CBO", r.cbo, t.cbo),
        ("WMC", r.wmc, t.wmc),
        ("RFC", r.rfc, t.rfc),
        ("DIT", r.dit, t.dit),
        ("NOC", r.noc, t.noc),
    ]
    .into_iter()
    .filter(|&(_, v, max)| v > max)
    .map(|(n, _, _)| n.to_string())
    .collect()
}

fn class_report(model: &SystemModel, name: &str, cfg: &Config) -> Result<ClassReport> {
    let record = class_record(model, name)?;
    let crit = criteria(&cfg.ranges, &record.logiscope)?;
    let kiviat = kiviat_rows(&cfg.ranges, &record.logiscope)?;
    Ok(ClassReport {
        maintainability: maintainability(&crit),
        advice: recommendations(&kiviat),
        ck_flags: ck_flags(&record, cfg),
        mi: class_mi(model.class(name)?, cfg.mi_base),
        criteria: crit,
        kiviat,
        record,
    })
}

pub fn build_report(
    analysis: &Analysis,
    cfg: &Config,
    baseline: Option<&SystemModel>,
    history: Option<&HistoryTimeline>,
) -> Result<QualityReport> {
    let model = &analysis.model;
    let names: Vec<&str> = model.system_classes().map(|c| c.name.as_str()).collect();
    let classes: Vec<ClassReport> = names
        .par_iter()
        .map(|c| class_report(model, c, cfg))
        .collect::<Result<_>>()?;
    let methods = method_points(model)
        .into_iter()
        .map(|p| MethodReport {
            quadrant: quadrant_with(p.v, p.ev, &cfg.ranges.method),
            class: p.class,
            method: p.method,
            v: p.v,
            ev: p.ev,
            iv: p.iv,
        })
        .collect();

    let dup = (!analysis.sources.is_empty()).then(|| duplication(&analysis.sources, cfg.sig.duplication_block));
    let mis: Vec<f64> = classes.iter().filter_map(|c| c.mi).collect();
    let indices = match baseline {
        Some(b) => {
            let base = property_vector(b, None)?;
            property_vector(model, Some(&base))
                .ok()
                .and_then(|p| quality_indices(&p).ok())
        }
        None => None,
    };
    let system = SystemReport {
        classes: names.len(),
        qmood: qmood_system_metrics(model).ok(),
        properties: property_vector(model, None).ok(),
        quality_indices: indices,
        mood: mood(model).ok(),
        coupling_factor: coupling_factor(model).ok(),
        sig: sig_rating(model, dup.as_ref(), &cfg.sig).ok(),
        duplication: dup,
        mi_mean: (!mis.is_empty()).then(|| mis.iter().sum::<f64>() / mis.len() as f64),
    };

    let mut histograms = BTreeMap::new();
    histograms.insert(
        "Maintainability".to_string(),
        Histogram::of(classes.iter().map(|c| c.maintainability)),
    );
    for (i, crit) in Criterion::ALL.iter().enumerate() {
        histograms.insert(
            crit.as_str().to_string(),
            Histogram::of(classes.iter().map(|c| c.criteria[i].category)),
        );
    }

    let evolution = match history {
        Some(h) if h.len() >= 2 => Some(EvolutionSection {
            versions: h.version_ids().map(str::to_string).collect(),
            classes: evolution_table(h, 1, h.len())?,
        }),
        Some(h) => {
            return Err(Error::BadRange {
                j: 1,
                k: h.len(),
                len: h.len(),
            })
        }
        None => None,
    };

    Ok(QualityReport {
        schema_version: SCHEMA_VERSION,
        tool: "oometrics".into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config_fingerprint: cfg.fingerprint.clone(),
        inputs: analysis.inputs.clone(),
        partial: !analysis.parse_errors.is_empty(),
        parse_errors: analysis.parse_errors.clone(),
        classes,
        methods,
        system,
        histograms,
        evolution,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.2}"))
}

/// Plain-text summary of a report.
pub fn render_text(r: &QualityReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} (schema {})", r.tool, r.tool_version, r.schema_version);
    let _ = writeln!(out, "classes: {}  methods: {}", r.system.classes, r.methods.len());
    for e in &r.parse_errors {
        let _ = writeln!(out, "parse error: {}: {}", e.path, e.message);
    }
    let _ = writeln!(out);
    for (level, h) in &r.histograms {
        let parts: Vec<String> = Category::ALL
            .iter()
            .map(|c| format!("{} {} ({:.1}%)", c, h.counts[c], h.percentages[c]))
            .collect();
        let _ = writeln!(out, "{level:<16} {}", parts.join("  "));
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<40} {:>5} {:>5} {:>5} {:>4} {:>4}  maintainability",
        "class", "CBO", "RFC", "WMC", "DIT", "NOC"
    );
    for c in &r.classes {
        let m = &c.record;
        let _ = writeln!(
            out,
            "{:<40} {:>5} {:>5} {:>5} {:>4} {:>4}  {}",
            m.class, m.cbo, m.rfc, m.wmc, m.dit, m.noc, c.maintainability
        );
        for a in &c.advice {
            let _ = writeln!(out, "    {}: {}", a.mnemonic, a.text);
        }
    }
    let s = &r.system;
    let _ = writeln!(out);
    let _ = writeln!(out, "coupling factor: {}", opt(s.coupling_factor));
    if let Some(m) = &s.mood {
        let _ = writeln!(
            out,
            "MOOD: MHF {} AHF {} MIF {} AIF {} PF {}",
            opt(m.mhf),
            opt(m.ahf),
            opt(m.mif),
            opt(m.aif),
            opt(m.pf)
        );
    }
    if let Some(q) = &s.quality_indices {
        let _ = writeln!(out, "QMOOD TQI: {:.3}", q.tqi);
    }
    if let Some(sig) = &s.sig {
        let dup = sig.duplication.map_or("n/a".to_string(), |d| d.to_string());
        let _ = writeln!(
            out,
            "SIG: volume {} complexity {} unit size {} duplication {} overall {}",
            sig.volume, sig.complexity, sig.unit_size, dup, sig.overall
        );
    }
    let _ = writeln!(out, "mean MI: {}", opt(s.mi_mean));
    if let Some(ev) = &r.evolution {
        let _ = writeln!(out);
        let _ = writeln!(out, "evolution over {}", ev.versions.join(" -> "));
        for c in &ev.classes {
            let _ = writeln!(
                out,
                "    {:<40} ENOM {:>3} LENOM {:>7.3} EENOM {:>8.1}",
                c.class, c.enom, c.lenom, c.eenom
            );
        }
    }
    out
}
