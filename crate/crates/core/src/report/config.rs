//! TOML configuration: acceptable ranges, thresholds, SIG bands, churn
//! columns and the QMOOD baseline.
//!
//! ```toml
//! [ranges]
//! cl_comf = { min = 0.2, max = "inf" }
//! cl_wmc = { max = 80 }
//!
//! [thresholds.class]
//! cbo = 3
//!
//! [thresholds.method]
//! v = 15
//!
//! [sig]
//! duplication_block = 8
//!
//! [churn]
//! columns = ["cl_stat", "cl_wmc"]
//!
//! [qmood]
//! baseline = "baseline.facts.json"
//!
//! [mi]
//! log_base = "ln"
//! ```
//!
//! Every section and key is optional; missing values keep their defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::complexity::MethodThresholds;
use crate::coupling::Mnemonic;
use crate::error::{Error, Result};
use crate::evolution::DEFAULT_CHURN_COLUMNS;
use crate::maintainability::{LogBase, RiskProfileLimit, SigBands};
use crate::quality::{bound, ClassThresholds, Range, RangeTable};

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub ranges: RangeTable,
    pub sig: SigBands,
    pub churn_columns: Vec<Mnemonic>,
    pub qmood_baseline: Option<PathBuf>,
    pub mi_base: LogBase,
    /// Hex SHA-256 of the configuration text; of the empty string for defaults.
    pub fingerprint: String,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            ranges: RangeTable::default(),
            sig: SigBands::default(),
            churn_columns: DEFAULT_CHURN_COLUMNS.to_vec(),
            qmood_baseline: None,
            mi_base: LogBase::Log2,
            fingerprint: fingerprint(""),
        }
    }
}

fn fingerprint(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    ranges: BTreeMap<Mnemonic, RawRange>,
    #[serde(default)]
    thresholds: RawThresholds,
    sig: Option<RawSig>,
    churn: Option<RawChurn>,
    qmood: Option<RawQmood>,
    mi: Option<RawMi>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    #[serde(default, deserialize_with = "opt_bound")]
    min: Option<f64>,
    #[serde(default, deserialize_with = "opt_bound")]
    max: Option<f64>,
}

fn opt_bound<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    bound::deserialize(d).map(Some)
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawThresholds {
    class: Option<RawClassThresholds>,
    method: Option<RawMethodThresholds>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClassThresholds {
    cbo: Option<u32>,
    wmc: Option<u32>,
    rfc: Option<u32>,
    dit: Option<u32>,
    noc: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMethodThresholds {
    v: Option<u32>,
    ev: Option<u32>,
    iv: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSig {
    volume_loc: Option<[f64; 4]>,
    complexity_risk: Option<[u32; 3]>,
    unit_size_risk: Option<[u32; 3]>,
    /// Rows of [moderate, high, very_high] from ++ to -.
    risk_profile: Option<[[f64; 3]; 4]>,
    duplication_percent: Option<[f64; 4]>,
    duplication_block: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChurn {
    columns: Vec<Mnemonic>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQmood {
    baseline: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMi {
    log_base: LogBase,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line of the first line whose key is `key`, or 0.
fn key_line(text: &str, key: &str) -> usize {
    text.lines()
        .position(|l| {
            l.trim_start()
                .strip_prefix(key)
                .is_some_and(|r| r.trim_start().starts_with('='))
        })
        .map_or(0, |i| i + 1)
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config {
            line: e.span().map_or(0, |s| line_of(text, s.start)),
            message: e.message().to_string(),
        })?;
        let mut cfg = Config::default();
        for (m, r) in raw.ranges {
            let old = cfg.ranges.ranges[&m];
            let new = Range::new(r.min.unwrap_or(old.min), r.max.unwrap_or(old.max)).map_err(|_| Error::Config {
                line: key_line(text, m.as_str()),
                message: format!("range for {m} has min above max"),
            })?;
            cfg.ranges.ranges.insert(m, new);
        }
        if let Some(c) = raw.thresholds.class {
            let d = ClassThresholds::default();
            cfg.ranges.class = ClassThresholds {
                cbo: c.cbo.unwrap_or(d.cbo),
                wmc: c.wmc.unwrap_or(d.wmc),
                rfc: c.rfc.unwrap_or(d.rfc),
                dit: c.dit.unwrap_or(d.dit),
                noc: c.noc.unwrap_or(d.noc),
            };
        }
        if let Some(m) = raw.thresholds.method {
            let d = MethodThresholds::default();
            cfg.ranges.method = MethodThresholds {
                v: m.v.unwrap_or(d.v),
                ev: m.ev.unwrap_or(d.ev),
                iv: m.iv.unwrap_or(d.iv),
            };
        }
        if let Some(s) = raw.sig {
            let b = &mut cfg.sig;
            if let Some(v) = s.volume_loc {
                b.volume_loc = v;
            }
            if let Some(v) = s.complexity_risk {
                b.complexity_risk = v;
            }
            if let Some(v) = s.unit_size_risk {
                b.unit_size_risk = v;
            }
            if let Some(rows) = s.risk_profile {
                b.risk_profile = rows.map(|[moderate, high, very_high]| RiskProfileLimit {
                    moderate,
                    high,
                    very_high,
                });
            }
            if let Some(v) = s.duplication_percent {
                b.duplication_percent = v;
            }
            if let Some(v) = s.duplication_block {
                if v == 0 {
                    return Err(Error::Config {
                        line: key_line(text, "duplication_block"),
                        message: "duplication_block must be positive".into(),
                    });
                }
                b.duplication_block = v;
            }
        }
        if let Some(c) = raw.churn {
            if c.columns.is_empty() {
                return Err(Error::Config {
                    line: key_line(text, "columns"),
                    message: "churn needs at least one column".into(),
                });
            }
            cfg.churn_columns = c.columns;
        }
        cfg.qmood_baseline = raw.qmood.map(|q| q.baseline);
        if let Some(mi) = raw.mi {
            cfg.mi_base = mi.log_base;
        }
        cfg.fingerprint = fingerprint(text);
        Ok(cfg)
    }

    /// Reads a config file. A relative QMOOD baseline path resolves against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Config::from_toml_str(&text)?;
        if let (Some(b), Some(dir)) = (&cfg.qmood_baseline, path.parent()) {
            if b.is_relative() {
                cfg.qmood_baseline = Some(dir.join(b));
            }
        }
        Ok(cfg)
    }
}
