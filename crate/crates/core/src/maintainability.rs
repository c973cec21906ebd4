//! Maintainability Index and the source-measurable legs of the SIG model.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complexity::{class_wmc, cyclomatic};
use crate::error::{Error, Result};
use crate::model::{ClassInfo, SystemModel};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Log2,
    Ln,
}

impl LogBase {
    fn apply(self, x: f64) -> f64 {
        match self {
            LogBase::Log2 => x.log2(),
            LogBase::Ln => x.ln(),
        }
    }
}

/// MI with base-2 logarithms. Without a comment percentage the sine term
/// is dropped.
pub fn maintainability_index(volume: f64, g: f64, loc: f64, cm: Option<f64>) -> Result<f64> {
    maintainability_index_with(volume, g, loc, cm, LogBase::Log2)
}

pub fn maintainability_index_with(volume: f64, g: f64, loc: f64, cm: Option<f64>, base: LogBase) -> Result<f64> {
    if !(volume > 0.0) {
        return Err(Error::Domain(format!("Halstead volume must be positive, got {volume}")));
    }
    if !(loc > 0.0) {
        return Err(Error::Domain(format!("line count must be positive, got {loc}")));
    }
    if !(g >= 1.0) {
        return Err(Error::Domain(format!(
            "cyclomatic complexity must be at least 1, got {g}"
        )));
    }
    let comments = match cm {
        None => 0.0,
        Some(p) if (0.0..=100.0).contains(&p) => 50.0 * (2.4 * p).sqrt().sin(),
        Some(p) => return Err(Error::Domain(format!("comment percent {p} is outside [0, 100]"))),
    };
    Ok(171.0 - 5.2 * base.apply(volume) - 0.23 * g - 16.2 * base.apply(loc) + comments)
}

/// MI of a class from its Halstead volume, WMC, lines and comment share.
/// `None` when the class has no measurable volume or no lines.
pub fn class_mi(c: &ClassInfo, base: LogBase) -> Option<f64> {
    let volume = match c.halstead {
        Some(h) => h.volume(),
        None => c.methods.iter().filter_map(|m| m.halstead).map(|h| h.volume()).sum(),
    };
    let loc = c.line_count as f64;
    let cm = (loc > 0.0).then(|| 100.0 * c.comment_lines as f64 / loc);
    maintainability_index_with(volume, class_wmc(c).max(1) as f64, loc, cm, base).ok()
}

/// Five-point SIG scale, best first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rating {
    #[serde(rename = "++")]
    DoublePlus,
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "o")]
    Neutral,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "--")]
    DoubleMinus,
}

impl Rating {
    pub const ALL: [Rating; 5] = [
        Rating::DoublePlus,
        Rating::Plus,
        Rating::Neutral,
        Rating::Minus,
        Rating::DoubleMinus,
    ];

    /// 5 for ++ down to 1 for --.
    pub fn score(self) -> u32 {
        5 - self as u32
    }

    fn from_score(s: u32) -> Rating {
        Rating::ALL[(5 - s.clamp(1, 5)) as usize]
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rating::DoublePlus => "++",
            Rating::Plus => "+",
            Rating::Neutral => "o",
            Rating::Minus => "-",
            Rating::DoubleMinus => "--",
        }
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Maximum share (percent) of code at moderate-or-worse, high-or-worse and
/// very-high risk allowed for one rating.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskProfileLimit {
    pub moderate: f64,
    pub high: f64,
    pub very_high: f64,
}

/// Band tables for the SIG legs. Each list is ordered from ++ to -; anything
/// beyond the last entry rates --.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigBands {
    /// Upper LOC limits.
    pub volume_loc: [f64; 4],
    /// Upper bounds of the low, moderate and high risk bands for v(G).
    pub complexity_risk: [u32; 3],
    /// Upper bounds of the low, moderate and high risk bands for method LOC.
    pub unit_size_risk: [u32; 3],
    pub risk_profile: [RiskProfileLimit; 4],
    /// Upper limits on the duplicated share in percent.
    pub duplication_percent: [f64; 4],
    /// Minimum length of a duplicated block in lines.
    pub duplication_block: usize,
}

impl Default for SigBands {
    fn default() -> Self {
        let lim = |moderate, high, very_high| RiskProfileLimit {
            moderate,
            high,
            very_high,
        };
        SigBands {
            volume_loc: [66_000.0, 246_000.0, 665_000.0, 1_310_000.0],
            complexity_risk: [10, 20, 50],
            unit_size_risk: [15, 30, 60],
            risk_profile: [
                lim(25.0, 0.0, 0.0),
                lim(30.0, 5.0, 0.0),
                lim(40.0, 10.0, 0.0),
                lim(50.0, 15.0, 5.0),
            ],
            duplication_percent: [3.0, 5.0, 10.0, 20.0],
            duplication_block: 6,
        }
    }
}

fn rate_upper(value: f64, limits: &[f64; 4]) -> Rating {
    limits
        .iter()
        .position(|&l| value <= l)
        .map_or(Rating::DoubleMinus, |i| Rating::ALL[i])
}

/// Cumulative percentages of weight at moderate-or-worse, high-or-worse and
/// very-high risk.
pub fn risk_profile(items: &[(u32, u32)], bands: [u32; 3]) -> [f64; 3] {
    let total: u64 = items.iter().map(|&(_, w)| w as u64).sum();
    if total == 0 {
        return [0.0; 3];
    }
    let share = |floor: u32| {
        let w: u64 = items.iter().filter(|&&(x, _)| x > floor).map(|&(_, w)| w as u64).sum();
        100.0 * w as f64 / total as f64
    };
    [share(bands[0]), share(bands[1]), share(bands[2])]
}

fn rate_profile(p: [f64; 3], limits: &[RiskProfileLimit; 4]) -> Rating {
    limits
        .iter()
        .position(|l| p[0] <= l.moderate && p[1] <= l.high && p[2] <= l.very_high)
        .map_or(Rating::DoubleMinus, |i| Rating::ALL[i])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Duplication {
    pub duplicated_lines: u64,
    pub total_lines: u64,
}

impl Duplication {
    pub fn percent(&self) -> f64 {
        if self.total_lines == 0 {
            0.0
        } else {
            100.0 * self.duplicated_lines as f64 / self.total_lines as f64
        }
    }
}

fn normalize(line: &str) -> String {
    line.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Lines lying in a block of at least `block` consecutive non-blank lines
/// that occurs more than once, within or across texts. Blank lines are
/// skipped and do not count towards the total.
pub fn duplication<S: AsRef<str>>(texts: &[S], block: usize) -> Duplication {
    let files: Vec<Vec<String>> = texts
        .iter()
        .map(|t| t.as_ref().lines().map(normalize).filter(|l| !l.is_empty()).collect())
        .collect();
    let total_lines = files.iter().map(|f| f.len() as u64).sum();
    if block == 0 {
        return Duplication {
            duplicated_lines: 0,
            total_lines,
        };
    }
    let mut windows: HashMap<&[String], Vec<(usize, usize)>> = HashMap::new();
    for (fi, f) in files.iter().enumerate() {
        for (start, w) in f.windows(block).enumerate() {
            windows.entry(w).or_default().push((fi, start));
        }
    }
    let mut marked: Vec<Vec<bool>> = files.iter().map(|f| vec![false; f.len()]).collect();
    for hits in windows.values().filter(|h| h.len() > 1) {
        for &(fi, start) in hits {
            marked[fi][start..start + block].iter_mut().for_each(|m| *m = true);
        }
    }
    Duplication {
        duplicated_lines: marked.iter().flatten().filter(|&&m| m).count() as u64,
        total_lines,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigRating {
    pub volume: Rating,
    pub complexity: Rating,
    pub unit_size: Rating,
    /// `None` when no source text was scanned.
    pub duplication: Option<Rating>,
    /// Always `None`: test data is out of reach of static analysis.
    pub unit_testing: Option<Rating>,
    pub overall: Rating,
    pub total_loc: u64,
    pub complexity_profile: [f64; 3],
    pub unit_size_profile: [f64; 3],
}

/// Lines of the system counted once: nested classes are covered by their
/// enclosing class.
fn system_loc(model: &SystemModel) -> u64 {
    model
        .system_classes()
        .filter(|c| {
            let mut outer = c.name.as_str();
            while let Some((head, _)) = outer.rsplit_once('.') {
                if model.is_system_class(head) {
                    return false;
                }
                outer = head;
            }
            true
        })
        .map(|c| c.line_count as u64)
        .sum()
}

pub fn sig_rating(model: &SystemModel, dup: Option<&Duplication>, bands: &SigBands) -> Result<SigRating> {
    if model.system_class_count() == 0 {
        return Err(Error::EmptyModel);
    }
    let units: Vec<(u32, u32)> = model
        .system_classes()
        .flat_map(|c| &c.methods)
        .filter(|m| m.has_body())
        .map(|m| (m.cfg.as_ref().map_or(1, cyclomatic), m.lines.max(1)))
        .collect();
    let complexity_profile = risk_profile(&units, bands.complexity_risk);
    let sizes: Vec<(u32, u32)> = units.iter().map(|&(_, loc)| (loc, loc)).collect();
    let unit_size_profile = risk_profile(&sizes, bands.unit_size_risk);

    let total_loc = system_loc(model);
    let volume = rate_upper(total_loc as f64, &bands.volume_loc);
    let complexity = rate_profile(complexity_profile, &bands.risk_profile);
    let unit_size = rate_profile(unit_size_profile, &bands.risk_profile);
    let duplication = dup.map(|d| rate_upper(d.percent(), &bands.duplication_percent));

    let defined: Vec<u32> = [Some(volume), Some(complexity), Some(unit_size), duplication]
        .into_iter()
        .flatten()
        .map(Rating::score)
        .collect();
    let mean = defined.iter().sum::<u32>() as f64 / defined.len() as f64;
    Ok(SigRating {
        volume,
        complexity,
        unit_size,
        duplication,
        unit_testing: None,
        overall: Rating::from_score(mean.round() as u32),
        total_loc,
        complexity_profile,
        unit_size_profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mi_unit_inputs() {
        let mi = maintainability_index(1.0, 1.0, 1.0, Some(0.0)).unwrap();
        assert!((mi - 170.77).abs() < 1e-12);
        let mi = maintainability_index(256.0, 10.0, 1024.0, Some(0.0)).unwrap();
        assert!((mi + 34.9).abs() < 1e-9);
        assert!(matches!(
            maintainability_index(0.0, 1.0, 1.0, None),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            maintainability_index(1.0, 1.0, -3.0, None),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn ln_option_changes_scale() {
        let a = maintainability_index_with(100.0, 3.0, 50.0, None, LogBase::Log2).unwrap();
        let b = maintainability_index_with(100.0, 3.0, 50.0, None, LogBase::Ln).unwrap();
        assert!(b > a);
    }

    #[test]
    fn rating_scores_round_trip() {
        for r in Rating::ALL {
            assert_eq!(Rating::from_score(r.score()), r);
        }
    }

    #[test]
    fn repeated_block_detected() {
        let block: String = (0..6).map(|i| format!("x{i} = {i};\n")).collect();
        let text = format!("{block}other();\n{block}");
        let d = duplication(&[text.as_str()], 6);
        assert_eq!((d.duplicated_lines, d.total_lines), (12, 13));
        let short: String = (0..5).map(|i| format!("y{i};\n")).collect();
        assert_eq!(duplication(&[short.as_str(), short.as_str()], 6).duplicated_lines, 0);
    }
}
