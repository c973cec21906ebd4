//! Three-level quality evaluation: metric status against acceptable ranges,
//! criteria, the maintainability factor, Kiviat rows and advice.
//!
//! How constituent statuses combine into a criterion category, and how
//! criteria combine into the factor, is a stand-in scheme: a criterion is
//! EXCELLENT with no constituent out of range, GOOD with one, FAIR with
//! two and POOR with more; the factor sums 3/2/1/0 points per criterion and
//! bands the total as 11+, 8-10, 5-7, 0-4.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complexity::MethodThresholds;
use crate::coupling::{LogiscopeMetrics, Mnemonic};
use crate::error::{Error, Result};

/// Closed interval; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    #[serde(with = "bound")]
    pub min: f64,
    #[serde(with = "bound")]
    pub max: f64,
}

impl Range {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if min.is_nan() || max.is_nan() || min > max {
            return Err(Error::Config {
                line: 0,
                message: format!("range [{min}, {max}] is empty"),
            });
        }
        Ok(Range { min, max })
    }

    pub fn contains(&self, v: f64) -> bool {
        self.min <= v && v <= self.max
    }
}

/// Infinite bounds serialize as the strings "inf" and "-inf".
pub mod bound {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) => parse(&t).ok_or_else(|| serde::de::Error::custom(format!("bad bound `{t}`"))),
        }
    }

    pub fn parse(t: &str) -> Option<f64> {
        match t.trim() {
            "inf" | "+inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            other => other.parse().ok(),
        }
    }
}

/// Class-level thresholds for the CK measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassThresholds {
    pub cbo: u32,
    pub wmc: u32,
    pub rfc: u32,
    pub dit: u32,
    pub noc: u32,
}

impl Default for ClassThresholds {
    fn default() -> Self {
        ClassThresholds {
            cbo: 2,
            wmc: 14,
            rfc: 100,
            dit: 7,
            noc: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeTable {
    pub ranges: BTreeMap<Mnemonic, Range>,
    pub class: ClassThresholds,
    pub method: MethodThresholds,
}

impl Default for RangeTable {
    fn default() -> Self {
        let inf = f64::INFINITY;
        let table = [
            (Mnemonic::ClComf, 0.2, inf),
            (Mnemonic::ClComm, -inf, inf),
            (Mnemonic::ClData, 0.0, 7.0),
            (Mnemonic::ClDataPubl, 0.0, 0.0),
            (Mnemonic::ClFunc, 0.0, 25.0),
            (Mnemonic::ClFuncPubl, 0.0, 15.0),
            (Mnemonic::ClLine, -inf, inf),
            (Mnemonic::ClStat, 0.0, 100.0),
            (Mnemonic::ClWmc, 0.0, 60.0),
            (Mnemonic::CuCdused, 0.0, 10.0),
            (Mnemonic::CuCdusers, 0.0, 5.0),
            (Mnemonic::InBases, 0.0, 3.0),
            (Mnemonic::InNoc, 0.0, 3.0),
        ];
        RangeTable {
            ranges: table.into_iter().map(|(m, min, max)| (m, Range { min, max })).collect(),
            class: ClassThresholds::default(),
            method: MethodThresholds::default(),
        }
    }
}

impl RangeTable {
    pub fn range(&self, m: Mnemonic) -> Result<Range> {
        self.ranges
            .get(&m)
            .copied()
            .ok_or_else(|| Error::UnknownMnemonic(m.as_str().to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Side {
    Low,
    In,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Status {
    /// 0 in range, -1 outside.
    pub code: i8,
    pub side: Side,
}

impl Status {
    pub fn in_range(self) -> bool {
        self.code == 0
    }

    fn of(r: Range, value: Option<f64>) -> Status {
        let side = match value {
            None => Side::Low,
            Some(v) if v < r.min => Side::Low,
            Some(v) if v > r.max => Side::High,
            Some(_) => Side::In,
        };
        Status {
            code: if side == Side::In { 0 } else { -1 },
            side,
        }
    }
}

/// Status of a value against the range for a mnemonic given by name.
pub fn metric_status(ranges: &RangeTable, mnemonic: &str, value: f64) -> Result<Status> {
    let m: Mnemonic = mnemonic.parse()?;
    Ok(Status::of(ranges.range(m)?, Some(value)))
}

/// Status of a possibly undefined value; undefined counts as LOW.
pub fn status_of(ranges: &RangeTable, m: Mnemonic, value: Option<f64>) -> Result<Status> {
    Ok(Status::of(ranges.range(m)?, value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Criterion {
    Analyzability,
    Changeability,
    Stability,
    Testability,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::Analyzability,
        Criterion::Changeability,
        Criterion::Stability,
        Criterion::Testability,
    ];

    pub fn constituents(self) -> &'static [Mnemonic] {
        use Mnemonic::*;
        match self {
            Criterion::Analyzability => &[ClWmc, ClComf, InBases, CuCdused],
            Criterion::Changeability => &[ClStat, ClFunc, ClData],
            Criterion::Stability => &[ClDataPubl, CuCdusers, InNoc, ClFuncPubl],
            Criterion::Testability => &[ClWmc, ClFunc, CuCdused],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Analyzability => "Analyzability",
            Criterion::Changeability => "Changeability",
            Criterion::Stability => "Stability",
            Criterion::Testability => "Testability",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Category {
    Excellent,
    Good,
    Fair,
    Poor,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::Excellent, Category::Good, Category::Fair, Category::Poor];

    pub fn points(self) -> u32 {
        match self {
            Category::Excellent => 3,
            Category::Good => 2,
            Category::Fair => 1,
            Category::Poor => 0,
        }
    }

    fn from_violations(out: usize) -> Category {
        match out {
            0 => Category::Excellent,
            1 => Category::Good,
            2 => Category::Fair,
            _ => Category::Poor,
        }
    }

    fn from_points(total: u32) -> Category {
        match total {
            11.. => Category::Excellent,
            8..=10 => Category::Good,
            5..=7 => Category::Fair,
            _ => Category::Poor,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Excellent => "EXCELLENT",
            Category::Good => "GOOD",
            Category::Fair => "FAIR",
            Category::Poor => "POOR",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub statuses: Vec<(Mnemonic, Status)>,
    pub in_range_count: usize,
    pub category: Category,
}

pub fn criterion(ranges: &RangeTable, record: &LogiscopeMetrics, which: Criterion) -> Result<CriterionResult> {
    let statuses = which
        .constituents()
        .iter()
        .map(|&m| Ok((m, status_of(ranges, m, record.get(m))?)))
        .collect::<Result<Vec<_>>>()?;
    let in_range_count = statuses.iter().filter(|(_, s)| s.in_range()).count();
    Ok(CriterionResult {
        criterion: which,
        category: Category::from_violations(statuses.len() - in_range_count),
        statuses,
        in_range_count,
    })
}

pub fn criteria(ranges: &RangeTable, record: &LogiscopeMetrics) -> Result<Vec<CriterionResult>> {
    Criterion::ALL.iter().map(|&c| criterion(ranges, record, c)).collect()
}

/// Maintainability category from the four criterion categories.
pub fn maintainability(criteria: &[CriterionResult]) -> Category {
    Category::from_points(criteria.iter().map(|c| c.category.points()).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KiviatRow {
    pub mnemonic: Mnemonic,
    pub value: Option<f64>,
    #[serde(with = "bound")]
    pub min: f64,
    #[serde(with = "bound")]
    pub max: f64,
    pub status: i8,
    pub side: Side,
}

pub fn kiviat_rows(ranges: &RangeTable, record: &LogiscopeMetrics) -> Result<Vec<KiviatRow>> {
    Mnemonic::ALL
        .iter()
        .map(|&m| {
            let r = ranges.range(m)?;
            let value = record.get(m);
            let s = Status::of(r, value);
            Ok(KiviatRow {
                mnemonic: m,
                value,
                min: r.min,
                max: r.max,
                status: s.code,
                side: s.side,
            })
        })
        .collect()
}

impl LogiscopeMetrics {
    /// Builds a record from named values. A missing `cl_comf` is derived
    /// from `cl_comm` and `cl_line`.
    pub fn from_values(values: &BTreeMap<String, f64>) -> Result<Self> {
        for k in values.keys() {
            k.parse::<Mnemonic>()?;
        }
        let int = |m: Mnemonic| -> Result<u32> {
            let v = *values
                .get(m.as_str())
                .ok_or_else(|| Error::MissingMetric(m.as_str().to_string()))?;
            if v < 0.0 || v.fract() != 0.0 {
                return Err(Error::Domain(format!("{m} must be a non-negative integer, got {v}")));
            }
            Ok(v as u32)
        };
        let cl_comm = int(Mnemonic::ClComm)?;
        let cl_line = int(Mnemonic::ClLine)?;
        Ok(LogiscopeMetrics {
            cl_comf: match values.get("cl_comf") {
                Some(v) => Some(*v),
                None => LogiscopeMetrics::comment_rate(cl_comm, cl_line),
            },
            cl_comm,
            cl_data: int(Mnemonic::ClData)?,
            cl_data_publ: int(Mnemonic::ClDataPubl)?,
            cl_func: int(Mnemonic::ClFunc)?,
            cl_func_publ: int(Mnemonic::ClFuncPubl)?,
            cl_line,
            cl_stat: int(Mnemonic::ClStat)?,
            cl_wmc: int(Mnemonic::ClWmc)?,
            cu_cdused: int(Mnemonic::CuCdused)?,
            cu_cdusers: int(Mnemonic::CuCdusers)?,
            in_bases: int(Mnemonic::InBases)?,
            in_noc: int(Mnemonic::InNoc)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Advice {
    pub mnemonic: Mnemonic,
    pub side: Side,
    pub text: String,
}

fn advice_text(m: Mnemonic, side: Side) -> &'static str {
    use Mnemonic::*;
    match (m, side) {
        (ClComf, _) | (ClComm, Side::Low) => {
            "Write more comments; a higher comment rate makes the class easier to understand"
        }
        (ClComm, _) => "Trim redundant comments",
        (ClData, _) => "Move some attributes to collaborating classes so each class owns fewer fields",
        (ClDataPubl, _) => "Hide public attributes behind accessors",
        (ClFunc, _) => "Split the class; it declares too many methods",
        (ClFuncPubl, _) => "Narrow the public interface or split the class",
        (ClLine, _) => "Break the class into smaller units",
        (ClStat, _) => "Cut the number of statements to lower complexity",
        (ClWmc, _) => "Simplify methods to reduce weighted methods per class",
        (CuCdused, _) => "Depend on fewer classes directly to reduce coupling",
        (CuCdusers, _) => "Too many classes depend on this one; spread its responsibilities",
        (InBases, _) => "Flatten the inheritance hierarchy above this class",
        (InNoc, _) => "Review the subclasses; the class has many direct children",
    }
}

/// One piece of advice per out-of-range row.
pub fn recommendations(rows: &[KiviatRow]) -> Vec<Advice> {
    rows.iter()
        .filter(|r| r.status != 0)
        .map(|r| Advice {
            mnemonic: r.mnemonic,
            side: r.side,
            text: advice_text(r.mnemonic, r.side).to_string(),
        })
        .collect()
}
