//! CK suite, coupling measures and the Logiscope class mnemonics.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complexity::class_wmc;
use crate::error::{Error, Result};
use crate::model::{MethodRef, SystemModel, Visibility};

/// System classes other than `c` that `c` uses or that use `c`.
pub fn coupled_classes(model: &SystemModel, c: &str) -> Result<BTreeSet<String>> {
    model.class(c)?;
    let mut out = BTreeSet::new();
    for d in model.system_classes() {
        if d.name != c && (model.uses(c, &d.name)? || model.uses(&d.name, c)?) {
            out.insert(d.name.clone());
        }
    }
    Ok(out)
}

pub fn cbo(model: &SystemModel, c: &str) -> Result<u32> {
    Ok(coupled_classes(model, c)?.len() as u32)
}

/// Response set: declared methods plus every method they invoke directly.
pub fn response_set(model: &SystemModel, c: &str) -> Result<BTreeSet<MethodRef>> {
    let class = model.class(c)?;
    let mut rs = BTreeSet::new();
    for m in &class.methods {
        rs.insert(MethodRef {
            class: class.name.clone(),
            name: m.name.clone(),
            params: m.parameter_types.clone(),
        });
        rs.extend(m.invocations.iter().map(|i| i.target.clone()));
    }
    Ok(rs)
}

pub fn rfc(model: &SystemModel, c: &str) -> Result<u32> {
    Ok(response_set(model, c)?.len() as u32)
}

/// Message passing coupling: invocation multiplicities of calls leaving the class.
pub fn mpc(model: &SystemModel, c: &str) -> Result<u32> {
    let class = model.class(c)?;
    Ok(class
        .methods
        .iter()
        .flat_map(|m| &m.invocations)
        .filter(|i| i.target.class != class.name)
        .map(|i| i.count)
        .sum())
}

/// Attributes whose declared type is a system class.
pub fn dac(model: &SystemModel, c: &str) -> Result<u32> {
    let class = model.class(c)?;
    Ok(class
        .attributes
        .iter()
        .filter(|a| model.is_system_class(crate::model::element_type(&a.declared_type)))
        .count() as u32)
}

/// Client-server relations outside inheritance, over the possible ones.
pub fn coupling_factor(model: &SystemModel) -> Result<f64> {
    let classes: Vec<&str> = model.system_classes().map(|c| c.name.as_str()).collect();
    let tc = classes.len() as i64;
    let mut desc_total = 0i64;
    let mut clients = 0i64;
    for &ci in &classes {
        let desc = model.descendants(ci)?;
        desc_total += desc.len() as i64;
        let anc = model.ancestors(ci)?;
        for &cj in &classes {
            if ci != cj && model.uses(ci, cj)? && !desc.contains(cj) && !anc.iter().any(|a| a == cj) {
                clients += 1;
            }
        }
    }
    let denom = tc * tc - tc - 2 * desc_total;
    if denom <= 0 {
        return Err(Error::DegenerateSystem(format!(
            "coupling factor denominator is {denom} for {tc} classes"
        )));
    }
    Ok(clients as f64 / denom as f64)
}

pub fn dit(model: &SystemModel, c: &str) -> Result<u32> {
    Ok(model.ancestry(c)?.depth)
}

pub fn noc(model: &SystemModel, c: &str) -> Result<u32> {
    Ok(model.children(c)?.len() as u32)
}

/// The thirteen class-level mnemonics, in their canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mnemonic {
    #[serde(rename = "cl_comf")]
    ClComf,
    #[serde(rename = "cl_comm")]
    ClComm,
    #[serde(rename = "cl_data")]
    ClData,
    #[serde(rename = "cl_data_publ")]
    ClDataPubl,
    #[serde(rename = "cl_func")]
    ClFunc,
    #[serde(rename = "cl_func_publ")]
    ClFuncPubl,
    #[serde(rename = "cl_line")]
    ClLine,
    #[serde(rename = "cl_stat")]
    ClStat,
    #[serde(rename = "cl_wmc")]
    ClWmc,
    #[serde(rename = "cu_cdused")]
    CuCdused,
    #[serde(rename = "cu_cdusers")]
    CuCdusers,
    #[serde(rename = "in_bases")]
    InBases,
    #[serde(rename = "in_noc")]
    InNoc,
}

impl Mnemonic {
    pub const ALL: [Mnemonic; 13] = [
        Mnemonic::ClComf,
        Mnemonic::ClComm,
        Mnemonic::ClData,
        Mnemonic::ClDataPubl,
        Mnemonic::ClFunc,
        Mnemonic::ClFuncPubl,
        Mnemonic::ClLine,
        Mnemonic::ClStat,
        Mnemonic::ClWmc,
        Mnemonic::CuCdused,
        Mnemonic::CuCdusers,
        Mnemonic::InBases,
        Mnemonic::InNoc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mnemonic::ClComf => "cl_comf",
            Mnemonic::ClComm => "cl_comm",
            Mnemonic::ClData => "cl_data",
            Mnemonic::ClDataPubl => "cl_data_publ",
            Mnemonic::ClFunc => "cl_func",
            Mnemonic::ClFuncPubl => "cl_func_publ",
            Mnemonic::ClLine => "cl_line",
            Mnemonic::ClStat => "cl_stat",
            Mnemonic::ClWmc => "cl_wmc",
            Mnemonic::CuCdused => "cu_cdused",
            Mnemonic::CuCdusers => "cu_cdusers",
            Mnemonic::InBases => "in_bases",
            Mnemonic::InNoc => "in_noc",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Mnemonic::ClComf => "comment rate",
            Mnemonic::ClComm => "comment lines",
            Mnemonic::ClData => "attributes",
            Mnemonic::ClDataPubl => "public attributes",
            Mnemonic::ClFunc => "methods",
            Mnemonic::ClFuncPubl => "public methods",
            Mnemonic::ClLine => "lines",
            Mnemonic::ClStat => "statements",
            Mnemonic::ClWmc => "weighted methods per class",
            Mnemonic::CuCdused => "directly used classes",
            Mnemonic::CuCdusers => "direct user classes",
            Mnemonic::InBases => "base classes",
            Mnemonic::InNoc => "children",
        }
    }
}

impl fmt::Display for Mnemonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mnemonic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mnemonic::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownMnemonic(s.to_string()))
    }
}

/// Values of the thirteen mnemonics for one class. `cl_comf` is `None`
/// for a class with no lines.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LogiscopeMetrics {
    pub cl_comf: Option<f64>,
    pub cl_comm: u32,
    pub cl_data: u32,
    pub cl_data_publ: u32,
    pub cl_func: u32,
    pub cl_func_publ: u32,
    pub cl_line: u32,
    pub cl_stat: u32,
    pub cl_wmc: u32,
    pub cu_cdused: u32,
    pub cu_cdusers: u32,
    pub in_bases: u32,
    pub in_noc: u32,
}

impl LogiscopeMetrics {
    pub fn get(&self, m: Mnemonic) -> Option<f64> {
        let v = match m {
            Mnemonic::ClComf => return self.cl_comf,
            Mnemonic::ClComm => self.cl_comm,
            Mnemonic::ClData => self.cl_data,
            Mnemonic::ClDataPubl => self.cl_data_publ,
            Mnemonic::ClFunc => self.cl_func,
            Mnemonic::ClFuncPubl => self.cl_func_publ,
            Mnemonic::ClLine => self.cl_line,
            Mnemonic::ClStat => self.cl_stat,
            Mnemonic::ClWmc => self.cl_wmc,
            Mnemonic::CuCdused => self.cu_cdused,
            Mnemonic::CuCdusers => self.cu_cdusers,
            Mnemonic::InBases => self.in_bases,
            Mnemonic::InNoc => self.in_noc,
        };
        Some(v as f64)
    }

    /// Comment rate from line counts.
    pub fn comment_rate(comment_lines: u32, lines: u32) -> Option<f64> {
        (lines > 0).then(|| comment_lines as f64 / lines as f64)
    }
}

/// System classes `c` uses directly.
pub fn used_system_classes(model: &SystemModel, c: &str) -> Result<BTreeSet<String>> {
    Ok(model
        .used_classes(c)?
        .iter()
        .filter(|d| model.is_system_class(d))
        .cloned()
        .collect())
}

/// System classes that use `c` directly.
pub fn user_classes(model: &SystemModel, c: &str) -> Result<BTreeSet<String>> {
    model.class(c)?;
    let mut out = BTreeSet::new();
    for d in model.system_classes() {
        if d.name != c && model.uses(&d.name, c)? {
            out.insert(d.name.clone());
        }
    }
    Ok(out)
}

pub fn logiscope_mnemonics(model: &SystemModel, c: &str) -> Result<LogiscopeMetrics> {
    let class = model.class(c)?;
    let ancestry = model.ancestry(c)?;
    Ok(LogiscopeMetrics {
        cl_comf: LogiscopeMetrics::comment_rate(class.comment_lines, class.line_count),
        cl_comm: class.comment_lines,
        cl_data: class.attributes.len() as u32,
        cl_data_publ: class
            .attributes
            .iter()
            .filter(|a| a.visibility == Visibility::Public)
            .count() as u32,
        cl_func: class.methods.len() as u32,
        cl_func_publ: class
            .methods
            .iter()
            .filter(|m| m.visibility == Visibility::Public)
            .count() as u32,
        cl_line: class.line_count,
        cl_stat: class.initializer_statements + class.methods.iter().map(|m| m.statements).sum::<u32>(),
        cl_wmc: class_wmc(class),
        cu_cdused: used_system_classes(model, c)?.len() as u32,
        cu_cdusers: user_classes(model, c)?.len() as u32,
        in_bases: (ancestry.classes.len() + ancestry.external_bases.len()) as u32,
        in_noc: noc(model, c)?,
    })
}
