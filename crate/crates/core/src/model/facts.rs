//! Facts-file wire format.
//!
//! A facts file is a UTF-8 JSON document `{ "classes": [ ... ] }`. Parsers for
//! any language can produce it; [`crate::model::SystemModel::from_facts`] consumes it.

use serde::{Deserialize, Serialize};

use crate::cfg::ControlFlowGraph;
use crate::model::{ClassKind, Visibility};
use crate::parser::HalsteadCounts;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FactsFile {
    pub classes: Vec<ClassFacts>,
}

impl FactsFile {
    pub fn from_json(text: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("facts serialize")
    }
}

fn is_zero(v: &u32) -> bool {
    *v == 0
}

fn is_false(v: &bool) -> bool {
    !*v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassFacts {
    pub name: String,
    pub kind: ClassKind,
    #[serde(default)]
    pub extends: Vec<String>,
    #[serde(default)]
    pub lines: u32,
    #[serde(default)]
    pub comment_lines: u32,
    /// Executable statements outside method bodies (field and block initializers).
    #[serde(default, skip_serializing_if = "is_zero")]
    pub statements: u32,
    #[serde(default, skip_serializing_if = "is_false")]
    pub external: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external_depth: Option<u32>,
    #[serde(default)]
    pub attributes: Vec<AttributeFacts>,
    #[serde(default)]
    pub methods: Vec<MethodFacts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halstead: Option<HalsteadCounts>,
}

impl ClassFacts {
    pub fn new(name: impl Into<String>, kind: ClassKind) -> Self {
        ClassFacts {
            name: name.into(),
            kind,
            extends: Vec::new(),
            lines: 0,
            comment_lines: 0,
            statements: 0,
            external: false,
            external_depth: None,
            attributes: Vec::new(),
            methods: Vec::new(),
            halstead: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeFacts {
    pub name: String,
    #[serde(rename = "type")]
    pub declared_type: String,
    #[serde(default)]
    pub visibility: Visibility,
    #[serde(default, rename = "static")]
    pub is_static: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MethodFacts {
    pub name: String,
    #[serde(default)]
    pub param_types: Vec<String>,
    #[serde(default)]
    pub visibility: Visibility,
    #[serde(default, rename = "abstract")]
    pub is_abstract: bool,
    #[serde(default, rename = "static")]
    pub is_static: bool,
    #[serde(default, rename = "constructor", skip_serializing_if = "is_false")]
    pub is_constructor: bool,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub lines: u32,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub statements: u32,
    /// `"Class.attr"` references.
    #[serde(default)]
    pub accesses: Vec<String>,
    #[serde(default)]
    pub invokes: Vec<InvokeFacts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cfg: Option<ControlFlowGraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halstead: Option<HalsteadCounts>,
}

impl MethodFacts {
    pub fn new(name: impl Into<String>) -> Self {
        MethodFacts {
            name: name.into(),
            param_types: Vec::new(),
            visibility: Visibility::Public,
            is_abstract: false,
            is_static: false,
            is_constructor: false,
            lines: 0,
            statements: 0,
            accesses: Vec::new(),
            invokes: Vec::new(),
            cfg: None,
            halstead: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvokeFacts {
    /// `"Class.method(T1,T2)"`; `_` stands for an argument of unknown type and
    /// `?` for a receiver whose class could not be determined.
    pub target: String,
    #[serde(default = "one")]
    pub count: u32,
}

fn one() -> u32 {
    1
}
