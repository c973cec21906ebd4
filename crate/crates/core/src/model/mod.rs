//! Language-neutral structural model of an analyzed system.
//!
//! [`SystemModel`] is built once from facts and is immutable afterwards; every
//! metric reads from it. Type references inside the model are canonical:
//! either the qualified name of a system class, the name of an external stub
//! class, a primitive type name, or `?` for an unresolved call receiver.

mod build;
pub mod facts;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cfg::ControlFlowGraph;
use crate::error::{Error, Result};
use crate::parser::HalsteadCounts;

pub use build::build_system_model;
pub(crate) use build::erase;
pub use facts::{AttributeFacts, ClassFacts, FactsFile, InvokeFacts, MethodFacts};

/// Strips trailing array dimensions from a type name.
pub fn element_type(t: &str) -> &str {
    let mut t = t;
    while let Some(base) = t.strip_suffix("[]") {
        t = base;
    }
    t
}

/// Receiver class of calls whose static type is unknown.
pub const UNKNOWN_CLASS: &str = "?";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    Class,
    Interface,
    AbstractClass,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Protected,
    Private,
    #[default]
    Default,
}

impl Visibility {
    /// Package-private members are treated as public.
    pub fn is_public(self) -> bool {
        matches!(self, Visibility::Public | Visibility::Default)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MemberRef {
    pub class: String,
    pub member: String,
}

impl MemberRef {
    pub fn parse(s: &str) -> Option<Self> {
        let (class, member) = s.rsplit_once('.')?;
        if class.is_empty() || member.is_empty() {
            return None;
        }
        Some(MemberRef {
            class: class.to_string(),
            member: member.to_string(),
        })
    }
}

impl fmt::Display for MemberRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.class, self.member)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MethodRef {
    pub class: String,
    pub name: String,
    pub params: Vec<String>,
}

impl MethodRef {
    /// Parses `Class.method(T1,T2)`.
    pub fn parse(s: &str) -> Option<Self> {
        let open = s.find('(')?;
        if !s.ends_with(')') {
            return None;
        }
        let (head, sig) = (&s[..open], &s[open + 1..s.len() - 1]);
        let (class, name) = head.rsplit_once('.')?;
        if class.is_empty() || name.is_empty() {
            return None;
        }
        let params = split_params(sig);
        Some(MethodRef {
            class: class.to_string(),
            name: name.to_string(),
            params,
        })
    }

    pub fn is_unknown(&self) -> bool {
        self.class == UNKNOWN_CLASS
    }
}

/// Splits a parameter list on top-level commas (generic arguments may contain commas).
fn split_params(sig: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in sig.chars() {
        match ch {
            '<' => {
                depth += 1;
                cur.push(ch);
            }
            '>' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

impl fmt::Display for MethodRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}({})", self.class, self.name, self.params.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invocation {
    pub target: MethodRef,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeInfo {
    pub name: String,
    pub declared_type: String,
    pub visibility: Visibility,
    pub is_static: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodInfo {
    pub name: String,
    pub parameter_types: Vec<String>,
    pub visibility: Visibility,
    pub is_abstract: bool,
    pub is_static: bool,
    pub is_constructor: bool,
    pub accessed_attributes: BTreeSet<MemberRef>,
    pub invocations: Vec<Invocation>,
    pub cfg: Option<ControlFlowGraph>,
    /// Set on copies produced by [`SystemModel::inherited_methods`].
    pub is_inherited_copy: bool,
    pub statements: u32,
    pub lines: u32,
    pub halstead: Option<HalsteadCounts>,
}

impl MethodInfo {
    pub fn signature(&self) -> String {
        format!("{}({})", self.name, self.parameter_types.join(","))
    }

    pub fn same_signature(&self, other: &MethodInfo) -> bool {
        self.name == other.name && self.parameter_types == other.parameter_types
    }

    pub fn has_body(&self) -> bool {
        !self.is_abstract && self.cfg.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub name: String,
    pub kind: ClassKind,
    pub superclasses: Vec<String>,
    pub methods: Vec<MethodInfo>,
    pub attributes: Vec<AttributeInfo>,
    pub line_count: u32,
    pub comment_lines: u32,
    pub initializer_statements: u32,
    pub is_external: bool,
    pub external_depth: Option<u32>,
    pub halstead: Option<HalsteadCounts>,
}

impl ClassInfo {
    pub fn simple_name(&self) -> &str {
        self.name.rsplit('.').next().unwrap_or(&self.name)
    }

    pub fn method(&self, name: &str, params: &[String]) -> Option<&MethodInfo> {
        self.methods
            .iter()
            .find(|m| m.name == name && m.parameter_types == params)
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeInfo> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

/// Resolved inheritance information for one class.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ancestry {
    /// System ancestors, nearest first (breadth-first over declared parents).
    pub classes: Vec<String>,
    /// Depth contributed by external parents at the top of the deepest path.
    pub external_depth: u32,
    /// External classes reached as parents anywhere along the ancestry.
    pub external_bases: BTreeSet<String>,
    /// Longest path to a root, counting `external_depth` of external parents.
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    classes: BTreeMap<String, ClassInfo>,
    baseline_id: Option<String>,
    parents: BTreeMap<String, Vec<String>>,
    children: BTreeMap<String, Vec<String>>,
    ancestry: BTreeMap<String, Ancestry>,
    uses: BTreeMap<String, BTreeSet<String>>,
}

impl SystemModel {
    pub fn from_facts(facts: FactsFile) -> Result<Self> {
        build::build(facts.classes)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_facts(FactsFile::from_json(text)?)
    }

    pub fn with_baseline_id(mut self, id: impl Into<String>) -> Self {
        self.baseline_id = Some(id.into());
        self
    }

    pub fn baseline_id(&self) -> Option<&str> {
        self.baseline_id.as_deref()
    }

    /// All classes including external stubs, ordered by name.
    pub fn classes(&self) -> impl Iterator<Item = &ClassInfo> {
        self.classes.values()
    }

    /// Classes that belong to the analyzed system.
    pub fn system_classes(&self) -> impl Iterator<Item = &ClassInfo> {
        self.classes.values().filter(|c| !c.is_external)
    }

    pub fn system_class_count(&self) -> usize {
        self.system_classes().count()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.classes.contains_key(name)
    }

    pub fn is_system_class(&self, name: &str) -> bool {
        self.classes.get(name).is_some_and(|c| !c.is_external)
    }

    pub fn class(&self, name: &str) -> Result<&ClassInfo> {
        self.classes
            .get(name)
            .ok_or_else(|| Error::UnknownClass(name.to_string()))
    }

    pub fn ancestry(&self, name: &str) -> Result<&Ancestry> {
        self.ancestry
            .get(name)
            .ok_or_else(|| Error::UnknownClass(name.to_string()))
    }

    /// System superclasses of `name`, nearest first.
    pub fn ancestors(&self, name: &str) -> Result<&[String]> {
        Ok(&self.ancestry(name)?.classes)
    }

    pub fn parents(&self, name: &str) -> Result<&[String]> {
        self.class(name)?;
        Ok(self.parents.get(name).map(Vec::as_slice).unwrap_or(&[]))
    }

    pub fn children(&self, name: &str) -> Result<&[String]> {
        self.class(name)?;
        Ok(self.children.get(name).map(Vec::as_slice).unwrap_or(&[]))
    }

    pub fn descendants(&self, name: &str) -> Result<BTreeSet<String>> {
        self.class(name)?;
        let mut out = BTreeSet::new();
        let mut stack = vec![name.to_string()];
        while let Some(c) = stack.pop() {
            for child in self.children.get(&c).into_iter().flatten() {
                if out.insert(child.clone()) {
                    stack.push(child.clone());
                }
            }
        }
        Ok(out)
    }

    /// Whether `c` uses `d`: a method of `c` invokes a method of `d`, accesses an
    /// attribute of `d`, or `c` declares an attribute or parameter of type `d`.
    pub fn uses(&self, c: &str, d: &str) -> Result<bool> {
        self.class(c)?;
        self.class(d)?;
        Ok(c != d && self.uses.get(c).is_some_and(|s| s.contains(d)))
    }

    /// Every class (system or external) used by `c`.
    pub fn used_classes(&self, c: &str) -> Result<&BTreeSet<String>> {
        self.class(c)?;
        static EMPTY: BTreeSet<String> = BTreeSet::new();
        Ok(self.uses.get(c).unwrap_or(&EMPTY))
    }

    /// Methods `c` inherits from system ancestors and does not redeclare.
    /// Private methods and constructors are not inherited; the nearest
    /// declaration of a signature wins.
    pub fn inherited_methods(&self, c: &str) -> Result<Vec<MethodInfo>> {
        let class = self.class(c)?;
        let mut seen: BTreeSet<String> = class.methods.iter().map(|m| m.signature()).collect();
        let mut out = Vec::new();
        for anc in self.ancestors(c)? {
            for m in &self.classes[anc].methods {
                if m.visibility == Visibility::Private || m.is_constructor {
                    continue;
                }
                if seen.insert(m.signature()) {
                    let mut copy = m.clone();
                    copy.is_inherited_copy = true;
                    out.push(copy);
                }
            }
        }
        Ok(out)
    }

    /// Non-private attributes inherited from system ancestors and not hidden
    /// by an attribute of the same name.
    pub fn inherited_attributes(&self, c: &str) -> Result<Vec<AttributeInfo>> {
        let class = self.class(c)?;
        let mut seen: BTreeSet<&str> = class.attributes.iter().map(|a| a.name.as_str()).collect();
        let mut out = Vec::new();
        for anc in self.ancestors(c)? {
            for a in &self.classes[anc].attributes {
                if a.visibility == Visibility::Private {
                    continue;
                }
                if seen.insert(a.name.as_str()) {
                    out.push(a.clone());
                }
            }
        }
        Ok(out)
    }

    /// Serializes the model back into facts. Re-building from the result
    /// yields an identical model.
    pub fn to_facts(&self) -> FactsFile {
        let classes = self
            .classes
            .values()
            .map(|c| ClassFacts {
                name: c.name.clone(),
                kind: c.kind,
                extends: c.superclasses.clone(),
                lines: c.line_count,
                comment_lines: c.comment_lines,
                statements: c.initializer_statements,
                external: c.is_external,
                external_depth: c.external_depth,
                attributes: c
                    .attributes
                    .iter()
                    .map(|a| AttributeFacts {
                        name: a.name.clone(),
                        declared_type: a.declared_type.clone(),
                        visibility: a.visibility,
                        is_static: a.is_static,
                    })
                    .collect(),
                methods: c
                    .methods
                    .iter()
                    .map(|m| MethodFacts {
                        name: m.name.clone(),
                        param_types: m.parameter_types.clone(),
                        visibility: m.visibility,
                        is_abstract: m.is_abstract,
                        is_static: m.is_static,
                        is_constructor: m.is_constructor,
                        lines: m.lines,
                        statements: m.statements,
                        accesses: m.accessed_attributes.iter().map(|r| r.to_string()).collect(),
                        invokes: m
                            .invocations
                            .iter()
                            .map(|i| InvokeFacts {
                                target: i.target.to_string(),
                                count: i.count,
                            })
                            .collect(),
                        cfg: m.cfg.clone(),
                        halstead: m.halstead,
                    })
                    .collect(),
                halstead: c.halstead,
            })
            .collect();
        FactsFile { classes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_ref_parse_roundtrip() {
        let r = MethodRef::parse("a.b.ClassB.run(int,Map<K,V>)").unwrap();
        assert_eq!(r.class, "a.b.ClassB");
        assert_eq!(r.name, "run");
        assert_eq!(r.params, vec!["int", "Map<K,V>"]);
        assert_eq!(r.to_string(), "a.b.ClassB.run(int,Map<K,V>)");
        let empty = MethodRef::parse("X.m()").unwrap();
        assert!(empty.params.is_empty());
        assert!(MethodRef::parse("noclass()").is_none());
        assert!(MethodRef::parse("X.m(").is_none());
    }

    #[test]
    fn member_ref_parse() {
        let r = MemberRef::parse("p.Q.x").unwrap();
        assert_eq!((r.class.as_str(), r.member.as_str()), ("p.Q", "x"));
        assert!(MemberRef::parse("x").is_none());
    }

    #[test]
    fn default_visibility_counts_as_public() {
        assert!(Visibility::Default.is_public());
        assert!(!Visibility::Protected.is_public());
    }
}
