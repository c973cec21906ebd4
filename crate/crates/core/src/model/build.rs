use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::*;
use crate::parser::CompilationFacts;

const PRIMITIVES: &[&str] = &[
    "byte", "short", "int", "long", "float", "double", "boolean", "char", "void", "var",
];

/// Merges per-file parse results into one resolved, immutable model.
pub fn build_system_model(files: &[CompilationFacts]) -> Result<SystemModel> {
    build(files.iter().flat_map(|f| f.classes.iter().cloned()).collect())
}

/// Drops generic arguments and whitespace. Array dimensions are kept and
/// varargs become `[]`.
pub(crate) fn erase(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut depth = 0i32;
    for ch in raw.chars() {
        match ch {
            '<' => depth += 1,
            '>' => depth -= 1,
            c if depth == 0 && !c.is_whitespace() => out.push(c),
            _ => {}
        }
    }
    if let Some(base) = out.strip_suffix("...") {
        out = format!("{base}[]");
    }
    out
}

pub(crate) fn is_primitive(name: &str) -> bool {
    PRIMITIVES.contains(&name)
}

#[derive(Debug, Clone, PartialEq)]
enum Resolved {
    Primitive(String),
    Class(String),
    /// Full array type and, for class elements, the element class.
    Array(String, Option<String>),
    Unknown,
}

struct Resolver<'a> {
    declared: &'a BTreeMap<String, ClassFacts>,
    by_simple: HashMap<&'a str, Vec<&'a str>>,
}

impl<'a> Resolver<'a> {
    fn new(declared: &'a BTreeMap<String, ClassFacts>) -> Self {
        let mut by_simple: HashMap<&str, Vec<&str>> = HashMap::new();
        for (name, c) in declared {
            if !c.external {
                let simple = name.rsplit('.').next().unwrap_or(name);
                by_simple.entry(simple).or_default().push(name);
            }
        }
        Resolver { declared, by_simple }
    }

    fn is_system(&self, name: &str) -> bool {
        self.declared.get(name).is_some_and(|c| !c.external)
    }

    fn resolve(&self, raw: &str, context: &str) -> Resolved {
        if raw == UNKNOWN_CLASS {
            return Resolved::Unknown;
        }
        let name = erase(raw);
        let base = element_type(&name);
        let dims = &name[base.len()..];
        if dims.is_empty() {
            return self.resolve_base(base, context);
        }
        match self.resolve_base(base, context) {
            Resolved::Primitive(p) => Resolved::Array(format!("{p}{dims}"), None),
            Resolved::Class(c) => Resolved::Array(format!("{c}{dims}"), Some(c)),
            _ => Resolved::Unknown,
        }
    }

    fn resolve_base(&self, name: &str, context: &str) -> Resolved {
        let name = name.to_string();
        if name.is_empty() {
            return Resolved::Unknown;
        }
        if is_primitive(&name) {
            return Resolved::Primitive(name);
        }
        if self.declared.contains_key(&name) {
            return Resolved::Class(name);
        }
        // enclosing scopes of the referencing class, innermost first
        let mut prefix = context;
        loop {
            let candidate = format!("{prefix}.{name}");
            if self.is_system(&candidate) {
                return Resolved::Class(candidate);
            }
            match prefix.rsplit_once('.') {
                Some((p, _)) => prefix = p,
                None => break,
            }
        }
        if !name.contains('.') {
            if let Some([only]) = self.by_simple.get(name.as_str()).map(Vec::as_slice) {
                return Resolved::Class(only.to_string());
            }
        }
        Resolved::Class(name)
    }
}

struct Pending {
    facts: ClassFacts,
    superclasses: Vec<String>,
    attrs: Vec<AttributeInfo>,
    params: Vec<Vec<String>>,
}

pub(crate) fn build(classes: Vec<ClassFacts>) -> Result<SystemModel> {
    let mut declared: BTreeMap<String, ClassFacts> = BTreeMap::new();
    for c in classes {
        if c.name.trim().is_empty() {
            return Err(Error::InvalidFacts("class with empty name".into()));
        }
        if declared.contains_key(&c.name) {
            return Err(Error::DuplicateClass(c.name));
        }
        declared.insert(c.name.clone(), c);
    }
    if !declared.values().any(|c| !c.external) {
        return Err(Error::EmptyModel);
    }

    let resolver = Resolver::new(&declared);
    let mut stubs: BTreeSet<String> = BTreeSet::new();
    let note_stub = |r: &Resolved, stubs: &mut BTreeSet<String>| {
        if let Resolved::Class(name) | Resolved::Array(_, Some(name)) = r {
            if !declared.contains_key(name) {
                stubs.insert(name.clone());
            }
        }
    };
    let type_name = |r: Resolved, raw: &str| match r {
        Resolved::Primitive(p) | Resolved::Class(p) | Resolved::Array(p, _) => p,
        Resolved::Unknown => raw.to_string(),
    };

    // Pass 1: superclasses, attribute and parameter types.
    let mut pending: BTreeMap<String, Pending> = BTreeMap::new();
    for (name, c) in &declared {
        if c.comment_lines > c.lines {
            return Err(Error::InvalidFacts(format!(
                "{name}: commentLines {} exceeds lines {}",
                c.comment_lines, c.lines
            )));
        }
        let mut superclasses = Vec::new();
        for raw in &c.extends {
            let r = resolver.resolve(raw, name);
            note_stub(&r, &mut stubs);
            match r {
                Resolved::Class(s) => {
                    if !superclasses.contains(&s) {
                        superclasses.push(s)
                    }
                }
                _ => return Err(Error::InvalidFacts(format!("{name}: `{raw}` cannot be a superclass"))),
            }
        }
        let mut attrs = Vec::new();
        let mut attr_names = BTreeSet::new();
        for a in &c.attributes {
            if !attr_names.insert(a.name.clone()) {
                return Err(Error::InvalidFacts(format!("{name}: duplicate attribute `{}`", a.name)));
            }
            let r = resolver.resolve(&a.declared_type, name);
            note_stub(&r, &mut stubs);
            attrs.push(AttributeInfo {
                name: a.name.clone(),
                declared_type: type_name(r, &a.declared_type),
                visibility: a.visibility,
                is_static: a.is_static,
            });
        }
        let mut params = Vec::new();
        let mut sigs = BTreeSet::new();
        for m in &c.methods {
            let ps: Vec<String> = m
                .param_types
                .iter()
                .map(|p| {
                    let r = resolver.resolve(p, name);
                    note_stub(&r, &mut stubs);
                    type_name(r, p)
                })
                .collect();
            if !sigs.insert((m.name.clone(), ps.clone())) {
                return Err(Error::InvalidFacts(format!(
                    "{name}: duplicate method signature {}({})",
                    m.name,
                    ps.join(",")
                )));
            }
            params.push(ps);
        }
        pending.insert(
            name.clone(),
            Pending {
                facts: c.clone(),
                superclasses,
                attrs,
                params,
            },
        );
    }
    for s in &stubs {
        pending.insert(
            s.clone(),
            Pending {
                facts: ClassFacts {
                    external: true,
                    ..ClassFacts::new(s.clone(), ClassKind::Class)
                },
                superclasses: Vec::new(),
                attrs: Vec::new(),
                params: Vec::new(),
            },
        );
    }

    let all_parents: BTreeMap<String, Vec<String>> = pending
        .iter()
        .map(|(n, p)| (n.clone(), p.superclasses.clone()))
        .collect();
    check_acyclic(&all_parents)?;

    let is_external = |n: &str| pending.get(n).is_some_and(|p| p.facts.external);
    let mut parents: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut children: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (n, ps) in &all_parents {
        let sys: Vec<String> = ps.iter().filter(|p| !is_external(p)).cloned().collect();
        for p in &sys {
            children.entry(p.clone()).or_default().push(n.clone());
        }
        if !sys.is_empty() {
            parents.insert(n.clone(), sys);
        }
    }
    let ancestry = compute_ancestry(&all_parents, &pending);

    // Pass 2: attribute accesses and invocations, resolved through the hierarchy.
    let lookup_order = |cls: &str| -> Vec<String> {
        let mut order = vec![cls.to_string()];
        if let Some(a) = ancestry.get(cls) {
            order.extend(a.classes.iter().cloned());
        }
        order
    };
    let external_base =
        |cls: &str| -> Option<String> { ancestry.get(cls).and_then(|a| a.external_bases.iter().next().cloned()) };

    let mut classes: BTreeMap<String, ClassInfo> = BTreeMap::new();
    let mut late_stubs: BTreeSet<String> = BTreeSet::new();
    for (name, p) in &pending {
        let mut methods = Vec::new();
        for (m, params) in p.facts.methods.iter().zip(&p.params) {
            let mut accessed = BTreeSet::new();
            for raw in &m.accesses {
                let r = MemberRef::parse(raw)
                    .ok_or_else(|| Error::InvalidFacts(format!("{name}.{}: bad access `{raw}`", m.name)))?;
                let owner = match resolver.resolve(&r.class, name) {
                    Resolved::Class(c) => c,
                    _ => continue,
                };
                if pending.get(&owner).is_some_and(|o| !o.facts.external) {
                    let found = lookup_order(&owner)
                        .into_iter()
                        .find(|c| pending[c].attrs.iter().any(|a| a.name == r.member));
                    match found.or_else(|| external_base(&owner)) {
                        Some(decl) => {
                            accessed.insert(MemberRef {
                                class: decl,
                                member: r.member.clone(),
                            });
                        }
                        None => continue,
                    }
                } else {
                    if !pending.contains_key(&owner) {
                        late_stubs.insert(owner.clone());
                    }
                    accessed.insert(MemberRef {
                        class: owner,
                        member: r.member.clone(),
                    });
                }
            }

            let mut invocations: BTreeMap<MethodRef, u32> = BTreeMap::new();
            for inv in &m.invokes {
                if inv.count == 0 {
                    return Err(Error::InvalidFacts(format!(
                        "{name}.{}: invocation `{}` has count 0",
                        m.name, inv.target
                    )));
                }
                let r = MethodRef::parse(&inv.target)
                    .ok_or_else(|| Error::InvalidFacts(format!("{name}.{}: bad target `{}`", m.name, inv.target)))?;
                let sig: Vec<String> = r
                    .params
                    .iter()
                    .map(|p| {
                        if p == "_" {
                            p.clone()
                        } else {
                            type_name(resolver.resolve(p, name), p)
                        }
                    })
                    .collect();
                let target = match resolver.resolve(&r.class, name) {
                    Resolved::Unknown | Resolved::Primitive(_) | Resolved::Array(..) => MethodRef {
                        class: UNKNOWN_CLASS.to_string(),
                        name: r.name.clone(),
                        params: sig,
                    },
                    Resolved::Class(owner) => {
                        resolve_method(&owner, &r.name, sig, &pending, &lookup_order, &external_base)
                    }
                };
                if target.class != UNKNOWN_CLASS && !pending.contains_key(&target.class) {
                    late_stubs.insert(target.class.clone());
                }
                *invocations.entry(target).or_insert(0) += inv.count;
            }

            methods.push(MethodInfo {
                name: m.name.clone(),
                parameter_types: params.clone(),
                visibility: m.visibility,
                is_abstract: m.is_abstract,
                is_static: m.is_static,
                is_constructor: m.is_constructor,
                accessed_attributes: accessed,
                invocations: invocations
                    .into_iter()
                    .map(|(target, count)| Invocation { target, count })
                    .collect(),
                cfg: m.cfg.clone(),
                is_inherited_copy: false,
                statements: m.statements,
                lines: m.lines,
                halstead: m.halstead,
            });
        }
        classes.insert(
            name.clone(),
            ClassInfo {
                name: name.clone(),
                kind: p.facts.kind,
                superclasses: p.superclasses.clone(),
                methods,
                attributes: p.attrs.clone(),
                line_count: p.facts.lines,
                comment_lines: p.facts.comment_lines,
                initializer_statements: p.facts.statements,
                is_external: p.facts.external,
                external_depth: p.facts.external_depth,
                halstead: p.facts.halstead,
            },
        );
    }
    let mut ancestry = ancestry;
    for s in late_stubs {
        classes.insert(
            s.clone(),
            ClassInfo {
                name: s.clone(),
                kind: ClassKind::Class,
                superclasses: Vec::new(),
                methods: Vec::new(),
                attributes: Vec::new(),
                line_count: 0,
                comment_lines: 0,
                initializer_statements: 0,
                is_external: true,
                external_depth: None,
                halstead: None,
            },
        );
        ancestry.insert(s, Ancestry::default());
    }

    let uses = classes
        .values()
        .map(|c| (c.name.clone(), direct_uses(c, &classes)))
        .collect();

    Ok(SystemModel {
        classes,
        baseline_id: None,
        parents,
        children,
        ancestry,
        uses,
    })
}

fn resolve_method(
    owner: &str,
    name: &str,
    sig: Vec<String>,
    pending: &BTreeMap<String, Pending>,
    lookup_order: &dyn Fn(&str) -> Vec<String>,
    external_base: &dyn Fn(&str) -> Option<String>,
) -> MethodRef {
    let Some(owner_p) = pending.get(owner) else {
        return MethodRef {
            class: owner.to_string(),
            name: name.to_string(),
            params: sig,
        };
    };
    if owner_p.facts.external {
        return MethodRef {
            class: owner.to_string(),
            name: name.to_string(),
            params: sig,
        };
    }
    let typed = sig.iter().all(|p| p != "_");
    let simple = owner.rsplit('.').next().unwrap_or(owner);
    let is_ctor_call = name == simple;
    let order = if is_ctor_call {
        vec![owner.to_string()]
    } else {
        lookup_order(owner)
    };
    let mut first: Option<MethodRef> = None;
    for cls in &order {
        let p = &pending[cls];
        for (m, params) in p.facts.methods.iter().zip(&p.params) {
            if m.name != name || params.len() != sig.len() {
                continue;
            }
            let r = MethodRef {
                class: cls.clone(),
                name: name.to_string(),
                params: params.clone(),
            };
            if typed && *params == sig {
                return r;
            }
            first.get_or_insert(r);
        }
        if first.is_some() && !typed {
            break;
        }
    }
    if let Some(r) = first {
        return r;
    }
    if !is_ctor_call {
        if let Some(ext) = external_base(owner) {
            return MethodRef {
                class: ext,
                name: name.to_string(),
                params: sig,
            };
        }
    }
    MethodRef {
        class: owner.to_string(),
        name: name.to_string(),
        params: sig,
    }
}

fn check_acyclic(parents: &BTreeMap<String, Vec<String>>) -> Result<()> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    fn visit(
        n: &str,
        parents: &BTreeMap<String, Vec<String>>,
        marks: &mut HashMap<String, Mark>,
        path: &mut Vec<String>,
    ) -> Result<()> {
        match marks.get(n).copied().unwrap_or(Mark::Fresh) {
            Mark::Done => return Ok(()),
            Mark::Active => {
                let start = path.iter().position(|p| p == n).unwrap_or(0);
                let mut cycle = path[start..].to_vec();
                cycle.push(n.to_string());
                return Err(Error::InheritanceCycle(cycle));
            }
            Mark::Fresh => {}
        }
        marks.insert(n.to_string(), Mark::Active);
        path.push(n.to_string());
        for p in parents.get(n).into_iter().flatten() {
            visit(p, parents, marks, path)?;
        }
        path.pop();
        marks.insert(n.to_string(), Mark::Done);
        Ok(())
    }
    let mut marks = HashMap::new();
    for n in parents.keys() {
        visit(n, parents, &mut marks, &mut Vec::new())?;
    }
    Ok(())
}

fn compute_ancestry(
    all_parents: &BTreeMap<String, Vec<String>>,
    pending: &BTreeMap<String, Pending>,
) -> BTreeMap<String, Ancestry> {
    let is_external = |n: &str| pending.get(n).is_some_and(|p| p.facts.external);
    let ext_depth = |n: &str| pending.get(n).and_then(|p| p.facts.external_depth).unwrap_or(0);

    // (depth, external contribution on the deepest path)
    fn depth_of(
        n: &str,
        all_parents: &BTreeMap<String, Vec<String>>,
        is_external: &dyn Fn(&str) -> bool,
        ext_depth: &dyn Fn(&str) -> u32,
        memo: &mut HashMap<String, (u32, u32)>,
    ) -> (u32, u32) {
        if let Some(&d) = memo.get(n) {
            return d;
        }
        let mut best = (0, 0);
        for p in all_parents.get(n).into_iter().flatten() {
            let cand = if is_external(p) {
                (ext_depth(p), ext_depth(p))
            } else {
                let (d, e) = depth_of(p, all_parents, is_external, ext_depth, memo);
                (d + 1, e)
            };
            if cand > best {
                best = cand;
            }
        }
        memo.insert(n.to_string(), best);
        best
    }

    let mut memo = HashMap::new();
    let mut out = BTreeMap::new();
    for n in all_parents.keys() {
        let mut classes = Vec::new();
        let mut external_bases = BTreeSet::new();
        let mut seen = BTreeSet::from([n.clone()]);
        let mut queue = std::collections::VecDeque::from([n.clone()]);
        while let Some(c) = queue.pop_front() {
            for p in all_parents.get(&c).into_iter().flatten() {
                if is_external(p) {
                    external_bases.insert(p.clone());
                } else if seen.insert(p.clone()) {
                    classes.push(p.clone());
                    queue.push_back(p.clone());
                }
            }
        }
        let (depth, external_depth) = depth_of(n, all_parents, &is_external, &ext_depth, &mut memo);
        out.insert(
            n.clone(),
            Ancestry {
                classes,
                external_depth,
                external_bases,
                depth,
            },
        );
    }
    out
}

fn direct_uses(c: &ClassInfo, classes: &BTreeMap<String, ClassInfo>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut add = |name: &str| {
        let name = element_type(name);
        if name != c.name && classes.contains_key(name) {
            out.insert(name.to_string());
        }
    };
    for a in &c.attributes {
        add(&a.declared_type);
    }
    for m in &c.methods {
        for p in &m.parameter_types {
            add(p);
        }
        for r in &m.accessed_attributes {
            add(&r.class);
        }
        for i in &m.invocations {
            add(&i.target.class);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(name: &str, extends: &[&str]) -> ClassFacts {
        ClassFacts {
            extends: extends.iter().map(|s| s.to_string()).collect(),
            ..ClassFacts::new(name, ClassKind::Class)
        }
    }

    #[test]
    fn erase_strips_generics_and_arrays() {
        assert_eq!(erase("Map<String, List<Foo>>"), "Map");
        assert_eq!(erase("Foo[][]"), "Foo[][]");
        assert_eq!(erase("Foo..."), "Foo[]");
        assert_eq!(erase(" java.util.List<T> "), "java.util.List");
    }

    #[test]
    fn two_class_chain() {
        let m = build(vec![class("A", &[]), class("B", &["A"])]).unwrap();
        assert_eq!(m.descendants("A").unwrap(), BTreeSet::from(["B".to_string()]));
        assert_eq!(m.ancestors("B").unwrap(), &["A".to_string()]);
        assert!(m.ancestors("A").unwrap().is_empty());
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let err = build(vec![class("C", &["C"])]).unwrap_err();
        assert_eq!(err, Error::InheritanceCycle(vec!["C".into(), "C".into()]));
    }

    #[test]
    fn longer_cycle_reports_path() {
        let err = build(vec![class("A", &["B"]), class("B", &["A"])]).unwrap_err();
        match err {
            Error::InheritanceCycle(p) => {
                assert_eq!(p.first(), p.last());
                assert_eq!(p.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_class_rejected() {
        let err = build(vec![class("A", &[]), class("A", &[])]).unwrap_err();
        assert_eq!(err, Error::DuplicateClass("A".into()));
    }

    #[test]
    fn external_parent_becomes_stub() {
        let m = build(vec![class("p.A", &["java.io.Serializable", "Exception"])]).unwrap();
        assert!(m.class("Exception").unwrap().is_external);
        assert!(m.ancestors("p.A").unwrap().is_empty());
        let anc = m.ancestry("p.A").unwrap();
        assert_eq!(anc.external_bases.len(), 2);
        assert_eq!(m.system_class_count(), 1);
    }

    #[test]
    fn external_depth_annotation_counts_toward_depth() {
        let mut ext = class("Base", &[]);
        ext.external = true;
        ext.external_depth = Some(2);
        let m = build(vec![ext, class("A", &["Base"]), class("B", &["A"])]).unwrap();
        assert_eq!(m.ancestry("A").unwrap().depth, 2);
        assert_eq!(m.ancestry("B").unwrap().depth, 3);
        assert_eq!(m.ancestry("B").unwrap().external_depth, 2);
    }

    #[test]
    fn simple_names_resolve_within_package() {
        let mut a = class("p.A", &[]);
        a.attributes.push(AttributeFacts {
            name: "b".into(),
            declared_type: "B".into(),
            visibility: Visibility::Private,
            is_static: false,
        });
        let m = build(vec![a, class("p.B", &[]), class("q.B", &[])]).unwrap();
        assert_eq!(m.class("p.A").unwrap().attributes[0].declared_type, "p.B");
    }

    #[test]
    fn inherited_call_resolves_to_declaring_ancestor() {
        let mut sup = class("S", &[]);
        sup.methods.push(MethodFacts::new("init"));
        sup.attributes.push(AttributeFacts {
            name: "counter".into(),
            declared_type: "int".into(),
            visibility: Visibility::Protected,
            is_static: false,
        });
        let mut sub = class("C", &["S"]);
        let mut run = MethodFacts::new("run");
        run.invokes.push(InvokeFacts {
            target: "C.init()".into(),
            count: 2,
        });
        run.invokes.push(InvokeFacts {
            target: "C.init()".into(),
            count: 1,
        });
        run.accesses.push("C.counter".into());
        sub.methods.push(run);
        let m = build(vec![sup, sub]).unwrap();
        let run = &m.class("C").unwrap().methods[0];
        assert_eq!(run.invocations.len(), 1);
        assert_eq!(run.invocations[0].target.to_string(), "S.init()");
        assert_eq!(run.invocations[0].count, 3);
        assert!(run.accessed_attributes.contains(&MemberRef {
            class: "S".into(),
            member: "counter".into()
        }));
        assert!(m.uses("C", "S").unwrap());
        assert!(!m.uses("S", "C").unwrap());
    }

    #[test]
    fn unknown_receiver_kept_but_not_coupled() {
        let mut a = class("A", &[]);
        let mut m1 = MethodFacts::new("m");
        m1.invokes.push(InvokeFacts {
            target: "?.println(_)".into(),
            count: 1,
        });
        a.methods.push(m1);
        let m = build(vec![a]).unwrap();
        let inv = &m.class("A").unwrap().methods[0].invocations[0];
        assert!(inv.target.is_unknown());
        assert!(m.used_classes("A").unwrap().is_empty());
    }

    #[test]
    fn comment_lines_bounded_by_lines() {
        let mut a = class("A", &[]);
        a.lines = 3;
        a.comment_lines = 4;
        assert!(matches!(build(vec![a]).unwrap_err(), Error::InvalidFacts(_)));
    }

    #[test]
    fn duplicate_signature_rejected() {
        let mut a = class("A", &[]);
        a.methods.push(MethodFacts::new("m"));
        a.methods.push(MethodFacts::new("m"));
        assert!(matches!(build(vec![a]).unwrap_err(), Error::InvalidFacts(_)));
    }

    #[test]
    fn empty_input_is_empty_model() {
        assert_eq!(build(vec![]).unwrap_err(), Error::EmptyModel);
    }
}
