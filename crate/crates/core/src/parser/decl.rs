//! Recursive-descent parser for compilation units: package, imports, type
//! declarations and their members. Method bodies are handed to the
//! statement parser.

use std::collections::{HashMap, HashSet};

use super::body::{count_statements, matching, parse_type, split_top, BodyParser, PRIMITIVE_KEYWORDS};
use super::flow::FlowBuilder;
use super::halstead::halstead_counts;
use super::lexer::{Token, TokenKind};
use super::lines::LineFlags;
use super::refs::{collect_lambda_params, collect_locals, Scanner, Scope};
use super::MethodTokens;
use crate::error::{Error, Result};
use crate::model::{AttributeFacts, ClassFacts, ClassKind, InvokeFacts, MethodFacts, Visibility};

#[derive(Debug, Default, Clone, Copy)]
struct Mods {
    visibility: Option<Visibility>,
    is_static: bool,
    is_abstract: bool,
    is_native: bool,
}

#[derive(Clone, Copy, PartialEq)]
enum DeclKind {
    Class,
    Interface,
    Enum,
    Record,
    Annotation,
}

struct Outer {
    name: String,
    in_interface: bool,
    type_params: HashSet<String>,
}

pub(crate) struct DeclParser<'a> {
    toks: &'a [Token],
    pos: usize,
    flags: &'a [LineFlags],
    pub package: Option<String>,
    imports: HashMap<String, String>,
    pub classes: Vec<ClassFacts>,
    pub bodies: Vec<MethodTokens>,
}

const MODIFIER_KEYWORDS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "default",
];

impl<'a> DeclParser<'a> {
    pub fn new(toks: &'a [Token], flags: &'a [LineFlags]) -> Self {
        DeclParser {
            toks,
            pos: 0,
            flags,
            package: None,
            imports: HashMap::new(),
            classes: Vec::new(),
            bodies: Vec::new(),
        }
    }

    fn tok(&self, i: usize) -> Option<&'a Token> {
        self.toks.get(i)
    }

    fn is(&self, i: usize, text: &str) -> bool {
        self.tok(i).is_some_and(|t| t.is(text))
    }

    fn is_ident_text(&self, i: usize, text: &str) -> bool {
        self.tok(i).is_some_and(|t| t.is_ident() && t.text == text)
    }

    fn line(&self) -> usize {
        self.tok(self.pos).or_else(|| self.toks.last()).map_or(1, |t| t.line)
    }

    fn syntax(&self, expected: &[&str]) -> Error {
        Error::Syntax {
            line: self.line(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, text: &str) -> Result<()> {
        if self.is(self.pos, text) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&[text]))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.tok(self.pos) {
            Some(t) if t.is_ident() => {
                self.pos += 1;
                Ok(t.text.clone())
            }
            _ => Err(self.syntax(&["identifier"])),
        }
    }

    fn qualified_name(&mut self) -> Result<String> {
        let mut name = self.ident()?;
        while self.is(self.pos, ".") && self.tok(self.pos + 1).is_some_and(|t| t.is_ident()) {
            self.pos += 1;
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    fn close_of(&self, open: usize) -> Result<usize> {
        matching(self.toks, open, self.toks.len()).ok_or_else(|| Error::UnbalancedBlock(self.toks[open].line))
    }

    fn skip_annotation(&mut self) -> Result<()> {
        self.pos += 1;
        self.qualified_name()?;
        if self.is(self.pos, "(") {
            self.pos = self.close_of(self.pos)? + 1;
        }
        Ok(())
    }

    fn modifiers(&mut self) -> Result<Mods> {
        let mut m = Mods::default();
        loop {
            let Some(t) = self.tok(self.pos) else {
                return Ok(m);
            };
            if t.is("@") && !self.is(self.pos + 1, "interface") {
                self.skip_annotation()?;
                continue;
            }
            if t.kind == TokenKind::Keyword && MODIFIER_KEYWORDS.contains(&t.text.as_str()) {
                // `default` only modifies when a declaration follows
                if t.text == "default" && (self.is(self.pos + 1, ":") || self.is(self.pos + 1, "->")) {
                    return Ok(m);
                }
                match t.text.as_str() {
                    "public" => m.visibility = Some(Visibility::Public),
                    "protected" => m.visibility = Some(Visibility::Protected),
                    "private" => m.visibility = Some(Visibility::Private),
                    "static" => m.is_static = true,
                    "abstract" => m.is_abstract = true,
                    "native" => m.is_native = true,
                    _ => {}
                }
                self.pos += 1;
                continue;
            }
            if t.is_ident()
                && t.text == "sealed"
                && self
                    .tok(self.pos + 1)
                    .is_some_and(|n| n.is_ident() || n.kind == TokenKind::Keyword)
            {
                self.pos += 1;
                continue;
            }
            if t.is_ident()
                && t.text == "non"
                && self.is(self.pos + 1, "-")
                && self.is_ident_text(self.pos + 2, "sealed")
            {
                self.pos += 3;
                continue;
            }
            return Ok(m);
        }
    }

    fn decl_kind_at(&self, i: usize) -> Option<DeclKind> {
        let t = self.tok(i)?;
        if t.is("class") {
            Some(DeclKind::Class)
        } else if t.is("interface") {
            Some(DeclKind::Interface)
        } else if t.is("enum") {
            Some(DeclKind::Enum)
        } else if t.is("@") && self.is(i + 1, "interface") {
            Some(DeclKind::Annotation)
        } else if t.is_ident()
            && t.text == "record"
            && self.tok(i + 1).is_some_and(|n| n.is_ident())
            && (self.is(i + 2, "(") || self.is(i + 2, "<"))
        {
            Some(DeclKind::Record)
        } else {
            None
        }
    }

    pub fn parse_unit(&mut self) -> Result<()> {
        let save = self.pos;
        while self.is(self.pos, "@") && !self.is(self.pos + 1, "interface") {
            self.skip_annotation()?;
        }
        if self.is(self.pos, "package") {
            self.pos += 1;
            self.package = Some(self.qualified_name()?);
            self.expect(";")?;
        } else {
            self.pos = save;
        }
        while self.is(self.pos, "import") {
            self.pos += 1;
            let is_static = self.is(self.pos, "static");
            if is_static {
                self.pos += 1;
            }
            let name = self.qualified_name()?;
            let wildcard = self.is(self.pos, ".") && self.is(self.pos + 1, "*");
            if wildcard {
                self.pos += 2;
            }
            self.expect(";")?;
            if !is_static && !wildcard {
                let simple = name.rsplit('.').next().unwrap_or(&name).to_string();
                self.imports.insert(simple, name);
            }
        }
        while self.pos < self.toks.len() {
            if self.is(self.pos, ";") {
                self.pos += 1;
                continue;
            }
            let start = self.pos;
            let mods = self.modifiers()?;
            match self.decl_kind_at(self.pos) {
                Some(kind) => self.type_decl(start, mods, kind, None)?,
                None => return Err(self.syntax(&["class", "interface", "enum", "record"])),
            }
        }
        Ok(())
    }

    fn qualify_with(&self, raw: &str, type_params: &HashSet<String>) -> String {
        let cut = raw.find(['.', '<', '[']).unwrap_or(raw.len());
        let (head, rest) = raw.split_at(cut);
        if PRIMITIVE_KEYWORDS.contains(&head) || head == "var" {
            return raw.to_string();
        }
        if type_params.contains(head) && !rest.starts_with('.') {
            return format!("Object{}", rest.trim_start_matches(|c| c != '['));
        }
        match self.imports.get(head) {
            Some(q) => format!("{q}{rest}"),
            None => raw.to_string(),
        }
    }

    fn type_params(&mut self, into: &mut HashSet<String>) -> Result<()> {
        if !self.is(self.pos, "<") {
            return Ok(());
        }
        let mut depth = 0;
        loop {
            let Some(t) = self.tok(self.pos) else {
                return Err(self.syntax(&[">"]));
            };
            if t.is("<") {
                depth += 1;
            } else if t.is(">") {
                depth -= 1;
                if depth == 0 {
                    self.pos += 1;
                    return Ok(());
                }
            } else if depth == 1 && t.is_ident() {
                let prev = &self.toks[self.pos - 1];
                if prev.is("<") || prev.is(",") {
                    into.insert(t.text.clone());
                }
            }
            self.pos += 1;
        }
    }

    fn type_list(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        loop {
            while self.is(self.pos, "@") {
                self.skip_annotation()?;
            }
            let (ty, after) = parse_type(self.toks, self.pos, self.toks.len()).ok_or_else(|| self.syntax(&["type"]))?;
            out.push(ty);
            self.pos = after;
            if self.is(self.pos, ",") {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }

    /// First line of a declaration, pulled up over comment-only lines
    /// directly above it.
    fn decl_start_line(&self, start: usize) -> usize {
        let mut line = self.toks[start].line;
        while line > 1 {
            match self.flags.get(line - 2) {
                Some(f) if f.comment && !f.code => line -= 1,
                _ => break,
            }
        }
        line
    }

    fn comment_lines(&self, from: usize, to: usize) -> u32 {
        (from..=to)
            .filter(|l| self.flags.get(l - 1).is_some_and(|f| f.comment))
            .count() as u32
    }

    fn type_decl(&mut self, start: usize, mods: Mods, kind: DeclKind, outer: Option<&Outer>) -> Result<()> {
        self.pos += if kind == DeclKind::Annotation { 2 } else { 1 };
        let simple = self.ident()?;
        let name = match (outer, &self.package) {
            (Some(o), _) => format!("{}.{simple}", o.name),
            (None, Some(p)) => format!("{p}.{simple}"),
            (None, None) => simple.clone(),
        };
        let mut type_params = outer.map(|o| o.type_params.clone()).unwrap_or_default();
        self.type_params(&mut type_params)?;

        let mut attributes = Vec::new();
        if kind == DeclKind::Record && self.is(self.pos, "(") {
            let close = self.close_of(self.pos)?;
            for (ty, pname) in self.params((self.pos + 1, close))? {
                attributes.push(AttributeFacts {
                    name: pname,
                    declared_type: self.qualify_with(&ty, &type_params),
                    visibility: Visibility::Private,
                    is_static: false,
                });
            }
            self.pos = close + 1;
        }
        let mut extends = Vec::new();
        loop {
            if self.is(self.pos, "extends") || self.is(self.pos, "implements") {
                self.pos += 1;
                extends.extend(self.type_list()?);
            } else if self.is_ident_text(self.pos, "permits") {
                self.pos += 1;
                self.type_list()?;
            } else {
                break;
            }
        }
        let extends: Vec<String> = extends.iter().map(|t| self.qualify_with(t, &type_params)).collect();
        if !self.is(self.pos, "{") {
            return Err(self.syntax(&["{"]));
        }
        let open = self.pos;
        let close = self.close_of(open)?;

        let class_kind = match kind {
            DeclKind::Interface | DeclKind::Annotation => ClassKind::Interface,
            _ if mods.is_abstract => ClassKind::AbstractClass,
            _ => ClassKind::Class,
        };
        let slot = self.classes.len();
        self.classes.push(ClassFacts::new(name.clone(), class_kind));

        let is_interface = class_kind == ClassKind::Interface;
        let ctx = Outer {
            name: name.clone(),
            in_interface: is_interface,
            type_params,
        };
        let super_type = if kind == DeclKind::Class {
            extends.first().cloned()
        } else {
            None
        };
        self.pos = open + 1;
        let mut members = Members {
            attributes,
            methods: Vec::new(),
            statements: 0,
            pending_bodies: Vec::new(),
        };
        if kind == DeclKind::Enum {
            self.enum_constants(close, &name, &mut members)?;
        }
        self.members(close, &ctx, &simple, &mut members)?;
        self.pos = close + 1;

        // method references need the full field table, so they are resolved last
        let fields: HashMap<String, String> = members
            .attributes
            .iter()
            .map(|a| (a.name.clone(), a.declared_type.clone()))
            .collect();
        let mut methods = members.methods;
        for (idx, span, params, stmts) in members.pending_bodies {
            let tp = &ctx.type_params;
            let qualify = |s: &str| self.qualify_with(s, tp);
            let mut vars: HashMap<String, String> = params.into_iter().collect();
            collect_locals(&stmts, &qualify, &mut vars);
            collect_lambda_params(self.toks, span, &mut vars);
            let scope = Scope {
                class: &name,
                super_type: super_type.as_deref(),
                fields: &fields,
                vars,
                qualify: &qualify,
            };
            let mut scanner = Scanner::new(self.toks, &scope);
            scanner.scan(span);
            let refs = scanner.refs;
            let m: &mut MethodFacts = &mut methods[idx];
            m.accesses = refs.accesses.into_iter().collect();
            m.invokes = refs
                .invokes
                .into_iter()
                .map(|target| InvokeFacts { target, count: 1 })
                .collect();
        }

        let first_line = self.decl_start_line(start);
        let last_line = self.toks[close].line;
        let comment_lines = self.comment_lines(first_line, last_line);
        let c = &mut self.classes[slot];
        c.extends = extends;
        c.lines = (last_line - first_line + 1) as u32;
        c.comment_lines = comment_lines;
        c.statements = members.statements;
        c.attributes = members.attributes;
        c.methods = methods;
        c.halstead = Some(halstead_counts(&self.toks[start..=close]));
        Ok(())
    }

    fn enum_constants(&mut self, close: usize, enum_name: &str, m: &mut Members) -> Result<()> {
        loop {
            while self.is(self.pos, "@") {
                self.skip_annotation()?;
            }
            if self.pos >= close || self.is(self.pos, ";") {
                if self.pos < close {
                    self.pos += 1;
                }
                return Ok(());
            }
            let Some(t) = self.tok(self.pos).filter(|t| t.is_ident()) else {
                return Ok(());
            };
            m.attributes.push(AttributeFacts {
                name: t.text.clone(),
                declared_type: enum_name.to_string(),
                visibility: Visibility::Public,
                is_static: true,
            });
            self.pos += 1;
            if self.is(self.pos, "(") {
                self.pos = self.close_of(self.pos)? + 1;
            }
            if self.is(self.pos, "{") {
                self.pos = self.close_of(self.pos)? + 1;
            }
            if self.is(self.pos, ",") {
                self.pos += 1;
            }
        }
    }

    /// `Type name, Type name` inside a parameter list.
    fn params(&self, (lo, hi): (usize, usize)) -> Result<Vec<(String, String)>> {
        let mut out = Vec::new();
        if lo >= hi {
            return Ok(out);
        }
        for (plo, phi) in split_top(self.toks, (lo, hi), ",") {
            let mut i = plo;
            loop {
                match self.tok(i) {
                    Some(t) if t.is("final") => i += 1,
                    Some(t) if t.is("@") => {
                        i += 2;
                        while self.is(i, ".") {
                            i += 2;
                        }
                        if self.is(i, "(") {
                            i = self.close_of(i)? + 1;
                        }
                    }
                    _ => break,
                }
            }
            let (ty, after) = parse_type(self.toks, i, phi).ok_or_else(|| Error::Syntax {
                line: self.toks.get(i).map_or(self.line(), |t| t.line),
                expected: vec!["parameter type".into()],
            })?;
            match self.tok(after) {
                Some(t) if t.is("this") => continue,
                Some(t) if t.is_ident() && after < phi => {
                    let mut ty = ty;
                    let mut k = after + 1;
                    while self.is(k, "[") && self.is(k + 1, "]") && k < phi {
                        ty.push_str("[]");
                        k += 2;
                    }
                    out.push((ty, t.text.clone()));
                }
                _ => {
                    return Err(Error::Syntax {
                        line: self.toks.get(after).map_or(self.line(), |t| t.line),
                        expected: vec!["parameter name".into()],
                    })
                }
            }
        }
        Ok(out)
    }

    fn members(&mut self, close: usize, ctx: &Outer, simple: &str, out: &mut Members) -> Result<()> {
        while self.pos < close {
            if self.is(self.pos, ";") {
                self.pos += 1;
                continue;
            }
            if self.is(self.pos, "{") || (self.is(self.pos, "static") && self.is(self.pos + 1, "{")) {
                if self.is(self.pos, "static") {
                    self.pos += 1;
                }
                let c = self.close_of(self.pos)?;
                let stmts = BodyParser::new(self.toks, (self.pos + 1, c)).parse_all();
                out.statements += count_statements(&stmts);
                self.pos = c + 1;
                continue;
            }
            let start = self.pos;
            let mods = self.modifiers()?;
            if let Some(kind) = self.decl_kind_at(self.pos) {
                self.type_decl(start, mods, kind, Some(ctx))?;
                continue;
            }
            let mut tp = ctx.type_params.clone();
            self.type_params(&mut tp)?;
            let is_ctor = self.is_ident_text(self.pos, simple) && self.is(self.pos + 1, "(");
            let (ty, name) = if is_ctor {
                self.pos += 1;
                (String::new(), simple.to_string())
            } else {
                while self.is(self.pos, "@") {
                    self.skip_annotation()?;
                }
                let (ty, after) = parse_type(self.toks, self.pos, close).ok_or_else(|| self.syntax(&["type", "}"]))?;
                self.pos = after;
                (ty, self.ident()?)
            };
            if self.is(self.pos, "(") {
                self.method(start, mods, ctx, name, is_ctor, &tp, out)?;
            } else {
                self.fields(mods, ctx, ty, name, close, out)?;
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn method(
        &mut self,
        start: usize,
        mods: Mods,
        ctx: &Outer,
        name: String,
        is_ctor: bool,
        type_params: &HashSet<String>,
        out: &mut Members,
    ) -> Result<()> {
        let pclose = self.close_of(self.pos)?;
        let params = self.params((self.pos + 1, pclose))?;
        self.pos = pclose + 1;
        while self.is(self.pos, "[") && self.is(self.pos + 1, "]") {
            self.pos += 2;
        }
        if self.is(self.pos, "throws") {
            self.pos += 1;
            self.type_list()?;
        }
        if self.is(self.pos, "default") {
            // annotation member default value
            while self.pos < self.toks.len() && !self.is(self.pos, ";") {
                self.pos += 1;
            }
        }
        let mut m = MethodFacts::new(name);
        m.param_types = params.iter().map(|(t, _)| self.qualify_with(t, type_params)).collect();
        m.visibility = mods.visibility.unwrap_or(if ctx.in_interface {
            Visibility::Public
        } else {
            Visibility::Default
        });
        m.is_static = mods.is_static;
        m.is_constructor = is_ctor;
        let signature = format!("{}({})", m.name, m.param_types.join(","));
        if self.is(self.pos, "{") {
            let open = self.pos;
            let close = self.close_of(open)?;
            let stmts = BodyParser::new(self.toks, (open + 1, close)).parse_all();
            m.statements = count_statements(&stmts);
            m.cfg = Some(FlowBuilder::new(self.toks).build(&stmts)?);
            m.halstead = Some(halstead_counts(&self.toks[open..=close]));
            m.lines = (self.toks[close].line - self.toks[start].line + 1) as u32;
            m.is_abstract = mods.is_abstract;
            let vars: Vec<(String, String)> = params
                .iter()
                .map(|(t, n)| (n.clone(), self.qualify_with(t, type_params)))
                .collect();
            out.pending_bodies
                .push((out.methods.len(), (open + 1, close), vars, stmts));
            self.bodies.push(MethodTokens {
                class: ctx_name_for_body(ctx),
                signature,
                tokens: self.toks[open..=close].to_vec(),
            });
            self.pos = close + 1;
        } else {
            if !self.is(self.pos, ";") {
                return Err(self.syntax(&["{", ";"]));
            }
            m.lines = (self.toks[self.pos].line - self.toks[start].line + 1) as u32;
            m.is_abstract = mods.is_abstract || (ctx.in_interface && !mods.is_static && !mods.is_native);
            self.bodies.push(MethodTokens {
                class: ctx_name_for_body(ctx),
                signature,
                tokens: Vec::new(),
            });
            self.pos += 1;
        }
        out.methods.push(m);
        Ok(())
    }

    fn fields(
        &mut self,
        mods: Mods,
        ctx: &Outer,
        ty: String,
        first: String,
        close: usize,
        out: &mut Members,
    ) -> Result<()> {
        let mut name = first;
        let mut any_init = false;
        loop {
            let mut declared = ty.clone();
            while self.is(self.pos, "[") && self.is(self.pos + 1, "]") {
                declared.push_str("[]");
                self.pos += 2;
            }
            if self.is(self.pos, "=") {
                any_init = true;
                let lo = self.pos + 1;
                let mut i = lo;
                let mut depth = 0i32;
                while i < close {
                    let t = &self.toks[i];
                    if t.kind == TokenKind::Op {
                        match t.text.as_str() {
                            "(" | "[" | "{" => depth += 1,
                            ")" | "]" | "}" => depth -= 1,
                            "," | ";" if depth == 0 => break,
                            _ => {}
                        }
                    }
                    i += 1;
                }
                self.pos = i;
            }
            out.attributes.push(AttributeFacts {
                name: name.clone(),
                declared_type: self.qualify_with(&declared, &ctx.type_params),
                visibility: mods.visibility.unwrap_or(if ctx.in_interface {
                    Visibility::Public
                } else {
                    Visibility::Default
                }),
                is_static: mods.is_static || ctx.in_interface,
            });
            if self.is(self.pos, ",") {
                self.pos += 1;
                name = self.ident()?;
                continue;
            }
            self.expect(";")?;
            break;
        }
        if any_init {
            out.statements += 1;
        }
        Ok(())
    }
}

fn ctx_name_for_body(ctx: &Outer) -> String {
    ctx.name.clone()
}

type PendingBody = (usize, (usize, usize), Vec<(String, String)>, Vec<super::body::Stmt>);

struct Members {
    attributes: Vec<AttributeFacts>,
    methods: Vec<MethodFacts>,
    statements: u32,
    pending_bodies: Vec<PendingBody>,
}
