//! Tolerant statement parser for method bodies. Anything it does not
//! recognize becomes an opaque expression statement running to the next `;`.

use super::lexer::{Token, TokenKind};

/// Half-open token range.
pub(crate) type Span = (usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Declarator {
    pub name: String,
    pub init: Option<Span>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Catch {
    pub types: Vec<String>,
    pub name: String,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Arm {
    pub labels: Vec<Span>,
    pub default: bool,
    pub arrow: bool,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Stmt {
    Expr(Span),
    Local {
        ty: String,
        vars: Vec<Declarator>,
    },
    Block(Vec<Stmt>),
    If {
        cond: Span,
        then: Box<Stmt>,
        els: Option<Box<Stmt>>,
    },
    While {
        cond: Span,
        body: Box<Stmt>,
    },
    DoWhile {
        body: Box<Stmt>,
        cond: Span,
    },
    For {
        init: Vec<Stmt>,
        cond: Option<Span>,
        update: Option<Span>,
        body: Box<Stmt>,
    },
    ForEach {
        ty: String,
        var: String,
        iter: Span,
        body: Box<Stmt>,
    },
    Switch {
        selector: Span,
        arms: Vec<Arm>,
    },
    Try {
        resources: Vec<Stmt>,
        body: Vec<Stmt>,
        catches: Vec<Catch>,
        finally: Option<Vec<Stmt>>,
    },
    Return(Option<Span>),
    Throw(Span),
    Break(Option<String>),
    Continue(Option<String>),
    Labeled {
        label: String,
        body: Box<Stmt>,
    },
    Sync {
        lock: Span,
        body: Vec<Stmt>,
    },
    Yield(Span),
    Assert(Span),
    Empty,
}

impl Stmt {
    pub fn is_loop(&self) -> bool {
        matches!(
            self,
            Stmt::While { .. } | Stmt::DoWhile { .. } | Stmt::For { .. } | Stmt::ForEach { .. }
        )
    }
}

/// Executable statements: declarations count only when they initialize.
pub(crate) fn count_statements(stmts: &[Stmt]) -> u32 {
    stmts.iter().map(count_one).sum()
}

fn count_one(s: &Stmt) -> u32 {
    match s {
        Stmt::Empty => 0,
        Stmt::Local { vars, .. } => u32::from(vars.iter().any(|v| v.init.is_some())),
        Stmt::Block(b) => count_statements(b),
        Stmt::Labeled { body, .. } => count_one(body),
        Stmt::If { then, els, .. } => 1 + count_one(then) + els.as_deref().map_or(0, count_one),
        Stmt::While { body, .. } | Stmt::DoWhile { body, .. } | Stmt::ForEach { body, .. } => 1 + count_one(body),
        Stmt::For { init, body, .. } => 1 + count_statements(init) + count_one(body),
        Stmt::Switch { arms, .. } => 1 + arms.iter().map(|a| count_statements(&a.body)).sum::<u32>(),
        Stmt::Try {
            resources,
            body,
            catches,
            finally,
        } => {
            1 + count_statements(resources)
                + count_statements(body)
                + catches.iter().map(|c| count_statements(&c.body)).sum::<u32>()
                + finally.as_deref().map_or(0, count_statements)
        }
        Stmt::Sync { body, .. } => 1 + count_statements(body),
        _ => 1,
    }
}

pub(crate) const PRIMITIVE_KEYWORDS: &[&str] = &[
    "boolean", "byte", "char", "double", "float", "int", "long", "short", "void",
];

/// Index of the bracket closing the one at `open`, counting all bracket
/// kinds together. Returns `None` when it is not closed before `end`.
pub(crate) fn matching(toks: &[Token], open: usize, end: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, t) in toks.iter().enumerate().take(end).skip(open) {
        if t.kind != TokenKind::Op {
            continue;
        }
        match t.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
                if depth < 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}

/// Top-level positions of `sep` inside `span`.
pub(crate) fn split_top(toks: &[Token], (lo, hi): Span, sep: &str) -> Vec<Span> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = lo;
    for i in lo..hi {
        let t = &toks[i];
        if t.kind != TokenKind::Op {
            continue;
        }
        match t.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            s if s == sep && depth == 0 => {
                parts.push((start, i));
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push((start, hi));
    parts
}

pub(crate) struct BodyParser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: usize,
}

impl<'a> BodyParser<'a> {
    pub fn new(toks: &'a [Token], (lo, hi): Span) -> Self {
        BodyParser { toks, pos: lo, end: hi }
    }

    pub fn parse_all(mut self) -> Vec<Stmt> {
        let mut out = Vec::new();
        while self.pos < self.end {
            out.push(self.stmt());
        }
        out
    }

    fn tok(&self, i: usize) -> Option<&'a Token> {
        if i < self.end {
            self.toks.get(i)
        } else {
            None
        }
    }

    fn is(&self, i: usize, text: &str) -> bool {
        self.tok(i).is_some_and(|t| t.is(text))
    }

    fn close(&self, open: usize) -> usize {
        matching(self.toks, open, self.end).unwrap_or(self.end.saturating_sub(1).max(open))
    }

    /// `( ... )` at `pos`; returns the inner span and moves past `)`.
    fn parens(&mut self) -> Span {
        if !self.is(self.pos, "(") {
            let e = self.expr_end(self.pos);
            let span = (self.pos, e);
            self.pos = e;
            return span;
        }
        let c = self.close(self.pos);
        let span = (self.pos + 1, c);
        self.pos = c + 1;
        span
    }

    /// End of an expression starting at `from`: the top-level `;`, or an
    /// unmatched closer, or the end of the range.
    fn expr_end(&self, from: usize) -> usize {
        let mut depth = 0i32;
        for i in from..self.end {
            let t = &self.toks[i];
            if t.kind != TokenKind::Op {
                continue;
            }
            match t.text.as_str() {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => {
                    depth -= 1;
                    if depth < 0 {
                        return i;
                    }
                }
                ";" if depth == 0 => return i,
                _ => {}
            }
        }
        self.end
    }

    /// Expression up to and including `;`.
    fn expr_stmt(&mut self) -> Span {
        let e = self.expr_end(self.pos);
        let span = (self.pos, e);
        self.pos = if self.is(e, ";") { e + 1 } else { e.max(self.pos + 1) };
        span
    }

    fn block_or_stmt(&mut self) -> Vec<Stmt> {
        match self.stmt() {
            Stmt::Block(b) => b,
            s => vec![s],
        }
    }

    fn block(&mut self) -> Vec<Stmt> {
        if !self.is(self.pos, "{") {
            return vec![self.stmt()];
        }
        let c = self.close(self.pos);
        let inner = BodyParser::new(self.toks, (self.pos + 1, c)).parse_all();
        self.pos = c + 1;
        inner
    }

    pub fn stmt(&mut self) -> Stmt {
        let Some(t) = self.tok(self.pos) else {
            return Stmt::Empty;
        };
        let start = self.pos;
        match (t.kind, t.text.as_str()) {
            (TokenKind::Op, "{") => Stmt::Block(self.block()),
            (TokenKind::Op, ";") => {
                self.pos += 1;
                Stmt::Empty
            }
            (TokenKind::Keyword, "if") => {
                self.pos += 1;
                let cond = self.parens();
                let then = Box::new(self.stmt());
                let els = if self.is(self.pos, "else") {
                    self.pos += 1;
                    Some(Box::new(self.stmt()))
                } else {
                    None
                };
                Stmt::If { cond, then, els }
            }
            (TokenKind::Keyword, "while") => {
                self.pos += 1;
                let cond = self.parens();
                Stmt::While {
                    cond,
                    body: Box::new(self.stmt()),
                }
            }
            (TokenKind::Keyword, "do") => {
                self.pos += 1;
                let body = Box::new(self.stmt());
                let cond = if self.is(self.pos, "while") {
                    self.pos += 1;
                    self.parens()
                } else {
                    (self.pos, self.pos)
                };
                if self.is(self.pos, ";") {
                    self.pos += 1;
                }
                Stmt::DoWhile { body, cond }
            }
            (TokenKind::Keyword, "for") => {
                self.pos += 1;
                let header = self.parens();
                self.for_stmt(header)
            }
            (TokenKind::Keyword, "switch") => {
                self.pos += 1;
                let selector = self.parens();
                let arms = self.switch_arms();
                Stmt::Switch { selector, arms }
            }
            (TokenKind::Keyword, "try") => self.try_stmt(),
            (TokenKind::Keyword, "return") => {
                self.pos += 1;
                let span = self.expr_stmt();
                Stmt::Return((span.0 < span.1).then_some(span))
            }
            (TokenKind::Keyword, "throw") => {
                self.pos += 1;
                Stmt::Throw(self.expr_stmt())
            }
            (TokenKind::Keyword, "break") | (TokenKind::Keyword, "continue") => {
                let is_break = t.text == "break";
                self.pos += 1;
                let label = self.tok(self.pos).filter(|t| t.is_ident()).map(|t| t.text.clone());
                if label.is_some() {
                    self.pos += 1;
                }
                if self.is(self.pos, ";") {
                    self.pos += 1;
                }
                if is_break {
                    Stmt::Break(label)
                } else {
                    Stmt::Continue(label)
                }
            }
            (TokenKind::Keyword, "synchronized") if self.is(start + 1, "(") => {
                self.pos += 1;
                let lock = self.parens();
                Stmt::Sync {
                    lock,
                    body: self.block(),
                }
            }
            (TokenKind::Keyword, "assert") => {
                self.pos += 1;
                Stmt::Assert(self.expr_stmt())
            }
            (TokenKind::Keyword, "else" | "case" | "default" | "catch" | "finally") => {
                self.pos += 1;
                Stmt::Empty
            }
            (TokenKind::Op, ")" | "]" | "}") => {
                self.pos += 1;
                Stmt::Empty
            }
            (TokenKind::Ident, _) if self.is(start + 1, ":") => {
                self.pos += 2;
                Stmt::Labeled {
                    label: t.text.clone(),
                    body: Box::new(self.stmt()),
                }
            }
            (TokenKind::Ident, "yield") if self.yield_at(start) => {
                self.pos += 1;
                Stmt::Yield(self.expr_stmt())
            }
            _ if self.local_class_at(start) => {
                self.skip_local_class();
                Stmt::Empty
            }
            _ => {
                if let Some((ty, after)) = self.local_type_at(start) {
                    self.pos = after;
                    let vars = self.declarators(self.end);
                    if self.is(self.pos, ";") {
                        self.pos += 1;
                    }
                    Stmt::Local { ty, vars }
                } else {
                    Stmt::Expr(self.expr_stmt())
                }
            }
        }
    }

    /// `yield` starts a statement unless it is used as a plain name.
    fn yield_at(&self, i: usize) -> bool {
        match self.tok(i + 1) {
            Some(n) if n.kind == TokenKind::Op => matches!(n.text.as_str(), "(" | "-" | "+" | "!" | "~"),
            Some(_) => true,
            None => false,
        }
    }

    fn local_class_at(&self, mut i: usize) -> bool {
        while let Some(t) = self.tok(i) {
            if t.is("final") || t.is("abstract") || t.is("static") || t.is("strictfp") {
                i += 1;
            } else {
                break;
            }
        }
        match self.tok(i) {
            Some(t) if t.is("class") || t.is("interface") || t.is("enum") => true,
            Some(t) if t.is_ident() && t.text == "record" => {
                self.tok(i + 1).is_some_and(|n| n.is_ident()) && (self.is(i + 2, "(") || self.is(i + 2, "<"))
            }
            _ => false,
        }
    }

    fn skip_local_class(&mut self) {
        let mut i = self.pos;
        while i < self.end && !self.is(i, "{") {
            i += 1;
        }
        self.pos = if i < self.end { self.close(i) + 1 } else { self.end };
    }

    /// Recognizes `[final] [@Ann] Type name` at `i`; returns the type text
    /// and the index of the first declarator name.
    pub fn local_type_at(&self, mut i: usize) -> Option<(String, usize)> {
        loop {
            let t = self.tok(i)?;
            if t.is("final") {
                i += 1;
            } else if t.is("@") && self.tok(i + 1).is_some_and(|n| n.is_ident()) {
                i += 2;
                while self.is(i, ".") && self.tok(i + 1).is_some_and(|n| n.is_ident()) {
                    i += 2;
                }
                if self.is(i, "(") {
                    i = self.close(i) + 1;
                }
            } else {
                break;
            }
        }
        let (ty, after) = parse_type(self.toks, i, self.end)?;
        let name = self.tok(after)?;
        if !name.is_ident() {
            return None;
        }
        match self.tok(after + 1) {
            Some(n) if n.is("=") || n.is(";") || n.is(",") || n.is("[") || n.is(":") => Some((ty, after)),
            None => Some((ty, after)),
            _ => None,
        }
    }

    /// `name [= init] {, name [= init]}` up to `;` or `limit`.
    fn declarators(&mut self, limit: usize) -> Vec<Declarator> {
        let mut vars = Vec::new();
        while self.pos < limit {
            let Some(t) = self.tok(self.pos).filter(|t| t.is_ident()) else {
                break;
            };
            let name = t.text.clone();
            self.pos += 1;
            while self.is(self.pos, "[") && self.is(self.pos + 1, "]") {
                self.pos += 2;
            }
            let mut init = None;
            if self.is(self.pos, "=") {
                let lo = self.pos + 1;
                let parts = split_top(self.toks, (lo, self.expr_end(lo).min(limit)), ",");
                let hi = parts[0].1;
                init = Some((lo, hi));
                self.pos = hi;
            }
            vars.push(Declarator { name, init });
            if self.is(self.pos, ",") {
                self.pos += 1;
            } else {
                break;
            }
        }
        vars
    }

    fn for_stmt(&mut self, header: Span) -> Stmt {
        let parts = split_top(self.toks, header, ";");
        if parts.len() >= 3 {
            let (ilo, ihi) = parts[0];
            let mut init = Vec::new();
            if ilo < ihi {
                let sub = BodyParser {
                    toks: self.toks,
                    pos: ilo,
                    end: ihi,
                };
                if let Some((ty, after)) = sub.local_type_at(ilo) {
                    let mut sub = BodyParser {
                        toks: self.toks,
                        pos: after,
                        end: ihi,
                    };
                    let vars = sub.declarators(ihi);
                    init.push(Stmt::Local { ty, vars });
                } else {
                    init.extend(split_top(self.toks, (ilo, ihi), ",").into_iter().map(Stmt::Expr));
                }
            }
            let cond = (parts[1].0 < parts[1].1).then_some(parts[1]);
            let update = (parts[2].0 < parts[2].1).then_some(parts[2]);
            let body = Box::new(self.stmt());
            return Stmt::For {
                init,
                cond,
                update,
                body,
            };
        }
        // enhanced for: `T x : expr`
        let colon = (header.0..header.1).find(|&i| self.toks[i].is(":"));
        let (ty, var, iter) = match colon {
            Some(c) => {
                let sub = BodyParser {
                    toks: self.toks,
                    pos: header.0,
                    end: c,
                };
                match sub.local_type_at(header.0) {
                    Some((ty, after)) => (ty, self.toks[after].text.clone(), (c + 1, header.1)),
                    None => ("?".into(), String::new(), (c + 1, header.1)),
                }
            }
            None => ("?".into(), String::new(), header),
        };
        let body = Box::new(self.stmt());
        Stmt::ForEach { ty, var, iter, body }
    }

    fn switch_arms(&mut self) -> Vec<Arm> {
        if !self.is(self.pos, "{") {
            return Vec::new();
        }
        let close = self.close(self.pos);
        let mut inner = BodyParser {
            toks: self.toks,
            pos: self.pos + 1,
            end: close,
        };
        self.pos = close + 1;
        let mut arms: Vec<Arm> = Vec::new();
        let mut open_arm = false;
        while inner.pos < inner.end {
            let is_case = inner.is(inner.pos, "case");
            let is_default =
                inner.is(inner.pos, "default") && (inner.is(inner.pos + 1, ":") || inner.is(inner.pos + 1, "->"));
            if !is_case && !is_default {
                let s = inner.stmt();
                if let Some(a) = arms.last_mut() {
                    a.body.push(s);
                }
                open_arm = false;
                continue;
            }
            inner.pos += 1;
            let mut labels = Vec::new();
            if is_case {
                let lo = inner.pos;
                let mut depth = 0i32;
                let mut i = lo;
                while i < inner.end {
                    let t = &inner.toks[i];
                    if t.kind == TokenKind::Op {
                        match t.text.as_str() {
                            "(" | "[" | "{" => depth += 1,
                            ")" | "]" | "}" => depth -= 1,
                            ":" | "->" if depth == 0 => break,
                            _ => {}
                        }
                    }
                    i += 1;
                }
                labels = split_top(inner.toks, (lo, i), ",");
                inner.pos = i;
            }
            let arrow = inner.is(inner.pos, "->");
            inner.pos += 1;
            if arrow {
                let body = inner.block_or_stmt();
                arms.push(Arm {
                    labels,
                    default: is_default,
                    arrow,
                    body,
                });
                open_arm = false;
                continue;
            }
            match arms.last_mut() {
                Some(a) if open_arm && a.body.is_empty() => {
                    a.labels.extend(labels);
                    a.default |= is_default;
                }
                _ => arms.push(Arm {
                    labels,
                    default: is_default,
                    arrow,
                    body: Vec::new(),
                }),
            }
            open_arm = true;
        }
        arms
    }

    fn try_stmt(&mut self) -> Stmt {
        self.pos += 1;
        let mut resources = Vec::new();
        if self.is(self.pos, "(") {
            let span = self.parens();
            for (lo, hi) in split_top(self.toks, span, ";") {
                if lo >= hi {
                    continue;
                }
                let sub = BodyParser {
                    toks: self.toks,
                    pos: lo,
                    end: hi,
                };
                match sub.local_type_at(lo) {
                    Some((ty, after)) => {
                        let mut sub = BodyParser {
                            toks: self.toks,
                            pos: after,
                            end: hi,
                        };
                        let vars = sub.declarators(hi);
                        resources.push(Stmt::Local { ty, vars });
                    }
                    None => resources.push(Stmt::Expr((lo, hi))),
                }
            }
        }
        let body = self.block();
        let mut catches = Vec::new();
        while self.is(self.pos, "catch") {
            self.pos += 1;
            let (lo, hi) = self.parens();
            let mut types = Vec::new();
            let mut name = String::new();
            let mut i = lo;
            while i < hi {
                let t = &self.toks[i];
                if t.is("final") || t.is("|") {
                    i += 1;
                } else if let Some((ty, after)) = parse_type(self.toks, i, hi) {
                    types.push(ty);
                    i = after;
                    if i + 1 == hi && self.toks[i].is_ident() {
                        name = self.toks[i].text.clone();
                        break;
                    }
                } else {
                    i += 1;
                }
            }
            let body = self.block();
            catches.push(Catch { types, name, body });
        }
        let finally = if self.is(self.pos, "finally") {
            self.pos += 1;
            Some(self.block())
        } else {
            None
        };
        Stmt::Try {
            resources,
            body,
            catches,
            finally,
        }
    }
}

/// Parses a type reference at `i`: primitive or qualified name with optional
/// type arguments, array brackets and varargs. Returns compact text and the
/// index after the type.
pub(crate) fn parse_type(toks: &[Token], mut i: usize, end: usize) -> Option<(String, usize)> {
    let get = |i: usize| if i < end { toks.get(i) } else { None };
    let first = get(i)?;
    let mut text = String::new();
    if first.kind == TokenKind::Keyword && PRIMITIVE_KEYWORDS.contains(&first.text.as_str()) {
        text.push_str(&first.text);
        i += 1;
    } else if first.is_ident() {
        loop {
            text.push_str(&get(i)?.text);
            i += 1;
            if get(i).is_some_and(|t| t.is("<")) {
                let close = generic_close(toks, i, end)?;
                for t in &toks[i..=close] {
                    if t.kind == TokenKind::Keyword && (t.text == "extends" || t.text == "super") {
                        text.push(' ');
                        text.push_str(&t.text);
                        text.push(' ');
                    } else {
                        text.push_str(&t.text);
                    }
                }
                i = close + 1;
            }
            if get(i).is_some_and(|t| t.is(".")) && get(i + 1).is_some_and(|t| t.is_ident()) {
                text.push('.');
                i += 1;
            } else {
                break;
            }
        }
    } else {
        return None;
    }
    loop {
        if get(i).is_some_and(|t| t.is("[")) && get(i + 1).is_some_and(|t| t.is("]")) {
            text.push_str("[]");
            i += 2;
        } else if get(i).is_some_and(|t| t.is("...")) {
            text.push_str("[]");
            i += 1;
        } else if get(i).is_some_and(|t| t.is("@")) && get(i + 1).is_some_and(|t| t.is_ident()) {
            // annotated array dimension
            i += 2;
        } else {
            break;
        }
    }
    Some((text, i))
}

/// Closing `>` of a type-argument list opened at `open`; gives up on
/// anything that cannot appear inside type arguments.
pub(crate) fn generic_close(toks: &[Token], open: usize, end: usize) -> Option<usize> {
    let mut depth = 0;
    for (i, t) in toks.iter().enumerate().take(end).skip(open) {
        match (t.kind, t.text.as_str()) {
            (TokenKind::Op, "<") => depth += 1,
            (TokenKind::Op, ">") => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            (TokenKind::Op, "," | "." | "?" | "[" | "]" | "&" | "@")
            | (TokenKind::Ident, _)
            | (TokenKind::Keyword, _) => {}
            _ => return None,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::lexer::tokenize;

    fn parse(src: &str) -> Vec<Stmt> {
        let toks = tokenize(src).unwrap();
        BodyParser::new(&toks, (0, toks.len())).parse_all()
    }

    #[test]
    fn statements_counted() {
        let s = parse("int x; int y = 1; foo(); if (a) { b(); } else c(); return x;");
        assert_eq!(count_statements(&s), 6);
    }

    #[test]
    fn local_declaration_with_generics() {
        let s = parse("Map<String, List<Foo>> m = new HashMap<>(), n;");
        match &s[0] {
            Stmt::Local { ty, vars } => {
                assert_eq!(ty, "Map<String,List<Foo>>");
                assert_eq!(vars.len(), 2);
                assert!(vars[0].init.is_some() && vars[1].init.is_none());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comparison_is_not_declaration() {
        let s = parse("a < b; x = y;");
        assert!(matches!(s[0], Stmt::Expr(_)));
        assert!(matches!(s[1], Stmt::Expr(_)));
    }

    #[test]
    fn switch_groups_labels() {
        let s = parse("switch (x) { case 1: case 2: a(); break; case 3: b(); default: c(); }");
        match &s[0] {
            Stmt::Switch { arms, .. } => {
                assert_eq!(arms.len(), 3);
                assert_eq!(arms[0].labels.len(), 2);
                assert!(arms[2].default);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn arrow_switch() {
        let s = parse("switch (x) { case 1, 2 -> a(); default -> { b(); } }");
        match &s[0] {
            Stmt::Switch { arms, .. } => {
                assert_eq!(arms.len(), 2);
                assert!(arms.iter().all(|a| a.arrow));
                assert_eq!(arms[0].labels.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn try_catch_finally() {
        let s = parse("try (R r = open()) { a(); } catch (IOException | RuntimeException e) { b(); } finally { c(); }");
        match &s[0] {
            Stmt::Try {
                resources,
                catches,
                finally,
                ..
            } => {
                assert_eq!(resources.len(), 1);
                assert_eq!(catches.len(), 1);
                assert_eq!(catches[0].types, ["IOException", "RuntimeException"]);
                assert_eq!(catches[0].name, "e");
                assert!(finally.is_some());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn labeled_loop_and_for_forms() {
        let s = parse("outer: for (int i = 0; i < n; i++) { for (String s : xs) continue outer; }");
        match &s[0] {
            Stmt::Labeled { label, body } => {
                assert_eq!(label, "outer");
                assert!(body.is_loop());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn local_class_is_skipped() {
        let s = parse("class L { void f() { } } x();");
        assert_eq!(s[0], Stmt::Empty);
        assert!(matches!(s[1], Stmt::Expr(_)));
    }

    #[test]
    fn lambda_block_stays_in_expression() {
        let s = parse("xs.forEach(x -> { a(); b(); }); y();");
        assert_eq!(s.len(), 2);
    }
}
