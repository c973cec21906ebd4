//! Static references inside a method body: which attributes it touches and
//! which methods it calls. Receiver types come from declared types of
//! locals, parameters and fields only; anything else is `?`.

use std::collections::{BTreeSet, HashMap};

use super::body::{generic_close, matching, parse_type, split_top, Span, Stmt};
use super::lexer::{Token, TokenKind};
use crate::model::erase;

pub(crate) const UNKNOWN: &str = "?";

#[derive(Debug, Default)]
pub(crate) struct Refs {
    pub accesses: BTreeSet<String>,
    pub invokes: Vec<String>,
}

pub(crate) struct Scope<'a> {
    pub class: &'a str,
    pub super_type: Option<&'a str>,
    pub fields: &'a HashMap<String, String>,
    pub vars: HashMap<String, String>,
    pub qualify: &'a dyn Fn(&str) -> String,
}

#[derive(Debug, Clone)]
enum Recv {
    /// Instance of a type.
    Value(String),
    /// The type itself (static access).
    Static(String),
    Unknown,
}

fn simple_name(ty: &str) -> &str {
    ty.rsplit('.').next().unwrap_or(ty)
}

fn is_constant_name(s: &str) -> bool {
    s.chars().any(|c| c.is_ascii_uppercase()) && !s.chars().any(|c| c.is_lowercase())
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_uppercase())
}

/// Collects declared local names and their types from a statement tree.
pub(crate) fn collect_locals(stmts: &[Stmt], qualify: &dyn Fn(&str) -> String, out: &mut HashMap<String, String>) {
    let add = |name: &str, ty: &str, out: &mut HashMap<String, String>| {
        if name.is_empty() {
            return;
        }
        let ty = if ty == "var" || ty == UNKNOWN {
            UNKNOWN.to_string()
        } else {
            qualify(ty)
        };
        out.insert(name.to_string(), ty);
    };
    for s in stmts {
        match s {
            Stmt::Local { ty, vars } => {
                for v in vars {
                    add(&v.name, ty, out);
                }
            }
            Stmt::Block(b) => collect_locals(b, qualify, out),
            Stmt::If { then, els, .. } => {
                collect_locals(std::slice::from_ref(then), qualify, out);
                if let Some(e) = els {
                    collect_locals(std::slice::from_ref(e), qualify, out);
                }
            }
            Stmt::While { body, .. } | Stmt::DoWhile { body, .. } | Stmt::Labeled { body, .. } => {
                collect_locals(std::slice::from_ref(body), qualify, out)
            }
            Stmt::For { init, body, .. } => {
                collect_locals(init, qualify, out);
                collect_locals(std::slice::from_ref(body), qualify, out);
            }
            Stmt::ForEach { ty, var, body, .. } => {
                add(var, ty, out);
                collect_locals(std::slice::from_ref(body), qualify, out);
            }
            Stmt::Switch { arms, .. } => {
                for a in arms {
                    collect_locals(&a.body, qualify, out);
                }
            }
            Stmt::Try {
                resources,
                body,
                catches,
                finally,
            } => {
                collect_locals(resources, qualify, out);
                collect_locals(body, qualify, out);
                for c in catches {
                    let ty = if c.types.len() == 1 {
                        c.types[0].as_str()
                    } else {
                        UNKNOWN
                    };
                    add(&c.name, ty, out);
                    collect_locals(&c.body, qualify, out);
                }
                if let Some(f) = finally {
                    collect_locals(f, qualify, out);
                }
            }
            Stmt::Sync { body, .. } => collect_locals(body, qualify, out),
            _ => {}
        }
    }
}

/// Lambda parameters (`x ->`, `(a, b) ->`) anywhere in the span.
pub(crate) fn collect_lambda_params(toks: &[Token], (lo, hi): Span, out: &mut HashMap<String, String>) {
    for i in lo..hi {
        if !toks[i].is("->") || i == 0 {
            continue;
        }
        let prev = &toks[i - 1];
        if prev.is_ident() {
            out.entry(prev.text.clone()).or_insert_with(|| UNKNOWN.into());
        } else if prev.is(")") {
            let mut j = i - 1;
            while j > lo && !toks[j].is("(") {
                j -= 1;
            }
            for k in j + 1..i - 1 {
                let t = &toks[k];
                let next = &toks[k + 1];
                if t.is_ident() && (next.is(",") || next.is(")")) {
                    out.entry(t.text.clone()).or_insert_with(|| UNKNOWN.into());
                }
            }
        }
    }
}

pub(crate) struct Scanner<'a, 's> {
    toks: &'a [Token],
    scope: &'s Scope<'s>,
    pub refs: Refs,
}

impl<'a, 's> Scanner<'a, 's> {
    pub fn new(toks: &'a [Token], scope: &'s Scope<'s>) -> Self {
        Scanner {
            toks,
            scope,
            refs: Refs::default(),
        }
    }

    fn at(&self, i: usize, hi: usize) -> Option<&'a Token> {
        if i < hi {
            self.toks.get(i)
        } else {
            None
        }
    }

    fn is(&self, i: usize, hi: usize, text: &str) -> bool {
        self.at(i, hi).is_some_and(|t| t.is(text))
    }

    fn close(&self, open: usize, hi: usize) -> usize {
        matching(self.toks, open, hi).unwrap_or(hi)
    }

    fn access(&mut self, class: &str, member: &str) {
        self.refs.accesses.insert(format!("{class}.{member}"));
    }

    fn invoke(&mut self, class: &str, name: &str, args: &[String]) {
        self.refs.invokes.push(format!("{class}.{name}({})", args.join(",")));
    }

    fn literal_type(t: &Token) -> Option<&'static str> {
        match t.kind {
            TokenKind::Int if t.text.ends_with(['l', 'L']) => Some("long"),
            TokenKind::Int => Some("int"),
            TokenKind::Float if t.text.ends_with(['f', 'F']) => Some("float"),
            TokenKind::Float => Some("double"),
            TokenKind::Str => Some("String"),
            TokenKind::Char => Some("char"),
            TokenKind::Keyword if t.text == "true" || t.text == "false" => Some("boolean"),
            _ => None,
        }
    }

    fn arg_types(&self, span: Span) -> Vec<String> {
        if span.0 >= span.1 {
            return Vec::new();
        }
        split_top(self.toks, span, ",")
            .into_iter()
            .map(|(lo, hi)| {
                if hi != lo + 1 {
                    return "_".to_string();
                }
                let t = &self.toks[lo];
                if let Some(ty) = Self::literal_type(t) {
                    return ty.to_string();
                }
                if t.is("this") {
                    return self.scope.class.to_string();
                }
                if t.is_ident() {
                    if let Some(ty) = self.scope.vars.get(&t.text) {
                        if ty != UNKNOWN {
                            return erase(ty);
                        }
                    }
                    if !self.scope.vars.contains_key(&t.text) {
                        if let Some(ty) = self.scope.fields.get(&t.text) {
                            return erase(ty);
                        }
                    }
                }
                "_".to_string()
            })
            .collect()
    }

    /// Receiver for a declared type; arrays and unknown types give `Unknown`.
    fn value_of(ty: &str) -> Recv {
        let e = erase(ty);
        if ty == UNKNOWN || e.ends_with("[]") || e.is_empty() {
            Recv::Unknown
        } else {
            Recv::Value(e)
        }
    }

    /// Calls `name(args)` at `i` (the name token) on `class`; returns the index after `)`.
    fn call(&mut self, class: &str, name: &str, open: usize, hi: usize) -> usize {
        let c = self.close(open, hi);
        let args = self.arg_types((open + 1, c));
        self.invoke(class, name, &args);
        self.scan((open + 1, c));
        c + 1
    }

    pub fn scan(&mut self, (lo, hi): Span) {
        let mut i = lo;
        while i < hi {
            let t = &self.toks[i];
            if t.is("::") || t.is("@") {
                i += 2;
                continue;
            }
            if t.is("new") {
                i = self.new_expr(i, hi);
                continue;
            }
            if t.is("this") || t.is("super") || t.is_ident() {
                i = self.chain(i, hi);
                continue;
            }
            i += 1;
        }
    }

    fn new_expr(&mut self, i: usize, hi: usize) -> usize {
        let mut j = i + 1;
        while self.is(j, hi, "@") {
            j += 2;
        }
        let Some((ty, after)) = parse_type(self.toks, j, hi) else {
            return j;
        };
        if self.is(after, hi, "(") {
            let qualified = (self.scope.qualify)(&ty);
            let class = erase(&qualified);
            let mut k = self.call(&class, simple_name(&class), after, hi);
            if self.is(k, hi, "{") {
                k = self.close(k, hi) + 1;
            }
            return self.chain_tail(k, hi, Recv::Value(class));
        }
        // array creation: dimensions and initializer
        let mut k = after;
        while self.is(k, hi, "[") || self.is(k, hi, "{") {
            let c = self.close(k, hi);
            self.scan((k + 1, c));
            k = c + 1;
        }
        self.chain_tail(k, hi, Recv::Unknown)
    }

    fn chain(&mut self, i: usize, hi: usize) -> usize {
        let t = &self.toks[i];
        let cur = self.scope.class;
        let next_paren = self.is(i + 1, hi, "(");
        if t.is("this") {
            if next_paren {
                let k = self.call(cur, simple_name(cur), i + 1, hi);
                return self.chain_tail(k, hi, Recv::Unknown);
            }
            return self.chain_tail(i + 1, hi, Recv::Value(cur.to_string()));
        }
        if t.is("super") {
            let sup = self.scope.super_type.map(|s| erase(&(self.scope.qualify)(s)));
            if next_paren {
                let k = match &sup {
                    Some(s) => self.call(s, simple_name(s), i + 1, hi),
                    None => self.close(i + 1, hi) + 1,
                };
                return self.chain_tail(k, hi, Recv::Unknown);
            }
            let recv = match sup {
                Some(s) => Recv::Value(s),
                None => Recv::Unknown,
            };
            return self.chain_tail(i + 1, hi, recv);
        }
        let name = t.text.as_str();
        if next_paren {
            let k = self.call(cur, name, i + 1, hi);
            return self.chain_tail(k, hi, Recv::Unknown);
        }
        if let Some(ty) = self.scope.vars.get(name) {
            let recv = Self::value_of(ty);
            return self.chain_tail(i + 1, hi, recv);
        }
        if let Some(ty) = self.scope.fields.get(name) {
            self.access(cur, name);
            let recv = Self::value_of(ty);
            return self.chain_tail(i + 1, hi, recv);
        }
        if self.is(i + 1, hi, "->") || self.is(i + 1, hi, ":") {
            return i + 1;
        }
        if starts_upper(name) && !is_constant_name(name) {
            let ty = erase(&(self.scope.qualify)(name));
            return self.chain_tail(i + 1, hi, Recv::Static(ty));
        }
        // a lowercase dotted path ending in a type name is a qualified type
        if self.is(i + 1, hi, ".") && !starts_upper(name) {
            let mut path = name.to_string();
            let mut j = i + 1;
            while self.is(j, hi, ".") {
                match self.at(j + 1, hi) {
                    Some(n) if n.is_ident() && !starts_upper(&n.text) && self.is(j + 2, hi, ".") => {
                        path.push('.');
                        path.push_str(&n.text);
                        j += 2;
                    }
                    Some(n) if n.is_ident() && starts_upper(&n.text) && !is_constant_name(&n.text) => {
                        path.push('.');
                        path.push_str(&n.text);
                        return self.chain_tail(j + 2, hi, Recv::Static(path));
                    }
                    _ => break,
                }
            }
        }
        // unresolved simple name: possibly an inherited attribute
        if !self.is(i + 1, hi, ".") || !starts_upper(name) {
            self.access(cur, name);
        }
        self.chain_tail(i + 1, hi, Recv::Unknown)
    }

    fn chain_tail(&mut self, mut j: usize, hi: usize, mut recv: Recv) -> usize {
        loop {
            if self.is(j, hi, "[") {
                let c = self.close(j, hi);
                self.scan((j + 1, c));
                j = c + 1;
                recv = Recv::Unknown;
                continue;
            }
            if !self.is(j, hi, ".") {
                return j;
            }
            let mut k = j + 1;
            if self.is(k, hi, "<") {
                match generic_close(self.toks, k, hi) {
                    Some(c) => k = c + 1,
                    None => return k,
                }
            }
            let Some(t) = self.at(k, hi) else {
                return k;
            };
            if t.is("new") {
                return self.new_expr(k, hi);
            }
            if t.is("class") || t.is("this") || t.is("super") {
                j = k + 1;
                recv = Recv::Unknown;
                continue;
            }
            if !t.is_ident() {
                return k;
            }
            let name = t.text.clone();
            if self.is(k + 1, hi, "(") {
                let class = match &recv {
                    Recv::Value(c) | Recv::Static(c) => c.clone(),
                    Recv::Unknown => UNKNOWN.to_string(),
                };
                j = self.call(&class, &name, k + 1, hi);
                recv = Recv::Unknown;
                continue;
            }
            recv = match recv {
                Recv::Static(c) if starts_upper(&name) && !is_constant_name(&name) => {
                    Recv::Static(format!("{c}.{name}"))
                }
                Recv::Value(c) | Recv::Static(c) => {
                    self.access(&c, &name);
                    if c == self.scope.class {
                        match self.scope.fields.get(&name) {
                            Some(ty) => Self::value_of(ty),
                            None => Recv::Unknown,
                        }
                    } else {
                        Recv::Unknown
                    }
                }
                Recv::Unknown => Recv::Unknown,
            };
            j = k + 1;
        }
    }
}
