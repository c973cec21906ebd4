//! Statement tree to control-flow graph.
//!
//! Consecutive simple statements share one basic block. Each `&&`, `||`
//! and `?:` adds one decision node; loops get a back edge to their head;
//! `switch` fans out with one edge per case label plus one for `default`
//! (or straight to the join when there is no default); `try` branches from
//! a head node to the body and to every handler.

use std::collections::BTreeSet;

use super::body::{matching, split_top, Arm, Span, Stmt};
use super::lexer::{Token, TokenKind};
use crate::cfg::{ControlFlowGraph, NodeKind};
use crate::error::Result;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct ExprInfo {
    pub calls: bool,
    /// `&&`, `||` and `?:` occurrences outside nested blocks.
    pub branches: usize,
}

impl ExprInfo {
    fn merge(self, o: ExprInfo) -> ExprInfo {
        ExprInfo {
            calls: self.calls || o.calls,
            branches: self.branches + o.branches,
        }
    }
}

fn is_wildcard(toks: &[Token], i: usize) -> bool {
    let prev = i.checked_sub(1).map(|p| &toks[p]);
    let next = toks.get(i + 1);
    prev.is_some_and(|p| p.is("<") || p.is(","))
        && next.is_some_and(|n| n.is(">") || n.is(",") || n.is("extends") || n.is("super"))
}

pub(crate) fn expr_info(toks: &[Token], (lo, hi): Span) -> ExprInfo {
    let mut info = ExprInfo::default();
    let mut brace = 0i32;
    for i in lo..hi.min(toks.len()) {
        let t = &toks[i];
        match t.kind {
            TokenKind::Ident if toks.get(i + 1).is_some_and(|n| n.is("(")) => info.calls = true,
            TokenKind::Keyword if t.text == "new" => info.calls = true,
            TokenKind::Op => match t.text.as_str() {
                "{" => brace += 1,
                "}" => brace -= 1,
                "&&" | "||" if brace == 0 => info.branches += 1,
                "?" if brace == 0 && !is_wildcard(toks, i) => info.branches += 1,
                _ => {}
            },
            _ => {}
        }
    }
    info
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Cond {
    Atom(ExprInfo),
    And(Vec<Cond>),
    Or(Vec<Cond>),
    Not(Box<Cond>),
}

pub(crate) fn parse_cond(toks: &[Token], (mut lo, mut hi): Span) -> Cond {
    while lo < hi && toks[lo].is("(") && matching(toks, lo, hi) == Some(hi - 1) {
        lo += 1;
        hi -= 1;
    }
    let has_top_ternary = {
        let mut depth = 0i32;
        (lo..hi).any(|i| {
            let t = &toks[i];
            match t.text.as_str() {
                "(" | "[" | "{" if t.kind == TokenKind::Op => depth += 1,
                ")" | "]" | "}" if t.kind == TokenKind::Op => depth -= 1,
                _ => {}
            }
            depth == 0 && t.is("?") && !is_wildcard(toks, i)
        })
    };
    if !has_top_ternary {
        for (op, ctor) in [("||", Cond::Or as fn(Vec<Cond>) -> Cond), ("&&", Cond::And)] {
            let parts = split_top(toks, (lo, hi), op);
            if parts.len() > 1 {
                return ctor(parts.into_iter().map(|p| parse_cond(toks, p)).collect());
            }
        }
        if lo + 1 < hi && toks[lo].is("!") && toks[lo + 1].is("(") && matching(toks, lo + 1, hi) == Some(hi - 1) {
            return Cond::Not(Box::new(parse_cond(toks, (lo + 2, hi - 1))));
        }
    }
    Cond::Atom(expr_info(toks, (lo, hi)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum CtxKind {
    Loop,
    Switch,
    Block,
}

struct Ctx {
    kind: CtxKind,
    label: Option<String>,
    breaks: Vec<usize>,
    continues: Vec<usize>,
}

type Pending = Vec<usize>;

pub(crate) struct FlowBuilder<'a> {
    toks: &'a [Token],
    kinds: Vec<NodeKind>,
    edges: Vec<(usize, usize)>,
    calls: BTreeSet<usize>,
    ctx: Vec<Ctx>,
    exits: Vec<usize>,
    open: Option<usize>,
}

const ENTRY: usize = 0;
const EXIT: usize = 1;

impl<'a> FlowBuilder<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        FlowBuilder {
            toks,
            kinds: vec![NodeKind::Entry, NodeKind::Exit],
            edges: Vec::new(),
            calls: BTreeSet::new(),
            ctx: Vec::new(),
            exits: Vec::new(),
            open: None,
        }
    }

    pub fn build(mut self, body: &[Stmt]) -> Result<ControlFlowGraph> {
        let end = self.seq(body, vec![ENTRY], true);
        for p in end.into_iter().chain(std::mem::take(&mut self.exits)) {
            self.edges.push((p, EXIT));
        }
        self.finish()
    }

    fn node(&mut self, kind: NodeKind, pending: &[usize]) -> usize {
        let id = self.kinds.len();
        self.kinds.push(kind);
        for &p in pending {
            self.edges.push((p, id));
        }
        id
    }

    fn mark_call(&mut self, n: usize) {
        self.calls.insert(n);
        if self.kinds[n] == NodeKind::Plain {
            self.kinds[n] = NodeKind::Call;
        }
    }

    /// One decision node per `&&`/`||`/`?:`, each with two parallel edges onward.
    fn diamonds(&mut self, mut pending: Pending, n: usize) -> Pending {
        for _ in 0..n {
            let d = self.node(NodeKind::Decision, &pending);
            pending = vec![d, d];
            self.open = None;
        }
        pending
    }

    fn simple(&mut self, pending: Pending, info: ExprInfo) -> Pending {
        let pending = self.diamonds(pending, info.branches);
        if let Some(o) = self.open {
            if pending == [o] {
                if info.calls {
                    self.mark_call(o);
                }
                return pending;
            }
        }
        let n = self.node(NodeKind::Plain, &pending);
        if info.calls {
            self.mark_call(n);
        }
        self.open = Some(n);
        vec![n]
    }

    fn cond(&mut self, c: &Cond, pending: Pending) -> (Pending, Pending) {
        match c {
            Cond::Atom(info) => {
                let pending = self.diamonds(pending, info.branches);
                let d = self.node(NodeKind::Decision, &pending);
                if info.calls {
                    self.calls.insert(d);
                }
                (vec![d], vec![d])
            }
            Cond::And(items) => {
                let mut t = pending;
                let mut f = Vec::new();
                for item in items {
                    let (ti, fi) = self.cond(item, t);
                    f.extend(fi);
                    t = ti;
                }
                (t, f)
            }
            Cond::Or(items) => {
                let mut f = pending;
                let mut t = Vec::new();
                for item in items {
                    let (ti, fi) = self.cond(item, f);
                    t.extend(ti);
                    f = fi;
                }
                (t, f)
            }
            Cond::Not(inner) => {
                let (t, f) = self.cond(inner, pending);
                (f, t)
            }
        }
    }

    fn seq(&mut self, stmts: &[Stmt], mut pending: Pending, tail: bool) -> Pending {
        for (i, s) in stmts.iter().enumerate() {
            pending = self.stmt(s, pending, tail && i + 1 == stmts.len(), None);
        }
        pending
    }

    fn info(&self, span: Span) -> ExprInfo {
        expr_info(self.toks, span)
    }

    fn loop_head(&mut self, first: usize) {
        if first < self.kinds.len() && self.kinds[first] == NodeKind::Decision {
            self.kinds[first] = NodeKind::LoopHead;
        }
    }

    fn push_ctx(&mut self, kind: CtxKind, label: Option<&str>) {
        self.ctx.push(Ctx {
            kind,
            label: label.map(str::to_string),
            breaks: Vec::new(),
            continues: Vec::new(),
        });
    }

    fn pop_ctx(&mut self) -> Ctx {
        self.ctx.pop().expect("balanced context stack")
    }

    fn jump(&mut self, pending: Pending, label: Option<&str>, is_break: bool) -> Pending {
        let target = self.ctx.iter().rposition(|c| match (label, is_break) {
            (Some(l), _) => c.label.as_deref() == Some(l) && (is_break || c.kind == CtxKind::Loop),
            (None, true) => c.kind != CtxKind::Block,
            (None, false) => c.kind == CtxKind::Loop,
        });
        let Some(t) = target else {
            return pending;
        };
        self.open = None;
        // a plain `break` out of the innermost switch is ordinary structure
        let kind = if is_break && label.is_none() && t + 1 == self.ctx.len() && self.ctx[t].kind == CtxKind::Switch {
            NodeKind::Plain
        } else {
            NodeKind::Jump
        };
        let j = self.node(kind, &pending);
        if is_break {
            self.ctx[t].breaks.push(j);
        } else {
            self.ctx[t].continues.push(j);
        }
        Vec::new()
    }

    fn stmt(&mut self, s: &Stmt, pending: Pending, tail: bool, label: Option<&str>) -> Pending {
        match s {
            Stmt::Empty => pending,
            Stmt::Expr(span) | Stmt::Yield(span) | Stmt::Assert(span) => {
                let info = self.info(*span);
                self.simple(pending, info)
            }
            Stmt::Local { vars, .. } => {
                let info = vars
                    .iter()
                    .filter_map(|v| v.init)
                    .map(|span| self.info(span))
                    .reduce(ExprInfo::merge);
                match info {
                    Some(info) => self.simple(pending, info),
                    None => pending,
                }
            }
            Stmt::Block(b) => self.seq(b, pending, tail),
            Stmt::Labeled { label, body } => {
                if body.is_loop() {
                    self.stmt(body, pending, tail, Some(label))
                } else {
                    self.push_ctx(CtxKind::Block, Some(label));
                    let mut out = self.stmt(body, pending, tail, None);
                    let ctx = self.pop_ctx();
                    out.extend(ctx.breaks);
                    self.open = None;
                    out
                }
            }
            Stmt::If { cond, then, els } => {
                self.open = None;
                let c = parse_cond(self.toks, *cond);
                let (t, f) = self.cond(&c, pending);
                let mut out = self.stmt(then, t, tail, None);
                self.open = None;
                match els {
                    Some(e) => out.extend(self.stmt(e, f, tail, None)),
                    None => out.extend(f),
                }
                self.open = None;
                out
            }
            Stmt::While { cond, body } => {
                self.open = None;
                let first = self.kinds.len();
                let c = parse_cond(self.toks, *cond);
                let (t, f) = self.cond(&c, pending);
                self.loop_head(first);
                self.push_ctx(CtxKind::Loop, label);
                let back = self.stmt(body, t, false, None);
                let ctx = self.pop_ctx();
                for p in back.into_iter().chain(ctx.continues) {
                    self.edges.push((p, first));
                }
                self.open = None;
                f.into_iter().chain(ctx.breaks).collect()
            }
            Stmt::DoWhile { body, cond } => {
                self.open = None;
                let head = self.node(NodeKind::Plain, &pending);
                self.push_ctx(CtxKind::Loop, label);
                let end = self.stmt(body, vec![head], false, None);
                let ctx = self.pop_ctx();
                self.open = None;
                let c = parse_cond(self.toks, *cond);
                let first = self.kinds.len();
                let (t, f) = self.cond(&c, end.into_iter().chain(ctx.continues).collect());
                self.loop_head(first);
                for p in t {
                    self.edges.push((p, head));
                }
                self.open = None;
                f.into_iter().chain(ctx.breaks).collect()
            }
            Stmt::For {
                init,
                cond,
                update,
                body,
            } => {
                let pending = self.seq(init, pending, false);
                self.open = None;
                let first = self.kinds.len();
                let c = match cond {
                    Some(span) => parse_cond(self.toks, *span),
                    None => Cond::Atom(ExprInfo::default()),
                };
                let (t, f) = self.cond(&c, pending);
                self.loop_head(first);
                self.push_ctx(CtxKind::Loop, label);
                let back = self.stmt(body, t, false, None);
                let ctx = self.pop_ctx();
                self.open = None;
                let back: Pending = back.into_iter().chain(ctx.continues).collect();
                let back = match update {
                    Some(span) => {
                        let info = self.info(*span);
                        self.simple(back, info)
                    }
                    None => back,
                };
                for p in back {
                    self.edges.push((p, first));
                }
                self.open = None;
                f.into_iter().chain(ctx.breaks).collect()
            }
            Stmt::ForEach { iter, body, .. } => {
                self.open = None;
                let info = self.info(*iter);
                let pending = self.diamonds(pending, info.branches);
                let head = self.node(NodeKind::LoopHead, &pending);
                if info.calls {
                    self.calls.insert(head);
                }
                self.push_ctx(CtxKind::Loop, label);
                let back = self.stmt(body, vec![head], false, None);
                let ctx = self.pop_ctx();
                for p in back.into_iter().chain(ctx.continues) {
                    self.edges.push((p, head));
                }
                self.open = None;
                std::iter::once(head).chain(ctx.breaks).collect()
            }
            Stmt::Switch { selector, arms } => self.switch(*selector, arms, pending, label),
            Stmt::Try {
                resources,
                body,
                catches,
                finally,
            } => {
                self.open = None;
                let mut joined = Vec::new();
                if catches.is_empty() {
                    let p = self.seq(resources, pending, false);
                    joined.extend(self.seq(body, p, false));
                } else {
                    let head = self.node(NodeKind::Decision, &pending);
                    self.open = None;
                    let p = self.seq(resources, vec![head], false);
                    joined.extend(self.seq(body, p, false));
                    for c in catches {
                        self.open = None;
                        joined.extend(self.seq(&c.body, vec![head], false));
                    }
                }
                self.open = None;
                let out = match finally {
                    Some(f) => self.seq(f, joined, tail),
                    None => joined,
                };
                self.open = None;
                out
            }
            Stmt::Return(value) => self.leave(pending, *value, tail),
            Stmt::Throw(span) => self.leave(pending, Some(*span), tail),
            Stmt::Break(l) => self.jump(pending, l.as_deref(), true),
            Stmt::Continue(l) => self.jump(pending, l.as_deref(), false),
            Stmt::Sync { lock, body } => {
                let info = self.info(*lock);
                let p = self.simple(pending, info);
                self.seq(body, p, tail)
            }
        }
    }

    /// `return`/`throw`: a plain block at the very end of the method,
    /// otherwise a dedicated node wired straight to exit.
    fn leave(&mut self, pending: Pending, value: Option<Span>, tail: bool) -> Pending {
        let info = value.map(|s| self.info(s)).unwrap_or_default();
        if tail {
            return self.simple(pending, info);
        }
        let pending = self.diamonds(pending, info.branches);
        let r = self.node(NodeKind::Return, &pending);
        if info.calls {
            self.calls.insert(r);
        }
        self.exits.push(r);
        self.open = None;
        Vec::new()
    }

    fn switch(&mut self, selector: Span, arms: &[Arm], pending: Pending, label: Option<&str>) -> Pending {
        self.open = None;
        let info = self.info(selector);
        let pending = self.diamonds(pending, info.branches);
        let head = self.node(NodeKind::SwitchHead, &pending);
        if info.calls {
            self.calls.insert(head);
        }
        self.push_ctx(CtxKind::Switch, label);
        let mut out = Vec::new();
        let mut fall: Pending = Vec::new();
        for arm in arms {
            self.open = None;
            let mut from = vec![head; arm.labels.len() + usize::from(arm.default)];
            from.extend(std::mem::take(&mut fall));
            let entry = self.node(NodeKind::Plain, &from);
            self.open = None;
            let end = self.seq(&arm.body, vec![entry], false);
            if arm.arrow {
                out.extend(end);
            } else {
                fall = end;
            }
        }
        out.extend(fall);
        if !arms.iter().any(|a| a.default) {
            out.push(head);
        }
        let ctx = self.pop_ctx();
        out.extend(ctx.breaks);
        self.open = None;
        out
    }

    /// Drops nodes that are unreachable from entry or cannot reach exit,
    /// then renumbers.
    fn finish(self) -> Result<ControlFlowGraph> {
        let n = self.kinds.len();
        let mut keep = vec![true; n];
        loop {
            let fwd = reach(n, &self.edges, &keep, ENTRY, false);
            let back = reach(n, &self.edges, &keep, EXIT, true);
            let next: Vec<bool> = (0..n).map(|i| keep[i] && fwd[i] && back[i]).collect();
            if next == keep {
                break;
            }
            keep = next;
        }
        let mut remap = vec![usize::MAX; n];
        let mut kinds = Vec::new();
        for i in 0..n {
            if keep[i] {
                remap[i] = kinds.len();
                kinds.push(self.kinds[i]);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| keep[a] && keep[b])
            .map(|&(a, b)| (remap[a], remap[b]))
            .collect();
        let calls = self.calls.iter().filter(|&&c| keep[c]).map(|&c| remap[c]).collect();
        ControlFlowGraph::new(kinds, edges, calls)
    }
}

fn reach(n: usize, edges: &[(usize, usize)], keep: &[bool], start: usize, reverse: bool) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if keep[a] && keep[b] {
            if reverse {
                adj[b].push(a);
            } else {
                adj[a].push(b);
            }
        }
    }
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::parser::{build_cfg, tokenize};

    fn v(body: &str) -> usize {
        let g = build_cfg(&tokenize(body).unwrap()).unwrap();
        g.edge_count() + 2 - g.node_count()
    }

    #[test]
    fn linear_body() {
        assert_eq!(v("{ a = 1; b(); c = a + 2; }"), 1);
        assert_eq!(v("{}"), 1);
    }

    #[test]
    fn while_loop_and_do_with_nested_if() {
        assert_eq!(v("{ int i = 0; while (i < n) { i++; } return i; }"), 2);
        assert_eq!(v("{ do { if (a) { b(); } x--; } while (x > 0); }"), 3);
    }

    #[test]
    fn short_circuit_and_ternary() {
        assert_eq!(v("{ if (a && b || c) { x(); } }"), 4);
        assert_eq!(v("{ y = a ? 1 : 2; }"), 2);
        assert_eq!(v("{ List<? extends T> l = f(); }"), 1);
    }

    #[test]
    fn switch_counts_labels() {
        let with_default = "{ switch (k) { case 1: case 2: a(); break; case 3: b(); default: c(); } }";
        assert_eq!(v(with_default), 4);
        let without = "{ switch (k) { case 1: a(); break; case 2: b(); } }";
        assert_eq!(v(without), 3);
        let arrows = "{ switch (k) { case 1 -> a(); case 2 -> b(); default -> c(); } }";
        assert_eq!(v(arrows), 3);
    }

    #[test]
    fn try_catch_branches() {
        assert_eq!(
            v("{ try { a(); } catch (E1 e) { b(); } catch (E2 e) { c(); } finally { d(); } }"),
            3
        );
    }

    #[test]
    fn early_return_and_break() {
        assert_eq!(v("{ if (a) return 1; return 2; }"), 2);
        assert_eq!(v("{ while (a) { if (b) break; c(); } }"), 3);
        assert_eq!(v("{ for (int i = 0; i < n; i++) { if (b) continue; c(); } }"), 3);
    }

    #[test]
    fn unbalanced_body_rejected() {
        assert!(build_cfg(&tokenize("{ if (a) { b(); }").unwrap()).is_err());
    }

    /// Random structured body without jumps; returns the source and the
    /// number of decisions written into it.
    fn gen(rng: &mut ChaCha8Rng, depth: u32) -> (String, usize) {
        let mut out = String::new();
        let mut decisions = 0;
        for _ in 0..rng.gen_range(1..4) {
            let pick = if depth == 0 { 0 } else { rng.gen_range(0..8) };
            let (cond, cd) = cond(rng);
            match pick {
                0 => {
                    if rng.gen_bool(0.3) {
                        out.push_str("x = a ? b : c; ");
                        decisions += 1;
                    } else {
                        out.push_str("f(x); ");
                    }
                }
                1 => {
                    let (b, d) = gen(rng, depth - 1);
                    out.push_str(&format!("if ({cond}) {{ {b}}} "));
                    decisions += d + cd + 1;
                    if rng.gen_bool(0.5) {
                        let (e, d) = gen(rng, depth - 1);
                        out.push_str(&format!("else {{ {e}}} "));
                        decisions += d;
                    }
                }
                2 => {
                    let (b, d) = gen(rng, depth - 1);
                    out.push_str(&format!("while ({cond}) {{ {b}}} "));
                    decisions += d + cd + 1;
                }
                3 => {
                    let (b, d) = gen(rng, depth - 1);
                    out.push_str(&format!("do {{ {b}}} while ({cond}); "));
                    decisions += d + cd + 1;
                }
                4 => {
                    let (b, d) = gen(rng, depth - 1);
                    out.push_str(&format!("for (int i = 0; {cond}; i++) {{ {b}}} "));
                    decisions += d + cd + 1;
                }
                5 => {
                    let (b, d) = gen(rng, depth - 1);
                    out.push_str(&format!("for (T t : ts) {{ {b}}} "));
                    decisions += d + 1;
                }
                6 => {
                    out.push_str("switch (k) { ");
                    let labels = rng.gen_range(1..4);
                    for l in 0..labels {
                        let (b, d) = gen(rng, depth - 1);
                        out.push_str(&format!("case {l}: {b}break; "));
                        decisions += d + 1;
                    }
                    if rng.gen_bool(0.5) {
                        let (b, d) = gen(rng, depth - 1);
                        out.push_str(&format!("default: {b}"));
                        decisions += d;
                    }
                    out.push_str("} ");
                }
                _ => {
                    let (b, d) = gen(rng, depth - 1);
                    out.push_str(&format!("try {{ {b}}} "));
                    decisions += d;
                    for _ in 0..rng.gen_range(1..3) {
                        let (h, d) = gen(rng, depth - 1);
                        out.push_str(&format!("catch (E e) {{ {h}}} "));
                        decisions += d + 1;
                    }
                }
            }
        }
        (out, decisions)
    }

    fn cond(rng: &mut ChaCha8Rng) -> (String, usize) {
        let n = rng.gen_range(0..3);
        let mut s = String::from("p0()");
        for i in 0..n {
            let op = if rng.gen_bool(0.5) { "&&" } else { "||" };
            s.push_str(&format!(" {op} p{}", i + 1));
        }
        (s, n)
    }

    #[test]
    fn random_bodies_match_decision_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let (body, decisions) = gen(&mut rng, 3);
            let src = format!("{{ {body}}}");
            assert_eq!(v(&src), decisions + 1, "{src}");
        }
    }
}
