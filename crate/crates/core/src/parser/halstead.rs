//! Halstead token counts.
//!
//! Classification table:
//!
//! | token | class |
//! |---|---|
//! | control keywords (`if`, `for`, `return`, `new`, `instanceof`, ...) | operator |
//! | `(`/`)`, `{`/`}`, `[`/`]` | one operator per matched pair |
//! | arithmetic, logical, bitwise, comparison, assignment, `.`, `,`, `;`, `?`, `:`, `->`, `::`, `@` | operator |
//! | identifier directly followed by `(` | operator (call name) |
//! | other identifiers, literals, `this`, `super`, primitive type names | operand |
//! | modifiers and declaration keywords (`public`, `static`, `class`, `extends`, ...) | ignored |

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::lexer::{Token, TokenKind};

pub const OPERATOR_KEYWORDS: &[&str] = &[
    "assert",
    "break",
    "case",
    "catch",
    "continue",
    "default",
    "do",
    "else",
    "finally",
    "for",
    "if",
    "instanceof",
    "new",
    "return",
    "switch",
    "synchronized",
    "throw",
    "try",
    "while",
];

pub const OPERAND_KEYWORDS: &[&str] = &[
    "boolean", "byte", "char", "double", "float", "int", "long", "short", "void", "this", "super", "true", "false",
    "null",
];

const OPENERS: &[(&str, &str)] = &[("(", "()"), ("{", "{}"), ("[", "[]")];
const CLOSERS: &[&str] = &[")", "}", "]"];

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalsteadCounts {
    pub n1: u32,
    pub n2: u32,
    pub N1: u32,
    pub N2: u32,
}

impl HalsteadCounts {
    pub fn vocabulary(&self) -> u32 {
        self.n1 + self.n2
    }

    pub fn length(&self) -> u32 {
        self.N1 + self.N2
    }

    /// `N log2 n`; zero for an empty token stream.
    pub fn volume(&self) -> f64 {
        let n = self.vocabulary();
        if n == 0 {
            0.0
        } else {
            self.length() as f64 * (n as f64).log2()
        }
    }
}

/// Counts operators and operands over a token slice.
pub fn halstead_counts(tokens: &[Token]) -> HalsteadCounts {
    let mut ops: BTreeSet<String> = BTreeSet::new();
    let mut opnds: BTreeSet<String> = BTreeSet::new();
    let mut c = HalsteadCounts::default();
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        let next_is_paren = tokens.get(i + 1).is_some_and(|n| n.is("("));
        let mut operator = |name: &str, c: &mut HalsteadCounts| {
            ops.insert(name.to_string());
            c.N1 += 1;
        };
        match t.kind {
            TokenKind::Ident if next_is_paren => operator(&t.text, &mut c),
            TokenKind::Ident | TokenKind::Int | TokenKind::Float | TokenKind::Str | TokenKind::Char => {
                opnds.insert(t.text.clone());
                c.N2 += 1;
            }
            TokenKind::Keyword => {
                let k = t.text.as_str();
                if OPERATOR_KEYWORDS.contains(&k) {
                    operator(k, &mut c);
                } else if OPERAND_KEYWORDS.contains(&k) {
                    opnds.insert(t.text.clone());
                    c.N2 += 1;
                }
            }
            TokenKind::Op => {
                let op = t.text.as_str();
                if CLOSERS.contains(&op) {
                    i += 1;
                    continue;
                }
                if let Some((_, pair)) = OPENERS.iter().find(|(o, _)| *o == op) {
                    operator(pair, &mut c);
                } else if op == ">" {
                    // rebuild `>>`, `>>>`, `>=`, `>>=` from glued pieces
                    let mut text = String::from(">");
                    while let Some(n) = tokens.get(i + 1) {
                        if !(n.glued && (n.is(">") || n.is("="))) || text.len() >= 4 {
                            break;
                        }
                        text.push_str(&n.text);
                        i += 1;
                        if n.text == "=" {
                            break;
                        }
                    }
                    operator(&text, &mut c);
                } else {
                    operator(op, &mut c);
                }
            }
        }
        i += 1;
    }
    c.n1 = ops.len() as u32;
    c.n2 = opnds.len() as u32;
    c
}
