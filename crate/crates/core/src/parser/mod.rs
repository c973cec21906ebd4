//! Java source front end: tokenizer, line counter, Halstead counts,
//! declaration and statement parsers, and CFG construction.

mod body;
mod decl;
mod flow;
mod halstead;
mod lexer;
mod lines;
mod refs;

use serde::Serialize;

use crate::cfg::ControlFlowGraph;
use crate::error::{Error, Result};
use crate::model::ClassFacts;

pub use halstead::{halstead_counts, HalsteadCounts};
pub use lexer::{tokenize, Token, TokenKind};
pub use lines::{count_lines, LineCounts};

/// Token range of one method body, braces included. Empty for bodiless methods.
#[derive(Debug, Clone, Serialize)]
pub struct MethodTokens {
    pub class: String,
    pub signature: String,
    pub tokens: Vec<Token>,
}

/// Everything extracted from one source file.
#[derive(Debug, Clone, Serialize)]
pub struct CompilationFacts {
    pub path: String,
    pub package: Option<String>,
    pub classes: Vec<ClassFacts>,
    pub bodies: Vec<MethodTokens>,
}

pub fn parse_source(text: &str, path: &str) -> Result<CompilationFacts> {
    let tokens = tokenize(text)?;
    let flags = lines::line_flags(text);
    let mut p = decl::DeclParser::new(&tokens, &flags);
    p.parse_unit()?;
    Ok(CompilationFacts {
        path: path.to_string(),
        package: p.package,
        classes: p.classes,
        bodies: p.bodies,
    })
}

pub fn parse_bytes(bytes: &[u8], path: &str) -> Result<CompilationFacts> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Error::Encoding(format!("{path}: invalid UTF-8 at byte {}", e.valid_up_to())))?;
    parse_source(text, path)
}

/// Control-flow graph of a method body given as tokens `{ ... }`.
pub fn build_cfg(tokens: &[Token]) -> Result<ControlFlowGraph> {
    let line = tokens.first().map_or(1, |t| t.line);
    if !tokens.first().is_some_and(|t| t.is("{")) {
        return Err(Error::Syntax {
            line,
            expected: vec!["{".into()],
        });
    }
    match body::matching(tokens, 0, tokens.len()) {
        Some(close) if close + 1 == tokens.len() => {
            let stmts = body::BodyParser::new(tokens, (1, close)).parse_all();
            flow::FlowBuilder::new(tokens).build(&stmts)
        }
        _ => Err(Error::UnbalancedBlock(line)),
    }
}
