use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TokenKind {
    Ident,
    Keyword,
    Int,
    Float,
    Str,
    Char,
    Op,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based source line of the first character.
    pub line: usize,
    /// No whitespace or comment separates this token from the previous one.
    pub glued: bool,
}

impl Token {
    pub fn is(&self, text: &str) -> bool {
        matches!(self.kind, TokenKind::Op | TokenKind::Keyword) && self.text == text
    }

    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Ident
    }

    pub fn is_literal(&self) -> bool {
        matches!(
            self.kind,
            TokenKind::Int | TokenKind::Float | TokenKind::Str | TokenKind::Char
        ) || (self.kind == TokenKind::Keyword && matches!(self.text.as_str(), "true" | "false" | "null"))
    }
}

pub const KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "void",
    "volatile",
    "while",
    "true",
    "false",
    "null",
];

// Longest first. `>` is never combined so nested generics close cleanly;
// shifts are rebuilt from glued tokens where it matters.
const OPERATORS: &[&str] = &[
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "+=", "-=", "*=", "/=", "&=", "|=", "^=", "%=",
    "<<", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "=", "<", ">", "!", "~", "?", ":", "+", "-", "*", "/", "&",
    "|", "^", "%",
];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Splits source text into tokens, dropping whitespace and comments.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut glued = false;
    let n = chars.len();
    let at = |i: usize| chars.get(i).copied().unwrap_or('\0');

    while i < n {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            i += 1;
            glued = false;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            glued = false;
            continue;
        }
        if c == '/' && at(i + 1) == '/' {
            while i < n && chars[i] != '\n' {
                i += 1;
            }
            glued = false;
            continue;
        }
        if c == '/' && at(i + 1) == '*' {
            let start = line;
            i += 2;
            loop {
                if i >= n {
                    return Err(Error::Syntax {
                        line: start,
                        expected: vec!["*/".into()],
                    });
                }
                if chars[i] == '*' && at(i + 1) == '/' {
                    i += 2;
                    break;
                }
                if chars[i] == '\n' {
                    line += 1;
                }
                i += 1;
            }
            glued = false;
            continue;
        }

        let start_line = line;
        let start = i;
        let kind;
        if c == '"' && at(i + 1) == '"' && at(i + 2) == '"' {
            i += 3;
            loop {
                if i >= n {
                    return Err(Error::Syntax {
                        line: start_line,
                        expected: vec!["\"\"\"".into()],
                    });
                }
                if chars[i] == '\\' {
                    i += 2;
                    continue;
                }
                if chars[i] == '"' && at(i + 1) == '"' && at(i + 2) == '"' {
                    i += 3;
                    break;
                }
                if chars[i] == '\n' {
                    line += 1;
                }
                i += 1;
            }
            kind = TokenKind::Str;
        } else if c == '"' || c == '\'' {
            i += 1;
            loop {
                if i >= n || chars[i] == '\n' {
                    return Err(Error::Syntax {
                        line: start_line,
                        expected: vec![c.to_string()],
                    });
                }
                if chars[i] == '\\' {
                    i += 2;
                    continue;
                }
                if chars[i] == c {
                    i += 1;
                    break;
                }
                i += 1;
            }
            kind = if c == '"' { TokenKind::Str } else { TokenKind::Char };
        } else if c.is_ascii_digit() || (c == '.' && at(i + 1).is_ascii_digit()) {
            let mut float = false;
            if c == '0' && matches!(at(i + 1), 'x' | 'X' | 'b' | 'B') {
                i += 2;
                while is_ident_part(at(i)) {
                    i += 1;
                }
            } else {
                while i < n {
                    let d = chars[i];
                    if d.is_ascii_digit() || d == '_' {
                        i += 1;
                    } else if d == '.' && at(i + 1) != '.' && !is_ident_start(at(i + 1)) {
                        float = true;
                        i += 1;
                    } else if matches!(d, 'e' | 'E') {
                        float = true;
                        i += 1;
                        if matches!(at(i), '+' | '-') {
                            i += 1;
                        }
                    } else if matches!(d, 'f' | 'F' | 'd' | 'D') {
                        float = true;
                        i += 1;
                        break;
                    } else if matches!(d, 'l' | 'L') {
                        i += 1;
                        break;
                    } else {
                        break;
                    }
                }
            }
            kind = if float { TokenKind::Float } else { TokenKind::Int };
        } else if is_ident_start(c) {
            while i < n && is_ident_part(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            kind = if KEYWORDS.contains(&word.as_str()) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
        } else {
            let rest: String = chars[i..n.min(i + 3)].iter().collect();
            match OPERATORS.iter().find(|op| rest.starts_with(**op)) {
                Some(op) => i += op.chars().count(),
                None => i += 1,
            }
            kind = TokenKind::Op;
        }
        toks.push(Token {
            kind,
            text: chars[start..i].iter().collect(),
            line: start_line,
            glued,
        });
        glued = true;
    }
    Ok(toks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(src: &str) -> Vec<String> {
        tokenize(src).unwrap().into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn basic_statement() {
        assert_eq!(texts("a = b + c;"), ["a", "=", "b", "+", "c", ";"]);
    }

    #[test]
    fn comments_and_strings() {
        let toks = tokenize("x = \"// not a comment\"; // real\n/* block\n */ y").unwrap();
        assert_eq!(toks.len(), 5);
        assert_eq!(toks[2].kind, TokenKind::Str);
        assert_eq!(toks[4].text, "y");
        assert_eq!(toks[4].line, 3);
    }

    #[test]
    fn generics_close_separately() {
        assert_eq!(texts("List<List<T>>"), ["List", "<", "List", "<", "T", ">", ">"]);
    }

    #[test]
    fn numbers() {
        let toks = tokenize("1 2.5 0x1F 3L 1e10 .5f").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            [
                TokenKind::Int,
                TokenKind::Float,
                TokenKind::Int,
                TokenKind::Int,
                TokenKind::Float,
                TokenKind::Float
            ]
        );
    }

    #[test]
    fn text_block_spans_lines() {
        let toks = tokenize("s = \"\"\"\n  a \" b\n  \"\"\"; t").unwrap();
        assert_eq!(toks[2].kind, TokenKind::Str);
        assert_eq!(toks[4].line, 3);
    }

    #[test]
    fn unterminated_comment_is_error() {
        assert!(matches!(tokenize("a /* b").unwrap_err(), Error::Syntax { line: 1, .. }));
    }

    #[test]
    fn method_reference_and_varargs() {
        assert_eq!(
            texts("Foo::bar String... a"),
            ["Foo", "::", "bar", "String", "...", "a"]
        );
    }
}
