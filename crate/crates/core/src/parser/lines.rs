use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCounts {
    /// Physical lines, blanks included.
    pub lines: u32,
    /// Lines carrying any comment text.
    pub comment_lines: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct LineFlags {
    pub code: bool,
    pub comment: bool,
}

/// Counts physical lines and comment lines. A trailing line without a
/// newline still counts; the empty string has no lines.
pub fn count_lines(text: &str) -> LineCounts {
    let flags = line_flags(text);
    LineCounts {
        lines: flags.len() as u32,
        comment_lines: flags.iter().filter(|f| f.comment).count() as u32,
    }
}

/// Per-line code/comment flags, index 0 is line 1.
pub(crate) fn line_flags(text: &str) -> Vec<LineFlags> {
    #[derive(PartialEq)]
    enum St {
        Code,
        Line,
        Block,
        Str,
        Chr,
        Text,
    }
    if text.is_empty() {
        return Vec::new();
    }
    let chars: Vec<char> = text.chars().collect();
    let at = |i: usize| chars.get(i).copied().unwrap_or('\0');
    let mut out = vec![LineFlags::default()];
    let mut st = St::Code;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            if st == St::Line {
                st = St::Code;
            }
            out.push(LineFlags::default());
            i += 1;
            continue;
        }
        let cur = out.last_mut().expect("at least one line");
        match st {
            St::Code => {
                if c == '/' && at(i + 1) == '/' {
                    st = St::Line;
                    cur.comment = true;
                    i += 2;
                    continue;
                }
                if c == '/' && at(i + 1) == '*' {
                    st = St::Block;
                    cur.comment = true;
                    i += 2;
                    continue;
                }
                if !c.is_whitespace() {
                    cur.code = true;
                }
                if c == '"' && at(i + 1) == '"' && at(i + 2) == '"' {
                    st = St::Text;
                    i += 3;
                    continue;
                }
                if c == '"' {
                    st = St::Str;
                } else if c == '\'' {
                    st = St::Chr;
                }
            }
            St::Line => cur.comment = true,
            St::Block => {
                cur.comment = true;
                if c == '*' && at(i + 1) == '/' {
                    st = St::Code;
                    i += 2;
                    continue;
                }
            }
            St::Str | St::Chr | St::Text => {
                if !c.is_whitespace() {
                    cur.code = true;
                }
                if c == '\\' {
                    i += 2;
                    continue;
                }
                let closes = match st {
                    St::Str => c == '"',
                    St::Chr => c == '\'',
                    _ => c == '"' && at(i + 1) == '"' && at(i + 2) == '"',
                };
                if closes {
                    if st == St::Text {
                        i += 2;
                    }
                    st = St::Code;
                }
            }
        }
        i += 1;
    }
    if text.ends_with('\n') {
        out.pop();
    }
    out
}
