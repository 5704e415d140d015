//! Line tokenizer for the `.rm` format.
//!
//! Each source line is tokenized independently; `#` starts a comment unless
//! inside a quoted string. Columns are 1-based character offsets so spans
//! stay correct for non-ASCII labels.

use super::{ParseDiagnostic, Severity, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    /// Bare word: keyword or identifier. May contain dots (`resource.info`).
    Word(String),
    /// Double-quoted string, unescaped.
    Str(String),
    /// `->`
    Arrow,
    /// `--`
    DashDash,
    /// `{`
    LBrace,
    /// `}`
    RBrace,
    /// `:`
    Colon,
    /// `,` (separator inside brace lists)
    Comma,
}

impl TokenKind {
    /// Short description for "expected X, found Y" messages.
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Str(_) => "a quoted string".to_string(),
            TokenKind::Arrow => "`->`".to_string(),
            TokenKind::DashDash => "`--`".to_string(),
            TokenKind::LBrace => "`{`".to_string(),
            TokenKind::RBrace => "`}`".to_string(),
            TokenKind::Colon => "`:`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// 1-based column of the first character.
    pub column: usize,
    /// Length in characters, including quotes for strings.
    pub length: usize,
}

impl Token {
    pub fn span(&self, line: usize) -> SourceSpan {
        SourceSpan::new(line, self.column, self.length)
    }
}

/// Tokenizes one line. Lexical problems (unterminated string, bad escape,
/// stray character) are reported as `Error` diagnostics; the rest of the
/// line is still tokenized so the parser can keep going.
pub fn lex_line(line_no: usize, text: &str) -> (Vec<Token>, Vec<ParseDiagnostic>) {
    let mut tokens = Vec::new();
    let mut diagnostics = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;

    let error =
        |diags: &mut Vec<ParseDiagnostic>, col: usize, len: usize, rule, message: String| {
            diags.push(ParseDiagnostic {
                severity: Severity::Error,
                span: SourceSpan::new(line_no, col, len.max(1)),
                rule,
                message,
            });
        };

    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => i += 1,
            '#' => break,
            '{' => {
                tokens.push(Token {
                    kind: TokenKind::LBrace,
                    column: col,
                    length: 1,
                });
                i += 1;
            }
            '}' => {
                tokens.push(Token {
                    kind: TokenKind::RBrace,
                    column: col,
                    length: 1,
                });
                i += 1;
            }
            ':' => {
                tokens.push(Token {
                    kind: TokenKind::Colon,
                    column: col,
                    length: 1,
                });
                i += 1;
            }
            ',' => {
                tokens.push(Token {
                    kind: TokenKind::Comma,
                    column: col,
                    length: 1,
                });
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    tokens.push(Token {
                        kind: TokenKind::Arrow,
                        column: col,
                        length: 2,
                    });
                    i += 2;
                } else if chars.get(i + 1) == Some(&'-') {
                    tokens.push(Token {
                        kind: TokenKind::DashDash,
                        column: col,
                        length: 2,
                    });
                    i += 2;
                } else {
                    error(
                        &mut diagnostics,
                        col,
                        1,
                        "unexpected-character",
                        "expected `->` or `--` after `-`".to_string(),
                    );
                    i += 1;
                }
            }
            '"' => {
                let mut value = String::new();
                let mut j = i + 1;
                let mut closed = false;
                while j < chars.len() {
                    match chars[j] {
                        '"' => {
                            closed = true;
                            j += 1;
                            break;
                        }
                        '\\' => {
                            match chars.get(j + 1) {
                                Some('"') => {
                                    value.push('"');
                                    j += 2;
                                }
                                Some('\\') => {
                                    value.push('\\');
                                    j += 2;
                                }
                                Some('n') => {
                                    value.push('\n');
                                    j += 2;
                                }
                                Some(other) => {
                                    error(
                                    &mut diagnostics,
                                    j + 1,
                                    2,
                                    "invalid-escape",
                                    format!("unknown escape `\\{other}` (expected \\\", \\\\ or \\n)"),
                                );
                                    j += 2;
                                }
                                None => {
                                    j += 1;
                                    break;
                                }
                            }
                        }
                        other => {
                            value.push(other);
                            j += 1;
                        }
                    }
                }
                if !closed {
                    error(
                        &mut diagnostics,
                        col,
                        j - i,
                        "unterminated-string",
                        "string literal is missing its closing quote".to_string(),
                    );
                }
                tokens.push(Token {
                    kind: TokenKind::Str(value),
                    column: col,
                    length: j - i,
                });
                i = j;
            }
            // Words lex greedily over any alphanumerics (not just ASCII) so
            // that a malformed identifier like `Aé` surfaces as one
            // invalid-identifier diagnostic downstream instead of a stray
            // unexpected-character per byte.
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.')
                {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                tokens.push(Token {
                    kind: TokenKind::Word(word),
                    column: start + 1,
                    length: i - start,
                });
            }
            other => {
                error(
                    &mut diagnostics,
                    col,
                    1,
                    "unexpected-character",
                    format!("unexpected character `{other}`"),
                );
                i += 1;
            }
        }
    }

    (tokens, diagnostics)
}
