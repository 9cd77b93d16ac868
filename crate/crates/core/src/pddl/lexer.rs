//! Tokenizer: parentheses and symbols, `;` comments, 1-based positions.
//! All symbols are lowercased here, making the rest of the front end
//! case-insensitive.

use super::PddlError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokKind {
    LParen,
    RParen,
    Sym(String),
}

#[derive(Debug, Clone)]
pub(crate) struct Tok {
    pub kind: TokKind,
    pub line: u32,
    pub col: u32,
}

impl Tok {
    pub fn pos(&self) -> (u32, u32) {
        (self.line, self.col)
    }
}

pub(crate) fn lex(src: &str) -> Result<Vec<Tok>, PddlError> {
    let mut toks = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '(' => {
                toks.push(Tok { kind: TokKind::LParen, line, col });
                chars.next();
                col += 1;
            }
            ')' => {
                toks.push(Tok { kind: TokKind::RParen, line, col });
                chars.next();
                col += 1;
            }
            _ => {
                let start_col = col;
                let mut sym = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    if !c.is_ascii() {
                        return Err(PddlError::at(
                            (line, col),
                            format!("non-ascii character {c:?} in symbol"),
                        ));
                    }
                    sym.push(c.to_ascii_lowercase());
                    chars.next();
                    col += 1;
                }
                toks.push(Tok { kind: TokKind::Sym(sym), line, col: start_col });
            }
        }
    }
    Ok(toks)
}
