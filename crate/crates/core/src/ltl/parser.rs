//! Recursive-descent parser for LTL formulas.
//!
//! ```text
//! iff     := implies ("<->" implies)*        left-assoc
//! implies := or ("->" implies)?              right-assoc
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "X" unary | "G" unary | "(" iff ")" | atom
//! ```

use super::formula::{AtomName, Formula};
use super::LtlError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,
    Always,
    LParen,
    RParen,
    Atom(String),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, LtlError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b if b.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::Iff
            }
            // atoms are lowercase, so `X` and `G` are operators even when
            // written without spaces, as in `XG!y`
            b'X' => Tok::Next,
            b'G' => Tok::Always,
            b if b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Atom(src[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(LtlError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{}`", src[i..].chars().next().unwrap()),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> LtlError {
        LtlError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn iff(&mut self) -> Result<Formula, LtlError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            lhs = lhs.iff(self.implies()?);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, LtlError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            Ok(lhs.implies(self.implies()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, LtlError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, LtlError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LtlError> {
        let pos = self.pos();
        match self.toks.get(self.idx).map(|(_, t)| t.clone()) {
            Some(Tok::Not) => {
                self.idx += 1;
                Ok(self.unary()?.not())
            }
            Some(Tok::Next) => {
                self.idx += 1;
                Ok(self.unary()?.next())
            }
            Some(Tok::Always) => {
                self.idx += 1;
                Ok(self.unary()?.always())
            }
            Some(Tok::LParen) => {
                self.idx += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(Tok::Atom(name)) => {
                self.idx += 1;
                AtomName::new(name.clone())
                    .map(Formula::Atom)
                    .map_err(|_| LtlError::Syntax {
                        pos,
                        msg: format!("`{name}` is not an atom name"),
                    })
            }
            Some(t) => Err(self.err(format!("unexpected {t:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses concrete syntax; errors carry the byte offset of the problem.
pub fn parse(text: &str) -> Result<Formula, LtlError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        idx: 0,
        end: text.len(),
    };
    let f = p.iff()?;
    if p.idx != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}
