use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PrimrecError;

/// `p_i^n`, the projection onto the `index`-th of `arity` arguments.
/// Always satisfies `1 <= index <= arity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct Projection {
    index: usize,
    arity: usize,
}

impl Projection {
    pub fn new(index: usize, arity: usize) -> Result<Self, PrimrecError> {
        if index == 0 || index > arity {
            return Err(PrimrecError::BadProjection { index, arity });
        }
        Ok(Self { index, arity })
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn arity(self) -> usize {
        self.arity
    }
}

impl TryFrom<(usize, usize)> for Projection {
    type Error = PrimrecError;

    fn try_from((i, n): (usize, usize)) -> Result<Self, Self::Error> {
        Self::new(i, n)
    }
}

impl From<Projection> for (usize, usize) {
    fn from(p: Projection) -> Self {
        (p.index, p.arity)
    }
}

/// Syntax of a primitive recursive function.
///
/// Arity mismatches are representable; [`PrTerm::arity`] reports them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrTerm {
    /// `z(x) = 0`
    Zero,
    /// `s(x) = x + 1`
    Succ,
    Proj(Projection),
    /// `comp(f; f_1, ..., f_k)(xs) = f(f_1(xs), ..., f_k(xs))`
    Comp(Box<PrTerm>, Vec<PrTerm>),
    /// `prim.rec(g, h)`, recursing on the last argument.
    PrimRec(Box<PrTerm>, Box<PrTerm>),
}

impl PrTerm {
    pub fn proj(index: usize, arity: usize) -> Result<Self, PrimrecError> {
        Projection::new(index, arity).map(PrTerm::Proj)
    }

    pub fn comp(f: PrTerm, args: Vec<PrTerm>) -> Self {
        PrTerm::Comp(Box::new(f), args)
    }

    pub fn rec(g: PrTerm, h: PrTerm) -> Self {
        PrTerm::PrimRec(Box::new(g), Box::new(h))
    }

    /// Number of arguments the term takes, or `None` when its parts do not
    /// fit together.
    pub fn arity(&self) -> Option<usize> {
        match self {
            PrTerm::Zero | PrTerm::Succ => Some(1),
            PrTerm::Proj(p) => Some(p.arity),
            PrTerm::Comp(f, args) => {
                if args.is_empty() || f.arity()? != args.len() {
                    return None;
                }
                let m = args[0].arity()?;
                for a in &args[1..] {
                    if a.arity()? != m {
                        return None;
                    }
                }
                Some(m)
            }
            PrTerm::PrimRec(g, h) => {
                let n = g.arity()?;
                (h.arity()? == n + 2).then_some(n + 1)
            }
        }
    }

    pub fn is_valid(&self) -> bool {
        self.arity().is_some()
    }

    /// Nesting depth of `COMP`/`REC` nodes; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            PrTerm::Zero | PrTerm::Succ | PrTerm::Proj(_) => 0,
            PrTerm::Comp(f, args) => 1 + args.iter().map(PrTerm::depth).fold(f.depth(), usize::max),
            PrTerm::PrimRec(g, h) => 1 + g.depth().max(h.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            PrTerm::Zero | PrTerm::Succ | PrTerm::Proj(_) => 1,
            PrTerm::Comp(f, args) => 1 + f.size() + args.iter().map(PrTerm::size).sum::<usize>(),
            PrTerm::PrimRec(g, h) => 1 + g.size() + h.size(),
        }
    }
}

/// S-expression form: `(Z)`, `(S)`, `(P i n)`, `(COMP f a1 ... ak)`, `(REC g h)`.
impl fmt::Display for PrTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrTerm::Zero => f.write_str("(Z)"),
            PrTerm::Succ => f.write_str("(S)"),
            PrTerm::Proj(p) => write!(f, "(P {} {})", p.index, p.arity),
            PrTerm::Comp(g, args) => {
                write!(f, "(COMP {g}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            PrTerm::PrimRec(g, h) => write!(f, "(REC {g} {h})"),
        }
    }
}

impl FromStr for PrTerm {
    type Err = PrimrecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = SexprParser { src: s, pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }
}

struct SexprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl SexprParser<'_> {
    fn error(&self, msg: &str) -> PrimrecError {
        PrimrecError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn expect(&mut self, c: char) -> Result<(), PrimrecError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<usize, PrimrecError> {
        let start = self.pos;
        let w = self.word();
        w.parse().map_err(|_| PrimrecError::Syntax {
            pos: start,
            msg: format!("expected a number, found `{w}`"),
        })
    }

    fn term(&mut self) -> Result<PrTerm, PrimrecError> {
        self.expect('(')?;
        let start = self.pos;
        let head = self.word().to_string();
        let t = match head.as_str() {
            "Z" => PrTerm::Zero,
            "S" => PrTerm::Succ,
            "P" => {
                let i = self.number()?;
                let n = self.number()?;
                PrTerm::proj(i, n).map_err(|e| PrimrecError::Syntax {
                    pos: start,
                    msg: e.to_string(),
                })?
            }
            "COMP" => {
                let f = self.term()?;
                let mut args = Vec::new();
                loop {
                    self.skip_ws();
                    if self.src[self.pos..].starts_with(')') {
                        break;
                    }
                    args.push(self.term()?);
                }
                if args.is_empty() {
                    return Err(self.error("COMP needs at least one argument"));
                }
                PrTerm::comp(f, args)
            }
            "REC" => {
                let g = self.term()?;
                let h = self.term()?;
                PrTerm::rec(g, h)
            }
            other => {
                return Err(PrimrecError::Syntax {
                    pos: start,
                    msg: format!("unknown head `{other}`"),
                })
            }
        };
        self.expect(')')?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_rules() {
        assert_eq!(PrTerm::Zero.arity(), Some(1));
        let t = PrTerm::comp(PrTerm::Succ, vec![PrTerm::proj(1, 2).unwrap()]);
        assert_eq!(t.arity(), Some(2));
        // g unary forces h ternary
        assert_eq!(PrTerm::rec(PrTerm::Zero, PrTerm::Succ).arity(), None);
        let add = PrTerm::rec(
            PrTerm::proj(1, 1).unwrap(),
            PrTerm::comp(PrTerm::Succ, vec![PrTerm::proj(1, 3).unwrap()]),
        );
        assert_eq!(add.arity(), Some(2));
        // outer arity must equal argument count
        let bad = PrTerm::comp(PrTerm::proj(1, 2).unwrap(), vec![PrTerm::Zero]);
        assert_eq!(bad.arity(), None);
        // arguments must agree on arity
        let bad = PrTerm::comp(
            PrTerm::proj(1, 2).unwrap(),
            vec![PrTerm::Zero, PrTerm::proj(1, 2).unwrap()],
        );
        assert_eq!(bad.arity(), None);
        assert_eq!(PrTerm::Comp(Box::new(PrTerm::Zero), vec![]).arity(), None);
    }

    #[test]
    fn projection_bounds() {
        assert!(PrTerm::proj(0, 1).is_err());
        assert!(PrTerm::proj(3, 2).is_err());
        assert!(PrTerm::proj(2, 2).is_ok());
    }

    #[test]
    fn sexpr_print_and_parse() {
        let text = "(REC (P 1 1) (COMP (S) (P 1 3)))";
        let t: PrTerm = text.parse().unwrap();
        assert_eq!(t.to_string(), text);
        assert_eq!("  ( COMP (S)\n (S) ) ".parse::<PrTerm>().unwrap().to_string(), "(COMP (S) (S))");
        assert_eq!(t.depth(), 2);
        assert_eq!(t.size(), 5);
    }

    #[test]
    fn sexpr_errors() {
        assert!(matches!("(Q)".parse::<PrTerm>(), Err(PrimrecError::Syntax { pos: 1, .. })));
        assert!("(P 2 1)".parse::<PrTerm>().is_err());
        assert!("(COMP (S))".parse::<PrTerm>().is_err());
        assert!("(S) (Z)".parse::<PrTerm>().is_err());
        assert!("(REC (Z)".parse::<PrTerm>().is_err());
    }
}
