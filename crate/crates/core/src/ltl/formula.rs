use std::fmt;

use serde::{Deserialize, Serialize};

use super::LtlError;

/// An atom name matching `[a-z][a-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AtomName(String);

impl AtomName {
    pub fn new(name: impl Into<String>) -> Result<Self, LtlError> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
        if ok {
            Ok(Self(name))
        } else {
            Err(LtlError::BadAtom(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for AtomName {
    type Error = LtlError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Self::new(s)
    }
}

impl From<AtomName> for String {
    fn from(a: AtomName) -> Self {
        a.0
    }
}

impl fmt::Display for AtomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atom(AtomName),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `X φ`: φ holds at the next position.
    Next(Box<Formula>),
    /// `G φ`: φ holds now and at every later position.
    Always(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Result<Self, LtlError> {
        AtomName::new(name).map(Formula::Atom)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn next(self) -> Self {
        Formula::Next(Box::new(self))
    }

    pub fn always(self) -> Self {
        Formula::Always(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Formula) -> Self {
        Formula::Iff(Box::new(self), Box::new(rhs))
    }

    /// Distinct atoms in sorted order.
    pub fn atoms(&self) -> Vec<AtomName> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_atoms(&self, out: &mut Vec<AtomName>) {
        match self {
            Formula::Atom(a) => out.push(a.clone()),
            Formula::Not(a) | Formula::Next(a) | Formula::Always(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Operator nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(a) | Formula::Next(a) | Formula::Always(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) | Formula::Next(_) | Formula::Always(_) => 5,
            Formula::Atom(_) => 6,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        // left-associative except `->`
        let bin = |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula, lp: u8, rp: u8| {
            a.write_at(f, lp)?;
            write!(f, " {op} ")?;
            b.write_at(f, rp)
        };
        match self {
            Formula::Atom(a) => write!(f, "{a}")?,
            Formula::Not(a) => {
                f.write_str("!")?;
                a.write_at(f, 5)?;
            }
            Formula::Next(a) => {
                f.write_str("X ")?;
                a.write_at(f, 5)?;
            }
            Formula::Always(a) => {
                f.write_str("G ")?;
                a.write_at(f, 5)?;
            }
            Formula::And(a, b) => bin(f, a, "&", b, 4, 5)?,
            Formula::Or(a, b) => bin(f, a, "|", b, 3, 4)?,
            Formula::Implies(a, b) => bin(f, a, "->", b, 3, 2)?,
            Formula::Iff(a, b) => bin(f, a, "<->", b, 1, 2)?,
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Minimal-parenthesis concrete syntax accepted by [`super::parse`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
