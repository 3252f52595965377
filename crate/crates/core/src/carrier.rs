//! Finite carriers with canonical element order, and subsets of them as bitmasks.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest carrier any module accepts.
pub const MAX_CARRIER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CarrierError {
    #[error("carrier must have between 1 and {max} elements, got {got}")]
    Size { got: usize, max: usize },
    #[error("duplicate label `{0}`")]
    Duplicate(String),
    #[error("invalid label `{0}`: labels are nonempty and contain no whitespace, braces or `=`")]
    BadLabel(String),
    #[error("unknown label `{0}`")]
    Unknown(String),
    #[error("malformed subset literal `{0}`")]
    BadSubset(String),
}

/// An ordered list of distinct opaque labels. Index `i` is the canonical
/// position of `labels[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct FiniteCarrier {
    labels: Vec<String>,
}

impl FiniteCarrier {
    pub fn new<I, S>(labels: I) -> Result<Self, CarrierError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_max(labels, MAX_CARRIER)
    }

    /// Like [`FiniteCarrier::new`] with a tighter size cap.
    pub fn with_max<I, S>(labels: I, max: usize) -> Result<Self, CarrierError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let max = max.min(MAX_CARRIER);
        if labels.is_empty() || labels.len() > max {
            return Err(CarrierError::Size {
                got: labels.len(),
                max,
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty()
                || l.chars()
                    .any(|c| c.is_whitespace() || matches!(c, '{' | '}' | '=' | ',' | '#'))
            {
                return Err(CarrierError::BadLabel(l.clone()));
            }
            if labels[..i].contains(l) {
                return Err(CarrierError::Duplicate(l.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// Carrier `{0, 1, ..., n-1}` labelled by decimal numerals.
    pub fn numeric(n: usize) -> Result<Self, CarrierError> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, CarrierError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| CarrierError::Unknown(label.to_string()))
    }

    /// The subset containing every element.
    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    /// Number of subsets, `2^len`.
    pub fn powerset_len(&self) -> usize {
        1usize << self.len()
    }

    /// Renders a subset as `{a b}` using this carrier's labels.
    pub fn show_subset(&self, s: Subset) -> String {
        let inner: Vec<&str> = s.iter().map(|i| self.label(i)).collect();
        format!("{{{}}}", inner.join(" "))
    }

    /// Parses `{a b}` (or `{a,b}`) into a subset.
    pub fn parse_subset(&self, text: &str) -> Result<Subset, CarrierError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| CarrierError::BadSubset(text.to_string()))?;
        let mut s = Subset::EMPTY;
        for tok in inner.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            s = s.with(self.index_of(tok)?);
        }
        Ok(s)
    }

    /// Parses a whitespace-separated list of brace groups such as `{} {a} {a b}`.
    pub fn parse_subset_list(&self, text: &str) -> Result<Vec<Subset>, CarrierError> {
        let mut out = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            if !rest.starts_with('{') {
                return Err(CarrierError::BadSubset(rest.to_string()));
            }
            let close = rest
                .find('}')
                .ok_or_else(|| CarrierError::BadSubset(rest.to_string()))?;
            out.push(self.parse_subset(&rest[..=close])?);
            rest = rest[close + 1..].trim_start();
        }
        Ok(out)
    }
}

impl TryFrom<Vec<String>> for FiniteCarrier {
    type Error = CarrierError;

    fn try_from(labels: Vec<String>) -> Result<Self, Self::Error> {
        Self::new(labels)
    }
}

impl From<FiniteCarrier> for Vec<String> {
    fn from(c: FiniteCarrier) -> Self {
        c.labels
    }
}

impl fmt::Display for FiniteCarrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.labels.join(" "))
    }
}

/// A subset of a carrier as a bitmask over canonical indices. Ordering by
/// bitmask value is the canonical subset order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset_of(self, other: Subset) -> bool {
        self.is_subset_of(other) && self != other
    }

    /// Member indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// All subsets of an `n`-element carrier in canonical order.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        (0..1u32 << n).map(Subset)
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        iter.into_iter().fold(Subset::EMPTY, Subset::with)
    }
}
