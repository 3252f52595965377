//! The diagonal schema over finite carriers.
//!
//! Given `f: B×B → D` and `α: D → D`, the diagonal function is
//! `g(x) = α(f(x, x))`. Whenever `α` has no fixed point, `g` differs from
//! every column `f(-, b)`; if some column did equal `g`, then `f(b, b)` would
//! be a fixed point of `α`. [`schema_report`] checks exactly this on concrete
//! tables, and [`sweep`] checks it over every table of a given shape.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::carrier::{CarrierError, FiniteCarrier, Subset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error("f must have {expected} entries, got {got}")]
    TableSize { expected: usize, got: usize },
    #[error("alpha must have {expected} entries, got {got}")]
    AlphaSize { expected: usize, got: usize },
    #[error("table entry {0} is not an element of D")]
    ForeignValue(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A finite instance of the schema: carrier `B`, value set `D`, a total
/// table `f: B×B → D` and an endomap `α: D → D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalInstance {
    carrier_b: FiniteCarrier,
    values_d: FiniteCarrier,
    /// Row-major: `f(x, y)` lives at `x * |B| + y`.
    f: Vec<usize>,
    alpha: Vec<usize>,
}

impl DiagonalInstance {
    pub fn new(
        carrier_b: FiniteCarrier,
        values_d: FiniteCarrier,
        f: Vec<usize>,
        alpha: Vec<usize>,
    ) -> Result<Self, SchemaError> {
        let n = carrier_b.len();
        let d = values_d.len();
        if f.len() != n * n {
            return Err(SchemaError::TableSize {
                expected: n * n,
                got: f.len(),
            });
        }
        if alpha.len() != d {
            return Err(SchemaError::AlphaSize {
                expected: d,
                got: alpha.len(),
            });
        }
        if let Some(&bad) = f.iter().chain(&alpha).find(|&&v| v >= d) {
            return Err(SchemaError::ForeignValue(bad));
        }
        Ok(Self {
            carrier_b,
            values_d,
            f,
            alpha,
        })
    }

    /// Builds an instance from closures over canonical indices.
    pub fn from_fn(
        carrier_b: FiniteCarrier,
        values_d: FiniteCarrier,
        f: impl Fn(usize, usize) -> usize,
        alpha: impl Fn(usize) -> usize,
    ) -> Result<Self, SchemaError> {
        let n = carrier_b.len();
        let table = (0..n * n).map(|k| f(k / n, k % n)).collect();
        let alpha = (0..values_d.len()).map(alpha).collect();
        Self::new(carrier_b, values_d, table, alpha)
    }

    /// Cantor's instance for a family `F: A → P(A)`: `D = {0,1}`,
    /// `f(a, a') = [a ∈ F(a')]`, `α = neg`.
    pub fn cantor(carrier: FiniteCarrier, family: &[Subset]) -> Result<Self, SchemaError> {
        if family.len() != carrier.len() {
            return Err(SchemaError::TableSize {
                expected: carrier.len(),
                got: family.len(),
            });
        }
        Self::from_fn(
            carrier,
            FiniteCarrier::numeric(2)?,
            |a, a2| usize::from(family[a2].contains(a)),
            |v| 1 - v,
        )
    }

    pub fn carrier_b(&self) -> &FiniteCarrier {
        &self.carrier_b
    }

    pub fn values_d(&self) -> &FiniteCarrier {
        &self.values_d
    }

    pub fn f(&self, x: usize, y: usize) -> usize {
        self.f[x * self.carrier_b.len() + y]
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// The column `f(-, b)`.
    pub fn column(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.carrier_b.len()).map(move |x| self.f(x, b))
    }

    /// Parses the line-oriented instance format:
    ///
    /// ```text
    /// B = a b
    /// D = 0 1
    /// f a a = 1
    /// f a b = 0
    /// ...
    /// alpha 0 = 1
    /// alpha 1 = 0
    /// ```
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let mut b: Option<FiniteCarrier> = None;
        let mut d: Option<FiniteCarrier> = None;
        let mut f_lines = Vec::new();
        let mut alpha_lines = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| SchemaError::Parse { line: ln + 1, msg };
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| err("expected `=`".into()))?;
            let lhs: Vec<&str> = lhs.split_whitespace().collect();
            let rhs = rhs.trim();
            match lhs.as_slice() {
                ["B"] => {
                    b = Some(
                        FiniteCarrier::new(rhs.split_whitespace()).map_err(|e| err(e.to_string()))?,
                    )
                }
                ["D"] => {
                    d = Some(
                        FiniteCarrier::new(rhs.split_whitespace()).map_err(|e| err(e.to_string()))?,
                    )
                }
                ["f", x, y] => f_lines.push((ln + 1, x.to_string(), y.to_string(), rhs.to_string())),
                ["alpha", v] => alpha_lines.push((ln + 1, v.to_string(), rhs.to_string())),
                _ => return Err(err(format!("unrecognised line `{line}`"))),
            }
        }
        let b = b.ok_or(SchemaError::Parse {
            line: 0,
            msg: "missing `B = ...` line".into(),
        })?;
        let d = d.ok_or(SchemaError::Parse {
            line: 0,
            msg: "missing `D = ...` line".into(),
        })?;
        let n = b.len();
        let mut f = vec![None; n * n];
        for (line, x, y, v) in f_lines {
            let wrap = |e: CarrierError| SchemaError::Parse {
                line,
                msg: e.to_string(),
            };
            let k = b.index_of(&x).map_err(wrap)? * n + b.index_of(&y).map_err(wrap)?;
            if f[k].replace(d.index_of(&v).map_err(wrap)?).is_some() {
                return Err(SchemaError::Parse {
                    line,
                    msg: format!("duplicate entry f {x} {y}"),
                });
            }
        }
        let mut alpha = vec![None; d.len()];
        for (line, v, w) in alpha_lines {
            let wrap = |e: CarrierError| SchemaError::Parse {
                line,
                msg: e.to_string(),
            };
            let k = d.index_of(&v).map_err(wrap)?;
            if alpha[k].replace(d.index_of(&w).map_err(wrap)?).is_some() {
                return Err(SchemaError::Parse {
                    line,
                    msg: format!("duplicate entry alpha {v}"),
                });
            }
        }
        if let Some(k) = f.iter().position(Option::is_none) {
            return Err(SchemaError::Parse {
                line: 0,
                msg: format!("missing entry f {} {}", b.label(k / n), b.label(k % n)),
            });
        }
        if let Some(k) = alpha.iter().position(Option::is_none) {
            return Err(SchemaError::Parse {
                line: 0,
                msg: format!("missing entry alpha {}", d.label(k)),
            });
        }
        Self::new(
            b,
            d,
            f.into_iter().flatten().collect(),
            alpha.into_iter().flatten().collect(),
        )
    }

    /// Inverse of [`DiagonalInstance::parse`].
    pub fn to_text(&self) -> String {
        let b = &self.carrier_b;
        let d = &self.values_d;
        let mut out = format!("B = {b}\nD = {d}\n");
        for x in 0..b.len() {
            for y in 0..b.len() {
                let _ = writeln!(out, "f {} {} = {}", b.label(x), b.label(y), d.label(self.f(x, y)));
            }
        }
        for (v, &w) in self.alpha.iter().enumerate() {
            let _ = writeln!(out, "alpha {} = {}", d.label(v), d.label(w));
        }
        out
    }
}

/// `g(x) = α(f(x, x))` for every `x ∈ B`.
pub fn diagonalize(inst: &DiagonalInstance) -> Vec<usize> {
    (0..inst.carrier_b.len())
        .map(|x| inst.alpha[inst.f(x, x)])
        .collect()
}

/// `{d | α(d) = d}`.
pub fn fixed_points(alpha: &[usize]) -> Vec<usize> {
    alpha
        .iter()
        .enumerate()
        .filter(|&(d, &a)| a == d)
        .map(|(d, _)| d)
        .collect()
}

/// Every `b` whose column `f(-, b)` equals `g`.
pub fn find_representing_indices(inst: &DiagonalInstance, g: &[usize]) -> Vec<usize> {
    let n = inst.carrier_b.len();
    if g.len() != n {
        return Vec::new();
    }
    (0..n).filter(|&b| inst.column(b).eq(g.iter().copied())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaReport {
    pub g: Vec<usize>,
    pub alpha_fixed_points: Vec<usize>,
    pub representing_indices: Vec<usize>,
    pub consistent: bool,
}

impl SchemaReport {
    /// The report with every index replaced by its label.
    pub fn labeled(&self, inst: &DiagonalInstance) -> serde_json::Value {
        let b = inst.carrier_b();
        let d = inst.values_d();
        let g: serde_json::Map<String, serde_json::Value> = self
            .g
            .iter()
            .enumerate()
            .map(|(x, &v)| (b.label(x).to_string(), d.label(v).into()))
            .collect();
        serde_json::json!({
            "g": g,
            "alpha_fixed_points": self.alpha_fixed_points.iter().map(|&v| d.label(v)).collect::<Vec<_>>(),
            "representing_indices": self.representing_indices.iter().map(|&v| b.label(v)).collect::<Vec<_>>(),
            "consistent": self.consistent,
        })
    }
}

pub fn schema_report(inst: &DiagonalInstance) -> SchemaReport {
    let g = diagonalize(inst);
    let alpha_fixed_points = fixed_points(&inst.alpha);
    let representing_indices = find_representing_indices(inst, &g);
    let consistent = !alpha_fixed_points.is_empty() || representing_indices.is_empty();
    SchemaReport {
        g,
        alpha_fixed_points,
        representing_indices,
        consistent,
    }
}

/// Aggregate of [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SweepSummary {
    pub instances: u64,
    pub consistent: u64,
    /// Instances where the diagonal function is representable at some index.
    pub representable: u64,
}

/// Runs [`schema_report`] over every table `f: B×B → D` for numeric carriers
/// of the given sizes and a fixed `α`.
pub fn sweep(b_size: usize, d_size: usize, alpha: &[usize]) -> Result<SweepSummary, SchemaError> {
    let b = FiniteCarrier::numeric(b_size)?;
    let d = FiniteCarrier::numeric(d_size)?;
    let cells = b_size * b_size;
    let total = (d_size as u64)
        .checked_pow(cells as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or(SchemaError::TableSize {
            expected: 1 << 24,
            got: usize::MAX,
        })?;
    let mut summary = SweepSummary::default();
    let mut table = vec![0usize; cells];
    for _ in 0..total {
        let inst = DiagonalInstance::new(b.clone(), d.clone(), table.clone(), alpha.to_vec())?;
        let report = schema_report(&inst);
        summary.instances += 1;
        summary.consistent += u64::from(report.consistent);
        summary.representable += u64::from(!report.representing_indices.is_empty());
        // odometer increment, base |D|
        for cell in table.iter_mut() {
            *cell += 1;
            if *cell < d_size {
                break;
            }
            *cell = 0;
        }
    }
    Ok(summary)
}
