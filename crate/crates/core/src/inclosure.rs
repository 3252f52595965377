//! Inclosure triples `⟨Ω, Θ, δ⟩`: `Θ` a family of subsets of `Ω` containing
//! `Ω` itself, and `δ : Θ → Ω` with `δ(X) ∉ X` for every `X ∈ Θ`. Taking
//! `X = Ω` shows no such triple exists, since `δ(Ω)` must lie in `Ω`.
//! [`validate`] finds the failing condition on concrete data and
//! [`exhaustive_nonexistence`] confirms that nothing passes on small carriers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::carrier::{CarrierError, FiniteCarrier, Subset};
use crate::schema::{schema_report, DiagonalInstance, SchemaError};

/// Largest `Ω` accepted anywhere.
pub const MAX_OMEGA: usize = 5;
/// Largest `Ω` for the exhaustive sweep.
pub const MAX_SWEEP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InclosureError {
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("delta is given on {0}, which is not in Theta")]
    DeltaOutsideTheta(String),
    #[error("delta value {0} is outside Omega")]
    ForeignValue(usize),
    #[error("embedding needs Omega in Theta and delta total on Theta")]
    NotEmbeddable,
    #[error("size {size} is over the limit {limit}")]
    TooLarge { size: usize, limit: usize },
}

/// A candidate triple. Only the shape is enforced here; the three
/// conditions are what [`validate`] tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclosureCandidate {
    omega: FiniteCarrier,
    /// Members in ascending bitmask order, no repeats.
    theta: Vec<Subset>,
    delta: BTreeMap<Subset, usize>,
}

impl InclosureCandidate {
    pub fn new(omega: FiniteCarrier, theta: Vec<Subset>, delta: BTreeMap<Subset, usize>) -> Result<Self, InclosureError> {
        if omega.len() > MAX_OMEGA {
            return Err(InclosureError::TooLarge {
                size: omega.len(),
                limit: MAX_OMEGA,
            });
        }
        let full = omega.full();
        let mut theta = theta;
        theta.sort();
        theta.dedup();
        if let Some(x) = theta.iter().find(|x| !x.is_subset_of(full)) {
            return Err(CarrierError::BadSubset(format!("{:#b}", x.0)).into());
        }
        for (x, &v) in &delta {
            if theta.binary_search(x).is_err() {
                return Err(InclosureError::DeltaOutsideTheta(omega.show_subset(*x)));
            }
            if v >= omega.len() {
                return Err(InclosureError::ForeignValue(v));
            }
        }
        Ok(Self { omega, theta, delta })
    }

    pub fn omega(&self) -> &FiniteCarrier {
        &self.omega
    }

    pub fn theta(&self) -> &[Subset] {
        &self.theta
    }

    pub fn delta(&self, x: Subset) -> Option<usize> {
        self.delta.get(&x).copied()
    }

    /// Parses
    ///
    /// ```text
    /// Omega = 0 1
    /// Theta = {} {0} {0 1}
    /// delta {} = 0
    /// ```
    pub fn parse(text: &str) -> Result<Self, InclosureError> {
        let mut omega: Option<FiniteCarrier> = None;
        let mut theta: Option<Vec<Subset>> = None;
        let mut delta = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let perr = |msg: String| InclosureError::Parse { line: k + 1, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| perr("expected `=`".into()))?;
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            match lhs {
                "Omega" => {
                    let c = FiniteCarrier::with_max(rhs.split_whitespace(), MAX_OMEGA).map_err(|e| perr(e.to_string()))?;
                    if omega.replace(c).is_some() {
                        return Err(perr("Omega given twice".into()));
                    }
                }
                "Theta" => {
                    let c = omega.as_ref().ok_or_else(|| perr("`Omega = ...` must come first".into()))?;
                    let family = c.parse_subset_list(rhs).map_err(|e| perr(e.to_string()))?;
                    if theta.replace(family).is_some() {
                        return Err(perr("Theta given twice".into()));
                    }
                }
                _ => {
                    let arg = lhs
                        .strip_prefix("delta")
                        .ok_or_else(|| perr(format!("unexpected `{lhs}`")))?;
                    let c = omega.as_ref().ok_or_else(|| perr("`Omega = ...` must come first".into()))?;
                    let x = c.parse_subset(arg.trim()).map_err(|e| perr(e.to_string()))?;
                    let v = c.index_of(rhs).map_err(|e| perr(e.to_string()))?;
                    if delta.insert(x, v).is_some() {
                        return Err(perr(format!("delta {} given twice", c.show_subset(x))));
                    }
                }
            }
        }
        let missing = |what: &str| InclosureError::Parse {
            line: 0,
            msg: format!("missing `{what} = ...`"),
        };
        let omega = omega.ok_or_else(|| missing("Omega"))?;
        let theta = theta.ok_or_else(|| missing("Theta"))?;
        Self::new(omega, theta, delta)
    }

    pub fn to_text(&self) -> String {
        let c = &self.omega;
        let mut out = format!("Omega = {}\n", c.labels().join(" "));
        let members: Vec<String> = self.theta.iter().map(|&x| c.show_subset(x)).collect();
        let _ = writeln!(out, "Theta = {}", members.join(" "));
        for (&x, &v) in &self.delta {
            let _ = writeln!(out, "delta {} = {}", c.show_subset(x), c.label(v));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    OmegaInTheta,
    DeltaTotal,
    DeltaEscapes,
}

/// The first condition that fails, with the subset (and for
/// `DeltaEscapes` the element `δ(X) ∈ X`) that makes it fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ViolationReport {
    pub condition: Condition,
    pub subset: Subset,
    pub element: Option<usize>,
}

impl ViolationReport {
    /// Whether the witness really breaks the named condition.
    pub fn recheck(&self, c: &InclosureCandidate) -> bool {
        let in_theta = c.theta.contains(&self.subset);
        match self.condition {
            Condition::OmegaInTheta => self.subset == c.omega.full() && !in_theta,
            Condition::DeltaTotal => in_theta && c.delta(self.subset).is_none(),
            Condition::DeltaEscapes => {
                in_theta
                    && c.delta(self.subset) == self.element
                    && self.element.is_some_and(|e| self.subset.contains(e))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Valid,
    Violation(ViolationReport),
}

/// Checks, in order: `Ω ∈ Θ`; `δ` defined on all of `Θ`; `δ(X) ∉ X` for
/// every `X ∈ Θ`.
pub fn validate(c: &InclosureCandidate) -> Verdict {
    let full = c.omega.full();
    if !c.theta.contains(&full) {
        return Verdict::Violation(ViolationReport {
            condition: Condition::OmegaInTheta,
            subset: full,
            element: None,
        });
    }
    if let Some(&x) = c.theta.iter().find(|x| c.delta(**x).is_none()) {
        return Verdict::Violation(ViolationReport {
            condition: Condition::DeltaTotal,
            subset: x,
            element: None,
        });
    }
    for &x in &c.theta {
        let v = c.delta[&x];
        if x.contains(v) {
            return Verdict::Violation(ViolationReport {
                condition: Condition::DeltaEscapes,
                subset: x,
                element: Some(v),
            });
        }
    }
    Verdict::Valid
}

/// The diagonal instance with `B = Θ`, `D = {0, 1}`, `f(X, Y) = [δ(X) ∈ Y]`
/// and `α = neg`, together with the index of `Ω` in `B`.
pub fn schema_embedding(c: &InclosureCandidate) -> Result<(DiagonalInstance, usize), InclosureError> {
    let full = c.omega.full();
    let omega_at = c.theta.iter().position(|&x| x == full).ok_or(InclosureError::NotEmbeddable)?;
    if c.theta.iter().any(|&x| c.delta(x).is_none()) {
        return Err(InclosureError::NotEmbeddable);
    }
    let labels = c.theta.iter().map(|x| format!("X{}", x.0));
    let b = FiniteCarrier::with_max(labels, 1 << MAX_OMEGA)?;
    let theta = &c.theta;
    let inst = DiagonalInstance::from_fn(
        b,
        FiniteCarrier::numeric(2)?,
        |x, y| usize::from(theta[y].contains(c.delta[&theta[x]])),
        |v| 1 - v,
    )?;
    Ok((inst, omega_at))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SizeCounts {
    pub size: usize,
    pub candidates: u64,
    pub omega_in_theta: u64,
    pub delta_total: u64,
    pub delta_escapes: u64,
    pub valid: u64,
    /// Candidates embedded into the diagonal schema.
    pub embedded: u64,
    /// Embedded candidates where "the diagonal is representable at `Ω`"
    /// matched "validate says valid", and the schema report was consistent.
    pub embedding_agrees: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonexistenceReport {
    pub max_size: usize,
    pub per_size: Vec<SizeCounts>,
    pub valid_total: u64,
    pub cross_check_ok: bool,
}

fn sweep_theta(omega: &FiniteCarrier, theta_mask: u64) -> SizeCounts {
    let n = omega.len();
    let theta: Vec<Subset> = Subset::all(n).filter(|x| theta_mask >> x.0 & 1 == 1).collect();
    let mut counts = SizeCounts {
        size: n,
        ..SizeCounts::default()
    };
    let total = (n as u64).pow(theta.len() as u32);
    for code in 0..total {
        let mut rest = code;
        let delta: BTreeMap<Subset, usize> = theta
            .iter()
            .map(|&x| {
                let v = (rest % n as u64) as usize;
                rest /= n as u64;
                (x, v)
            })
            .collect();
        let c = InclosureCandidate::new(omega.clone(), theta.clone(), delta).expect("enumerated candidate is well formed");
        let verdict = validate(&c);
        counts.candidates += 1;
        match verdict {
            Verdict::Valid => counts.valid += 1,
            Verdict::Violation(v) => match v.condition {
                Condition::OmegaInTheta => counts.omega_in_theta += 1,
                Condition::DeltaTotal => counts.delta_total += 1,
                Condition::DeltaEscapes => counts.delta_escapes += 1,
            },
        }
        if let Ok((inst, omega_at)) = schema_embedding(&c) {
            counts.embedded += 1;
            let r = schema_report(&inst);
            if r.representing_indices.contains(&omega_at) == (verdict == Verdict::Valid) && r.consistent {
                counts.embedding_agrees += 1;
            }
        }
    }
    counts
}

/// Every `Θ ⊆ 𝒫(Ω)` and every total `δ : Θ → Ω` for `1 <= |Ω| <= max_size`.
/// `Θ` ranges over bitmasks of subset bitmasks and `δ` over base-`|Ω|`
/// digit strings; the `Θ` range is split across threads.
pub fn exhaustive_nonexistence(max_size: usize) -> Result<NonexistenceReport, InclosureError> {
    if max_size > MAX_SWEEP {
        return Err(InclosureError::TooLarge {
            size: max_size,
            limit: MAX_SWEEP,
        });
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()) as u64;
    let mut per_size = Vec::new();
    for n in 1..=max_size {
        let omega = FiniteCarrier::numeric(n)?;
        let thetas = 1u64 << (1 << n);
        let parts: Vec<SizeCounts> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let omega = &omega;
                    s.spawn(move || {
                        (w..thetas)
                            .step_by(workers as usize)
                            .map(|t| sweep_theta(omega, t))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        });
        let total = parts.iter().fold(
            SizeCounts {
                size: n,
                ..SizeCounts::default()
            },
            |mut a, p| {
                a.candidates += p.candidates;
                a.omega_in_theta += p.omega_in_theta;
                a.delta_total += p.delta_total;
                a.delta_escapes += p.delta_escapes;
                a.valid += p.valid;
                a.embedded += p.embedded;
                a.embedding_agrees += p.embedding_agrees;
                a
            },
        );
        per_size.push(total);
    }
    Ok(NonexistenceReport {
        max_size,
        valid_total: per_size.iter().map(|c| c.valid).sum(),
        cross_check_ok: per_size.iter().all(|c| c.embedded == c.embedding_agrees),
        per_size,
    })
}
