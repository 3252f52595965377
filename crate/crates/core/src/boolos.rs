//! Two proofs of Cantor's theorem for a choice map `h : 𝒫(A) → A` on a
//! finite carrier. The first builds the anti-diagonal
//! `D = {a | ∃Y. h(Y) = a ∉ Y}` and a second set with the same image. The
//! second grows the largest h-woset `W` by `Φ(X) = X ∪ {h(X)}` and cuts it at
//! `h(W)` to get `V ⊊ W` with `h(V) = h(W)`.

use std::fmt::Write as _;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::carrier::{CarrierError, FiniteCarrier, Subset};

/// Largest carrier a choice map may have.
pub const MAX_MAP_CARRIER: usize = 5;
/// Largest carrier for which all h-wosets are enumerated.
pub const MAX_ENUMERATE: usize = 4;
/// Largest carrier swept exhaustively.
pub const MAX_EXHAUSTIVE: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoolosError {
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error("choice map needs {expected} entries, got {got}")]
    TableSize { expected: usize, got: usize },
    #[error("value {0} is outside the carrier")]
    ForeignValue(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("not an h-woset: {0}")]
    NotAWoset(String),
    #[error("carrier of size {size} is over the limit {limit} for this operation")]
    TooLarge { size: usize, limit: usize },
}

/// A total map from the subsets of `A` to `A`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceMap {
    carrier: FiniteCarrier,
    table: Vec<usize>,
}

impl ChoiceMap {
    pub fn new(carrier: FiniteCarrier, table: Vec<usize>) -> Result<Self, BoolosError> {
        if carrier.len() > MAX_MAP_CARRIER {
            return Err(BoolosError::TooLarge {
                size: carrier.len(),
                limit: MAX_MAP_CARRIER,
            });
        }
        let expected = carrier.powerset_len();
        if table.len() != expected {
            return Err(BoolosError::TableSize {
                expected,
                got: table.len(),
            });
        }
        if let Some(&v) = table.iter().find(|&&v| v >= carrier.len()) {
            return Err(BoolosError::ForeignValue(v));
        }
        Ok(Self { carrier, table })
    }

    pub fn from_fn(carrier: FiniteCarrier, h: impl Fn(Subset) -> usize) -> Result<Self, BoolosError> {
        let table = Subset::all(carrier.len()).map(h).collect();
        Self::new(carrier, table)
    }

    /// The constant map with value `a`.
    pub fn constant(carrier: FiniteCarrier, a: usize) -> Result<Self, BoolosError> {
        Self::from_fn(carrier, |_| a)
    }

    pub fn carrier(&self) -> &FiniteCarrier {
        &self.carrier
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn apply(&self, x: Subset) -> usize {
        self.table[x.0 as usize]
    }

    /// Parses `A = a b` followed by one `h {..} = v` line per subset.
    pub fn parse(text: &str) -> Result<Self, BoolosError> {
        let mut carrier: Option<FiniteCarrier> = None;
        let mut table: Vec<Option<usize>> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let perr = |msg: String| BoolosError::Parse { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| perr("expected `=`".into()))?;
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            if lhs == "A" {
                if carrier.is_some() {
                    return Err(perr("carrier declared twice".into()));
                }
                let c = FiniteCarrier::with_max(rhs.split_whitespace(), MAX_MAP_CARRIER)
                    .map_err(|e| perr(e.to_string()))?;
                table = vec![None; c.powerset_len()];
                carrier = Some(c);
            } else if let Some(arg) = lhs.strip_prefix('h') {
                let c = carrier
                    .as_ref()
                    .ok_or_else(|| perr("`A = ...` must come first".into()))?;
                let x = c.parse_subset(arg.trim()).map_err(|e| perr(e.to_string()))?;
                let v = c.index_of(rhs).map_err(|e| perr(e.to_string()))?;
                if table[x.0 as usize].replace(v).is_some() {
                    return Err(perr(format!("h {} given twice", c.show_subset(x))));
                }
            } else {
                return Err(perr(format!("unexpected `{lhs}`")));
            }
        }
        let carrier = carrier.ok_or(BoolosError::Parse {
            line: 0,
            msg: "missing `A = ...`".into(),
        })?;
        let table = table
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| BoolosError::Parse {
                    line: 0,
                    msg: format!("h {} is not given", carrier.show_subset(Subset(i as u32))),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(carrier, table)
    }

    pub fn to_text(&self) -> String {
        let c = &self.carrier;
        let mut out = format!("A = {}\n", c.labels().join(" "));
        for x in Subset::all(c.len()) {
            let _ = writeln!(out, "h {} = {}", c.show_subset(x), c.label(self.apply(x)));
        }
        out
    }
}

/// `D = {a | ∃Y ⊆ A. h(Y) = a ∧ a ∉ Y}`.
pub fn anti_diagonal(h: &ChoiceMap) -> Subset {
    Subset::all(h.len())
        .filter(|&y| !y.contains(h.apply(y)))
        .map(|y| h.apply(y))
        .collect()
}

/// `(c, d)` with `d` the anti-diagonal and `c ≠ d` the smallest subset
/// with `h(c) = h(d) ∉ c`.
pub fn find_collision_partner(h: &ChoiceMap) -> (Subset, Subset) {
    let d = anti_diagonal(h);
    let hd = h.apply(d);
    assert!(d.contains(hd), "h(D) must lie in D");
    let c = Subset::all(h.len())
        .find(|&c| h.apply(c) == hd && !c.contains(hd))
        .expect("h(D) ∈ D has a witness outside it");
    (c, d)
}

/// Elements listed least first under a strict total order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Woset {
    order: Vec<usize>,
}

impl Woset {
    pub fn empty() -> Self {
        Self::default()
    }

    /// An ordered list of distinct elements.
    pub fn from_order(order: Vec<usize>) -> Result<Self, BoolosError> {
        if order.iter().duplicates().next().is_some() {
            return Err(BoolosError::NotAWoset("repeated element".into()));
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn elements(&self) -> Subset {
        self.order.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `{x | x ≺ b}`, or `None` when `b` is not an element.
    pub fn down_set(&self, b: usize) -> Option<Subset> {
        let at = self.order.iter().position(|&x| x == b)?;
        Some(self.order[..at].iter().copied().collect())
    }

    /// Whether `self` is a proper initial segment of `other`.
    pub fn is_proper_initial_segment_of(&self, other: &Woset) -> bool {
        self.len() < other.len() && other.order.starts_with(&self.order)
    }

    pub fn show(&self, carrier: &FiniteCarrier) -> String {
        let labels: Vec<&str> = self.order.iter().map(|&x| carrier.label(x)).collect();
        format!("[{}]", labels.join(" "))
    }
}

/// `b = h({x | x ≺ b})` for every element `b`.
pub fn is_h_woset(h: &ChoiceMap, w: &Woset) -> bool {
    w.order.iter().all(|&x| x < h.len())
        && w.order.iter().enumerate().all(|(i, &b)| {
            let below: Subset = w.order[..i].iter().copied().collect();
            h.apply(below) == b
        })
}

/// `Φ(X) = X ∪ {h(X)}` with `h(X)` placed on top when new, else `X`.
pub fn phi_step(h: &ChoiceMap, w: &Woset) -> Result<Woset, BoolosError> {
    if !is_h_woset(h, w) {
        return Err(BoolosError::NotAWoset(w.show(h.carrier())));
    }
    let next = h.apply(w.elements());
    let mut out = w.clone();
    if !w.elements().contains(next) {
        out.order.push(next);
    }
    Ok(out)
}

/// Iterates `Φ` from the empty woset to its fixed point.
pub fn build_max_woset(h: &ChoiceMap) -> Woset {
    let mut w = Woset::empty();
    for _ in 0..=h.len() {
        let next = phi_step(h, &w).expect("Φ preserves h-wosets");
        if next == w {
            return w;
        }
        w = next;
    }
    unreachable!("Φ stops growing after at most |A| steps")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoolosWitness {
    pub v: Subset,
    pub w: Subset,
    pub collision_point: usize,
}

impl BoolosWitness {
    /// `V ⊊ W`, `h(V) = h(W) = collision_point ∈ W ∖ V`.
    pub fn validate(&self, h: &ChoiceMap) -> bool {
        self.v.is_proper_subset_of(self.w)
            && h.apply(self.v) == self.collision_point
            && h.apply(self.w) == self.collision_point
            && self.w.contains(self.collision_point)
            && !self.v.contains(self.collision_point)
    }
}

/// `W` the largest h-woset and `V` the elements of `W` below `h(W)`.
pub fn boolos_witness(h: &ChoiceMap) -> BoolosWitness {
    let w = build_max_woset(h);
    let top = h.apply(w.elements());
    let v = w.down_set(top).expect("h(W) ∈ W at the fixed point");
    BoolosWitness {
        v,
        w: w.elements(),
        collision_point: top,
    }
}

/// Every h-woset, found by filtering all ordered subsets of `A`.
pub fn enumerate_wosets(h: &ChoiceMap) -> Result<Vec<Woset>, BoolosError> {
    if h.len() > MAX_ENUMERATE {
        return Err(BoolosError::TooLarge {
            size: h.len(),
            limit: MAX_ENUMERATE,
        });
    }
    let n = h.len();
    Ok((0..=n)
        .flat_map(|k| (0..n).permutations(k))
        .map(|order| Woset { order })
        .filter(|w| is_h_woset(h, w))
        .collect())
}

/// Any two h-wosets are equal or one is a proper initial segment of the
/// other.
pub fn comparability_check(h: &ChoiceMap) -> Result<bool, BoolosError> {
    let all = enumerate_wosets(h)?;
    Ok(all.iter().tuple_combinations().all(|(a, b)| {
        let cases = [
            a == b,
            a.is_proper_initial_segment_of(b),
            b.is_proper_initial_segment_of(a),
        ];
        cases.iter().filter(|&&c| c).count() == 1
    }))
}

/// Which of the per-map properties held.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct MapChecks {
    pub image_of_antidiagonal_inside: bool,
    pub escaping_values_in_antidiagonal: bool,
    pub partner_valid: bool,
    pub max_woset_fixed: bool,
    pub witness_valid: bool,
    /// `None` above the enumeration limit.
    pub comparable: Option<bool>,
    /// Every h-woset is an initial segment of the maximal one.
    pub max_is_greatest: Option<bool>,
}

impl MapChecks {
    pub fn all_pass(&self) -> bool {
        self.image_of_antidiagonal_inside
            && self.escaping_values_in_antidiagonal
            && self.partner_valid
            && self.max_woset_fixed
            && self.witness_valid
            && self.comparable != Some(false)
            && self.max_is_greatest != Some(false)
    }
}

pub fn check_map(h: &ChoiceMap) -> MapChecks {
    let d = anti_diagonal(h);
    let (c, d2) = find_collision_partner(h);
    let w = build_max_woset(h);
    let wit = boolos_witness(h);
    let mut out = MapChecks {
        image_of_antidiagonal_inside: d.contains(h.apply(d)),
        escaping_values_in_antidiagonal: Subset::all(h.len())
            .all(|x| x.contains(h.apply(x)) || d.contains(h.apply(x))),
        partner_valid: d2 == d && c != d && h.apply(c) == h.apply(d) && !c.contains(h.apply(c)),
        max_woset_fixed: is_h_woset(h, &w) && phi_step(h, &w).as_ref() == Ok(&w),
        witness_valid: wit.validate(h),
        comparable: None,
        max_is_greatest: None,
    };
    if let Ok(all) = enumerate_wosets(h) {
        out.comparable = comparability_check(h).ok();
        out.max_is_greatest = Some(all.iter().all(|x| *x == w || x.is_proper_initial_segment_of(&w)));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub size: usize,
    pub exhaustive: bool,
    pub maps: u64,
    pub passed: u64,
    /// Table of the first failing map, if any.
    pub first_failure: Option<Vec<usize>>,
}

/// Checks every choice map on an `n`-element carrier (`n <= 3`), or
/// `samples` seeded random maps for `n` in `4..=5`. Work is split across
/// threads; results are merged in map order.
pub fn sweep(size: usize, samples: u64, seed: u64) -> Result<SweepReport, BoolosError> {
    if size == 0 || size > MAX_MAP_CARRIER {
        return Err(BoolosError::TooLarge {
            size,
            limit: MAX_MAP_CARRIER,
        });
    }
    let carrier = FiniteCarrier::numeric(size)?;
    let cells = 1usize << size;
    let exhaustive = size <= MAX_EXHAUSTIVE;
    let tables: Vec<Vec<usize>> = if exhaustive {
        let total = (size as u64).pow(cells as u32);
        (0..total)
            .map(|mut code| {
                (0..cells)
                    .map(|_| {
                        let v = (code % size as u64) as usize;
                        code /= size as u64;
                        v
                    })
                    .collect()
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| (0..cells).map(|_| rng.gen_range(0..size)).collect())
            .collect()
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = tables.len().div_ceil(workers).max(1);
    let verdicts: Vec<bool> = std::thread::scope(|s| {
        let handles: Vec<_> = tables
            .chunks(chunk)
            .map(|part| {
                let carrier = &carrier;
                s.spawn(move || {
                    part.iter()
                        .map(|t| {
                            let h = ChoiceMap::new(carrier.clone(), t.clone()).expect("generated map is valid");
                            check_map(&h).all_pass()
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let first_failure = verdicts.iter().position(|ok| !ok).map(|i| tables[i].clone());
    Ok(SweepReport {
        size,
        exhaustive,
        maps: tables.len() as u64,
        passed: verdicts.iter().filter(|&&ok| ok).count() as u64,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// h(∅)=0, h({0})=1, h({1})=0, h({0,1})=0
    fn running() -> ChoiceMap {
        ChoiceMap::new(FiniteCarrier::numeric(2).unwrap(), vec![0, 1, 0, 0]).unwrap()
    }

    fn set(xs: &[usize]) -> Subset {
        xs.iter().copied().collect()
    }

    #[test]
    fn running_example() {
        let h = running();
        assert_eq!(anti_diagonal(&h), set(&[0, 1]));
        // ∅ is the smallest subset with h(c) = 0 ∉ c
        assert_eq!(find_collision_partner(&h), (Subset::EMPTY, set(&[0, 1])));
        let w0 = Woset::from_order(vec![0]).unwrap();
        assert_eq!(phi_step(&h, &w0).unwrap().order(), &[0, 1]);
        let w = build_max_woset(&h);
        assert_eq!(w.order(), &[0, 1]);
        assert_eq!(h.apply(w.elements()), 0);
        assert_eq!(
            boolos_witness(&h),
            BoolosWitness {
                v: Subset::EMPTY,
                w: set(&[0, 1]),
                collision_point: 0
            }
        );
        assert!(!is_h_woset(&h, &Woset::from_order(vec![1, 0]).unwrap()));
        assert!(is_h_woset(&h, &Woset::empty()));
        assert!(comparability_check(&h).unwrap());
        assert_eq!(enumerate_wosets(&h).unwrap().len(), 3);
    }

    #[test]
    fn constant_maps() {
        for n in 1..=4 {
            for a in 0..n {
                let h = ChoiceMap::constant(FiniteCarrier::numeric(n).unwrap(), a).unwrap();
                assert_eq!(anti_diagonal(&h), Subset::singleton(a));
                assert_eq!(find_collision_partner(&h), (Subset::EMPTY, Subset::singleton(a)));
                assert_eq!(build_max_woset(&h).order(), &[a]);
                let wit = boolos_witness(&h);
                assert_eq!((wit.v, wit.w, wit.collision_point), (Subset::EMPTY, Subset::singleton(a), a));
                assert_eq!(enumerate_wosets(&h).unwrap().len(), 2);
                assert!(comparability_check(&h).unwrap());
            }
        }
    }

    #[test]
    fn phi_rejects_non_wosets_and_fixes_the_top() {
        let h = running();
        assert!(phi_step(&h, &Woset::from_order(vec![1]).unwrap()).is_err());
        assert_eq!(phi_step(&h, &Woset::empty()).unwrap().order(), &[0]);
        let w = build_max_woset(&h);
        assert_eq!(phi_step(&h, &w).unwrap(), w);
        assert!(Woset::from_order(vec![1, 1]).is_err());
    }

    #[test]
    fn exhaustive_small_sweeps() {
        for n in 1..=2 {
            let r = sweep(n, 0, 0).unwrap();
            assert!(r.exhaustive);
            assert_eq!(r.maps, (n as u64).pow(1 << n));
            assert_eq!(r.passed, r.maps);
        }
    }

    #[test]
    fn text_format() {
        let text = "A = a b\nh {} = a\nh {a} = b\nh {b} = a\nh {a b} = a\n";
        let h = ChoiceMap::parse(text).unwrap();
        assert_eq!(h.table(), running().table());
        assert_eq!(h.to_text(), text);
        assert!(ChoiceMap::parse("A = a b\nh {} = a\n").is_err());
        assert!(ChoiceMap::parse("A = a b\nh {} = c\n").is_err());
        assert!(ChoiceMap::parse("A = a b c d e f\n").is_err());
    }
}
