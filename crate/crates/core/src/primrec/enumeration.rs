//! The enumeration `ν_0, ν_1, ...` of primitive recursive functions, its
//! unarisation `ρ_i(x) = ν_i(x, ..., x)`, and the two diagonal constructions
//! built on it: the dominating function `g(x) = max_{i<=x} ρ_i(x) + 1` and
//! the two-valued function that differs from every `f_n` at `n`.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::code::{decode, GodelCode};
use super::eval::{eval, EvalBudget, Outcome};
use super::term::PrTerm;
use super::PrimrecError;

/// The function with code `n`; the zero function for non-codes (including 0).
pub fn nu(n: &GodelCode) -> PrTerm {
    decode(n)
}

/// `ρ_i(x) = ν_i(x, ..., x)`.
pub fn rho(i: &GodelCode, x: u64, budget: EvalBudget) -> Result<Outcome<u64>, PrimrecError> {
    let t = nu(i);
    let arity = t.arity().expect("decode only returns arity-valid terms");
    eval(&t, &vec![x; arity], budget)
}

/// `max_{i<=x} ρ_i(x) + 1`, or `BudgetExceeded` if any `ρ_i(x)` is.
pub fn dominator(x: u64, budget: EvalBudget) -> Result<Outcome<u64>, PrimrecError> {
    let mut max = 0u64;
    for i in 0..=x {
        match rho(&GodelCode::from(i), x, budget)? {
            Outcome::Value(v) => max = max.max(v),
            Outcome::BudgetExceeded => return Ok(Outcome::BudgetExceeded),
        }
    }
    Ok(Outcome::Value(max.checked_add(1).ok_or(PrimrecError::Overflow)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationReport {
    pub m: u64,
    /// Inclusive bounds of the requested range.
    pub range_checked: (u64, u64),
    /// Inputs `x >= m` at which both sides were compared.
    pub compared: u64,
    /// `x` with `dominator(x) <= ρ_m(x)`.
    pub violations: Vec<u64>,
    /// `x` where either side ran out of budget.
    pub budget_exhausted_at: Vec<u64>,
}

impl DominationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares `dominator(x)` with `ρ_m(x)` for every `x >= m` in `range`.
pub fn check_domination(
    m: u64,
    range: RangeInclusive<u64>,
    budget: EvalBudget,
) -> Result<DominationReport, PrimrecError> {
    if range.is_empty() {
        return Err(PrimrecError::EmptyRange);
    }
    let (lo, hi) = range.into_inner();
    let code = GodelCode::from(m);
    let mut report = DominationReport {
        m,
        range_checked: (lo, hi),
        compared: 0,
        violations: Vec::new(),
        budget_exhausted_at: Vec::new(),
    };
    for x in lo.max(m)..=hi {
        match (dominator(x, budget)?, rho(&code, x, budget)?) {
            (Outcome::Value(g), Outcome::Value(f)) => {
                report.compared += 1;
                if g <= f {
                    report.violations.push(x);
                }
            }
            _ => report.budget_exhausted_at.push(x),
        }
    }
    Ok(report)
}

/// `g̃(n) = neg(f̃(n, n))` where `f̃(n, m) = [f_n(m) != 0]`, for `n` in
/// `0..=n_max`. Indices past the end of `fs` stand for the zero function.
pub fn diagonal_out(fs: &[Vec<u64>], n_max: usize) -> Result<Vec<u8>, PrimrecError> {
    (0..=n_max)
        .map(|n| match fs.get(n) {
            None => Ok(1),
            Some(table) => {
                let v = *table.get(n).ok_or(PrimrecError::ShortTable {
                    index: n,
                    len: table.len(),
                    needed: n_max + 1,
                })?;
                Ok(u8::from(v == 0))
            }
        })
        .collect()
}

/// [`diagonal_out`] instantiated with `f_n = ρ_n`, evaluating only the
/// diagonal entries `ρ_n(n)`.
pub fn diagonal_out_rho(n_max: u64, budget: EvalBudget) -> Result<Outcome<Vec<u8>>, PrimrecError> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        match rho(&GodelCode::from(n), n, budget)? {
            Outcome::Value(v) => out.push(u8::from(v == 0)),
            Outcome::BudgetExceeded => return Ok(Outcome::BudgetExceeded),
        }
    }
    Ok(Outcome::Value(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> EvalBudget {
        EvalBudget::default()
    }

    fn rho_u(i: u64, x: u64) -> u64 {
        rho(&GodelCode::from(i), x, b()).unwrap().value().unwrap()
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(&GodelCode::zero()), PrTerm::Zero);
        assert_eq!(nu(&GodelCode::from(1)), PrTerm::Zero);
        assert_eq!(nu(&GodelCode::from(2)), PrTerm::Succ);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_u(2, 4), 5);
        assert_eq!(rho_u(6, 9), 9);
        assert_eq!(rho_u(3, 100), 0);
        // 18 = 2 · 3^2 is P(1,2), fed (x, x)
        assert_eq!(rho_u(18, 11), 11);
    }

    #[test]
    fn dominator_examples() {
        let d = |x| dominator(x, b()).unwrap().value().unwrap();
        assert_eq!(d(0), 1);
        assert_eq!(d(2), 4);
        assert_eq!(d(6), 8);
        for x in 2..30 {
            assert!(d(x) >= x + 2);
        }
    }

    #[test]
    fn domination_reports_are_clean() {
        for (m, lo, hi) in [(2, 2, 10), (0, 0, 5), (6, 6, 12)] {
            let r = check_domination(m, lo..=hi, b()).unwrap();
            assert!(r.is_clean(), "{r:?}");
            assert!(r.budget_exhausted_at.is_empty());
            assert_eq!(r.compared, hi - lo + 1);
        }
        // x below m is not compared
        let r = check_domination(6, 0..=7, b()).unwrap();
        assert_eq!(r.compared, 2);
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 5..=4;
        assert!(matches!(
            check_domination(0, empty, b()),
            Err(PrimrecError::EmptyRange)
        ));
    }

    #[test]
    fn tiny_budget_is_reported_not_violated() {
        let r = check_domination(2, 2..=4, EvalBudget::new(1).unwrap()).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.budget_exhausted_at.len(), 0);
        // ρ of a composition needs more than one tick
        let code = super::super::code::encode(&PrTerm::comp(PrTerm::Succ, vec![PrTerm::Succ]));
        assert_eq!(
            rho(&code, 1, EvalBudget::new(2).unwrap()).unwrap(),
            Outcome::BudgetExceeded
        );
    }

    #[test]
    fn diagonal_out_examples() {
        let zeros = vec![vec![0; 6]; 6];
        assert_eq!(diagonal_out(&zeros, 5).unwrap(), vec![1; 6]);
        let ones = vec![vec![1; 6]; 6];
        assert_eq!(diagonal_out(&ones, 5).unwrap(), vec![0; 6]);
        // missing rows act as the zero function
        assert_eq!(diagonal_out(&ones[..2], 3).unwrap(), vec![0, 0, 1, 1]);
        assert_eq!(diagonal_out(&[vec![1]], 1).unwrap(), vec![0, 1]);
        assert!(matches!(
            diagonal_out(&[vec![1], vec![1]], 1),
            Err(PrimrecError::ShortTable { index: 1, .. })
        ));
    }

    #[test]
    fn diagonal_out_over_rho() {
        // oracle: decode + evaluate each diagonal entry ρ_n(n) independently
        let tables: Vec<Vec<u64>> = (0..=5).map(|i| (0..=5).map(|x| rho_u(i, x)).collect()).collect();
        let diag: Vec<u64> = (0..=5).map(|n| tables[n][n]).collect();
        assert_eq!(diag, vec![0, 0, 3, 0, 0, 0]);
        let g = diagonal_out(&tables, 5).unwrap();
        assert_eq!(g, vec![1, 1, 0, 1, 1, 1]);
        assert_eq!(diagonal_out_rho(5, b()).unwrap(), Outcome::Value(g.clone()));
        for (i, t) in tables.iter().enumerate() {
            assert_ne!(u64::from(g[i]), t[i]);
        }
    }
}
