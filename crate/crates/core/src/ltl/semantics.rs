//! Truth of formulas over lasso models.
//!
//! The primitive clauses are
//!
//! ```text
//! n ⊩ φ ∧ ψ  iff  n ⊩ φ and n ⊩ ψ
//! n ⊩ ¬φ     iff  not n ⊩ φ
//! n ⊩ X φ    iff  n+1 ⊩ φ
//! n ⊩ G φ    iff  m ⊩ φ for every m >= n
//! ```
//!
//! and `∨`, `→`, `↔` are rewritten into `¬`/`∧` before evaluation. A lasso
//! has only `|prefix| + |loop|` distinct positions, so every formula is
//! evaluated once into a truth vector over those representatives. The
//! positions `m >= n` are, up to representatives, `n..end` when `n` is in the
//! prefix and the whole loop otherwise.

use serde::{Deserialize, Serialize};

use super::formula::Formula;
use super::model::LassoModel;
use super::LtlError;

fn not(v: Vec<bool>) -> Vec<bool> {
    v.into_iter().map(|b| !b).collect()
}

fn and(a: Vec<bool>, b: Vec<bool>) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| x && y).collect()
}

/// Truth value of `φ` at each representative position `0..period_end()`.
pub fn truth_vector(model: &LassoModel, phi: &Formula) -> Result<Vec<bool>, LtlError> {
    let end = model.period_end();
    let p = model.prefix().len();
    Ok(match phi {
        Formula::Atom(a) => {
            let i = model
                .atom_index(a)
                .ok_or_else(|| LtlError::UndeclaredAtom(a.to_string()))?;
            (0..end).map(|n| model.valuation(n) >> i & 1 == 1).collect()
        }
        Formula::Not(a) => not(truth_vector(model, a)?),
        Formula::And(a, b) => and(truth_vector(model, a)?, truth_vector(model, b)?),
        // a ∨ b  =  ¬(¬a ∧ ¬b)
        Formula::Or(a, b) => not(and(not(truth_vector(model, a)?), not(truth_vector(model, b)?))),
        // a → b  =  ¬(a ∧ ¬b)
        Formula::Implies(a, b) => not(and(truth_vector(model, a)?, not(truth_vector(model, b)?))),
        // a ↔ b  =  ¬(a ∧ ¬b) ∧ ¬(b ∧ ¬a)
        Formula::Iff(a, b) => {
            let va = truth_vector(model, a)?;
            let vb = truth_vector(model, b)?;
            and(
                not(and(va.clone(), not(vb.clone()))),
                not(and(vb, not(va))),
            )
        }
        Formula::Next(a) => {
            let va = truth_vector(model, a)?;
            (0..end).map(|n| va[model.normalize(n + 1)]).collect()
        }
        Formula::Always(a) => {
            let va = truth_vector(model, a)?;
            let loop_all = va[p..].iter().all(|&b| b);
            let mut out = vec![loop_all; end];
            for n in (0..p).rev() {
                out[n] = va[n] && out[n + 1];
            }
            out
        }
    })
}

/// `n ⊩ φ` in `model`.
pub fn holds(model: &LassoModel, n: usize, phi: &Formula) -> Result<bool, LtlError> {
    Ok(truth_vector(model, phi)?[model.normalize(n)])
}

/// Temporal laws checked position by position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    /// `X ¬φ ↔ ¬X φ`
    T1,
    /// `X G φ ↔ G X φ`
    T12,
    /// `(X G ¬φ ↔ G X ¬φ) ∧ (G X ¬φ ↔ G ¬X φ)`
    NegationChain,
}

impl Law {
    pub const ALL: [Law; 3] = [Law::T1, Law::T12, Law::NegationChain];

    pub fn instance(self, phi: &Formula) -> Formula {
        let p = phi.clone();
        match self {
            Law::T1 => p.clone().not().next().iff(p.next().not()),
            Law::T12 => p.clone().always().next().iff(p.next().always()),
            Law::NegationChain => {
                let xgn = p.clone().not().always().next();
                let gxn = p.clone().not().next().always();
                let gnx = p.next().not().always();
                xgn.iff(gxn.clone()).and(gxn.iff(gnx))
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Law::T1 => "T1",
            Law::T12 => "T12",
            Law::NegationChain => "negation-chain",
        }
    }
}

/// Whether `law` instantiated at `φ` holds at every position below `horizon`.
pub fn check_law(model: &LassoModel, law: Law, phi: &Formula, horizon: usize) -> Result<bool, LtlError> {
    if horizon == 0 {
        return Err(LtlError::Bounds("horizon must be at least 1".into()));
    }
    let v = truth_vector(model, &law.instance(phi))?;
    Ok((0..horizon).all(|n| v[model.normalize(n)]))
}

pub fn check_law_t1(model: &LassoModel, phi: &Formula, horizon: usize) -> Result<bool, LtlError> {
    check_law(model, Law::T1, phi, horizon)
}

pub fn check_law_t12(model: &LassoModel, phi: &Formula, horizon: usize) -> Result<bool, LtlError> {
    check_law(model, Law::T12, phi, horizon)
}

#[cfg(test)]
mod tests {
    use super::super::formula::AtomName;
    use super::super::parse;
    use super::*;

    fn m0() -> LassoModel {
        LassoModel::new(vec![AtomName::new("y").unwrap()], vec![1], vec![0]).unwrap()
    }

    /// Per-position recursive evaluation straight from the clauses, with
    /// `G` scanning the explicit positions `n .. max(n, |prefix|) + |loop|`.
    fn oracle(m: &LassoModel, n: usize, phi: &Formula) -> bool {
        match phi {
            Formula::Atom(a) => m.valuation(n) >> m.atom_index(a).unwrap() & 1 == 1,
            Formula::Not(a) => !oracle(m, n, a),
            Formula::And(a, b) => oracle(m, n, a) && oracle(m, n, b),
            Formula::Or(a, b) => oracle(m, n, a) || oracle(m, n, b),
            Formula::Implies(a, b) => !oracle(m, n, a) || oracle(m, n, b),
            Formula::Iff(a, b) => oracle(m, n, a) == oracle(m, n, b),
            Formula::Next(a) => oracle(m, n + 1, a),
            Formula::Always(a) => {
                (n..n.max(m.prefix().len()) + m.cycle().len()).all(|k| oracle(m, k, a))
            }
        }
    }

    #[test]
    fn m0_examples() {
        let m = m0();
        assert!(holds(&m, 0, &parse("X !y").unwrap()).unwrap());
        assert!(holds(&m, 1, &parse("G !y").unwrap()).unwrap());
        assert!(!holds(&m, 1, &parse("y <-> X G !y").unwrap()).unwrap());
        assert!(holds(&m, 0, &parse("y <-> X G !y").unwrap()).unwrap());
        for n in 0..5 {
            assert!(holds(&m, n, &parse("y | !y").unwrap()).unwrap());
        }
        for text in ["X !y", "G !y", "y <-> X G !y", "G (y -> X y)", "X X G y"] {
            let f = parse(text).unwrap();
            for n in 0..6 {
                assert_eq!(holds(&m, n, &f).unwrap(), oracle(&m, n, &f), "{text} at {n}");
            }
        }
    }

    #[test]
    fn always_inside_the_loop() {
        // y false, then loop (y, !y): G y false everywhere, G (y | X y) true
        let m = LassoModel::new(vec![AtomName::new("y").unwrap()], vec![0], vec![1, 0]).unwrap();
        let f = parse("G (y | X y)").unwrap();
        assert_eq!(truth_vector(&m, &f).unwrap(), vec![true, true, true]);
        assert_eq!(truth_vector(&m, &parse("G y").unwrap()).unwrap(), vec![false; 3]);
        assert_eq!(truth_vector(&m, &parse("X G !y").unwrap()).unwrap(), vec![false; 3]);
    }

    #[test]
    fn undeclared_atom_is_an_error() {
        assert!(matches!(
            holds(&m0(), 0, &parse("z").unwrap()),
            Err(LtlError::UndeclaredAtom(_))
        ));
    }

    #[test]
    fn laws_on_examples() {
        let m = m0();
        let y = parse("y").unwrap();
        let gy = parse("G y").unwrap();
        assert!(check_law_t1(&m, &y, 10).unwrap());
        assert!(check_law_t1(&m, &gy, 10).unwrap());
        assert!(check_law_t12(&m, &y, 10).unwrap());
        assert!(check_law(&m, Law::NegationChain, &y, 10).unwrap());
        let single = LassoModel::new(vec![AtomName::new("y").unwrap()], vec![], vec![1]).unwrap();
        assert!(check_law_t12(&single, &parse("y -> X !y").unwrap(), 3).unwrap());
        assert!(check_law_t1(&m, &y, 0).is_err());
    }

    #[test]
    fn non_laws_fail() {
        // X φ ↔ φ is not a law
        let f = parse("X y <-> y").unwrap();
        assert!(!holds(&m0(), 0, &f).unwrap());
        assert!(!oracle(&m0(), 0, &f));
    }
}
