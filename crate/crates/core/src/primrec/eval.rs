use serde::{Deserialize, Serialize};

use super::term::PrTerm;
use super::PrimrecError;

/// Cap on evaluator rule applications. One tick per node visited, plus one
/// per unrolling step of a primitive recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalBudget {
    max_steps: u64,
}

impl EvalBudget {
    pub const DEFAULT_STEPS: u64 = 1_000_000;

    pub fn new(max_steps: u64) -> Result<Self, PrimrecError> {
        if max_steps == 0 {
            return Err(PrimrecError::ZeroBudget);
        }
        Ok(Self { max_steps })
    }

    pub fn max_steps(self) -> u64 {
        self.max_steps
    }
}

impl Default for EvalBudget {
    fn default() -> Self {
        Self {
            max_steps: Self::DEFAULT_STEPS,
        }
    }
}

/// Result of a budgeted computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Value(T),
    BudgetExceeded,
}

impl<T> Outcome<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Outcome::Value(v) => Some(v),
            Outcome::BudgetExceeded => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Value(v) => Outcome::Value(f(v)),
            Outcome::BudgetExceeded => Outcome::BudgetExceeded,
        }
    }
}

enum Halt {
    Budget,
    Overflow,
}

struct Machine {
    remaining: u64,
}

impl Machine {
    fn tick(&mut self) -> Result<(), Halt> {
        if self.remaining == 0 {
            return Err(Halt::Budget);
        }
        self.remaining -= 1;
        Ok(())
    }

    fn run(&mut self, t: &PrTerm, args: &[u64]) -> Result<u64, Halt> {
        self.tick()?;
        match t {
            PrTerm::Zero => Ok(0),
            PrTerm::Succ => args[0].checked_add(1).ok_or(Halt::Overflow),
            PrTerm::Proj(p) => Ok(args[p.index() - 1]),
            PrTerm::Comp(f, gs) => {
                let inner = gs
                    .iter()
                    .map(|g| self.run(g, args))
                    .collect::<Result<Vec<_>, _>>()?;
                self.run(f, &inner)
            }
            PrTerm::PrimRec(g, h) => {
                let (&last, xs) = args.split_last().expect("recursion has arity >= 2");
                let mut acc = self.run(g, xs)?;
                let mut frame = Vec::with_capacity(args.len() + 1);
                for y in 0..last {
                    self.tick()?;
                    frame.clear();
                    frame.push(acc);
                    frame.extend_from_slice(xs);
                    frame.push(y);
                    acc = self.run(h, &frame)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Call-by-value evaluation of `t` on `args`.
pub fn eval(t: &PrTerm, args: &[u64], budget: EvalBudget) -> Result<Outcome<u64>, PrimrecError> {
    let arity = t.arity().ok_or(PrimrecError::InvalidTerm)?;
    if arity != args.len() {
        return Err(PrimrecError::ArityMismatch {
            expected: arity,
            got: args.len(),
        });
    }
    let mut m = Machine {
        remaining: budget.max_steps,
    };
    match m.run(t, args) {
        Ok(v) => Ok(Outcome::Value(v)),
        Err(Halt::Budget) => Ok(Outcome::BudgetExceeded),
        Err(Halt::Overflow) => Err(PrimrecError::Overflow),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: usize, n: usize) -> PrTerm {
        PrTerm::proj(i, n).unwrap()
    }

    fn add() -> PrTerm {
        PrTerm::rec(p(1, 1), PrTerm::comp(PrTerm::Succ, vec![p(1, 3)]))
    }

    /// Hand-unrolled: add(x, 0) = x, add(x, y+1) = add(x, y) + 1.
    fn add_oracle(x: u64, y: u64) -> u64 {
        (0..y).fold(x, |acc, _| acc + 1)
    }

    #[test]
    fn basic_values() {
        let b = EvalBudget::default();
        assert_eq!(eval(&PrTerm::Succ, &[7], b).unwrap(), Outcome::Value(8));
        assert_eq!(eval(&PrTerm::Zero, &[7], b).unwrap(), Outcome::Value(0));
        let ss = PrTerm::comp(PrTerm::Succ, vec![PrTerm::Succ]);
        assert_eq!(eval(&ss, &[3], b).unwrap(), Outcome::Value(5));
        assert_eq!(eval(&p(2, 3), &[4, 5, 6], b).unwrap(), Outcome::Value(5));
    }

    #[test]
    fn addition_recurses_on_last_argument() {
        let b = EvalBudget::default();
        assert_eq!(eval(&add(), &[2, 3], b).unwrap(), Outcome::Value(5));
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(eval(&add(), &[x, y], b).unwrap(), Outcome::Value(add_oracle(x, y)));
            }
        }
        // predecessor-style: REC(Z, P(2,3)) returns the previous counter
        let pred = PrTerm::rec(PrTerm::Zero, p(3, 3));
        assert_eq!(eval(&pred, &[9, 4], b).unwrap(), Outcome::Value(3));
        assert_eq!(eval(&pred, &[9, 0], b).unwrap(), Outcome::Value(0));
    }

    #[test]
    fn tick_accounting() {
        // Succ: one node
        assert_eq!(
            eval(&PrTerm::Succ, &[0], EvalBudget::new(1).unwrap()).unwrap(),
            Outcome::Value(1)
        );
        // COMP(S, S): three nodes
        let ss = PrTerm::comp(PrTerm::Succ, vec![PrTerm::Succ]);
        assert_eq!(
            eval(&ss, &[0], EvalBudget::new(2).unwrap()).unwrap(),
            Outcome::BudgetExceeded
        );
        assert_eq!(
            eval(&ss, &[0], EvalBudget::new(3).unwrap()).unwrap(),
            Outcome::Value(2)
        );
        // add(x, y): REC + g + y * (step + COMP + P + S) = 2 + 4y
        let b = |n| EvalBudget::new(n).unwrap();
        assert_eq!(eval(&add(), &[1, 3], b(14)).unwrap(), Outcome::Value(4));
        assert_eq!(eval(&add(), &[1, 3], b(13)).unwrap(), Outcome::BudgetExceeded);
    }

    #[test]
    fn contract_errors() {
        let b = EvalBudget::default();
        assert!(matches!(
            eval(&add(), &[1], b),
            Err(PrimrecError::ArityMismatch { expected: 2, got: 1 })
        ));
        assert!(matches!(
            eval(&PrTerm::rec(PrTerm::Zero, PrTerm::Succ), &[1, 1], b),
            Err(PrimrecError::InvalidTerm)
        ));
        assert!(matches!(eval(&PrTerm::Succ, &[u64::MAX], b), Err(PrimrecError::Overflow)));
        assert!(EvalBudget::new(0).is_err());
    }
}
