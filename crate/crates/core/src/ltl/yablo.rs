//! The Yablo formula `G (y ↔ X G ¬y)` over bounded lassos, checked twice:
//! by the generic satisfiability search, and by replaying the two-step
//! refutation on each candidate model directly from its valuations.
//!
//! Step (i): if `y` holds at some `m` and the equivalence holds there, then
//! `y` is false from `m+1` on, so `X G ¬y` is true at `m+1` while `y` is not,
//! and the equivalence breaks at `m+1`.
//! Step (ii): if `y` never holds then `X G ¬y` is true at 0 while `y` is not.

use serde::{Deserialize, Serialize};

use super::formula::{AtomName, Formula};
use super::model::LassoModel;
use super::sat::{lassos, satisfiable_bounded, validate_bounds, SatResult};
use super::semantics::truth_vector;
use super::LtlError;

/// `G (y <-> X G !y)`.
pub fn yablo_formula() -> Formula {
    let y = Formula::Atom(AtomName::new("y").expect("valid atom"));
    y.clone().iff(y.not().always().next()).always()
}

/// Which refutation step eliminates a model, and where the equivalence
/// `y ↔ X G ¬y` fails in it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Kill {
    /// `y` first holds at `m`; the equivalence fails at `failed_at` (`m` or `m+1`).
    StepOne { m: usize, failed_at: usize },
    /// `y` never holds; the equivalence fails at `failed_at = 0`.
    StepTwo { failed_at: usize },
}

impl Kill {
    pub fn failed_at(self) -> usize {
        match self {
            Kill::StepOne { failed_at, .. } | Kill::StepTwo { failed_at } => failed_at,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelVerdict {
    pub model: LassoModel,
    pub kill: Kill,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YabloReport {
    pub search: SatResult,
    pub models_replayed: u64,
    pub killed_by_step_one: u64,
    pub killed_by_step_two: u64,
    /// Search found no model and every model was refuted by the replay at a
    /// position where the evaluator also finds the equivalence false.
    pub agree: bool,
    #[serde(skip)]
    pub trace: Vec<ModelVerdict>,
}

fn y_at(model: &LassoModel, n: usize) -> bool {
    model.valuation(n) & 1 == 1
}

/// `y` is false at every position after `n`.
fn never_after(model: &LassoModel, n: usize) -> bool {
    let horizon = (n + 1).max(model.prefix().len()) + model.cycle().len();
    (n + 1..horizon).all(|k| !y_at(model, k))
}

/// `y ↔ X G ¬y` at `n`, read off the valuations.
fn equivalence_at(model: &LassoModel, n: usize) -> bool {
    y_at(model, n) == never_after(model, n)
}

/// Replays the refutation on one single-atom model.
pub fn replay(model: &LassoModel) -> Result<Kill, LtlError> {
    let first_y = (0..model.period_end()).find(|&n| y_at(model, n));
    let kill = match first_y {
        Some(m) => {
            if !equivalence_at(model, m) {
                Kill::StepOne { m, failed_at: m }
            } else {
                // y ∧ X G ¬y at m: y false at m+1, and X G ¬y true at m+1
                let next = m + 1;
                if y_at(model, next) || !never_after(model, next) || equivalence_at(model, next) {
                    return Err(LtlError::Replay(format!(
                        "step (i) found no contradiction at {next} in\n{}",
                        model.to_text()
                    )));
                }
                Kill::StepOne { m, failed_at: next }
            }
        }
        None => {
            if equivalence_at(model, 0) {
                return Err(LtlError::Replay(format!(
                    "step (ii) found no contradiction in\n{}",
                    model.to_text()
                )));
            }
            Kill::StepTwo { failed_at: 0 }
        }
    };
    Ok(kill)
}

/// Runs the search and the replay over every lasso within the bounds and
/// cross-checks them model by model.
pub fn yablo_theorem_check(max_prefix: usize, max_loop: usize) -> Result<YabloReport, LtlError> {
    let phi = yablo_formula();
    let Formula::Always(body) = &phi else {
        unreachable!("yablo_formula is an always-formula")
    };
    let atoms = phi.atoms();
    validate_bounds(atoms.len(), max_prefix, max_loop)?;
    let search = satisfiable_bounded(&phi, max_prefix, max_loop)?;
    let mut report = YabloReport {
        search,
        models_replayed: 0,
        killed_by_step_one: 0,
        killed_by_step_two: 0,
        agree: true,
        trace: Vec::new(),
    };
    for model in lassos(atoms, max_prefix, max_loop) {
        let kill = replay(&model)?;
        let eq = truth_vector(&model, body)?;
        let evaluator_refutes = !truth_vector(&model, &phi)?[0];
        if !evaluator_refutes || eq[model.normalize(kill.failed_at())] {
            report.agree = false;
        }
        match kill {
            Kill::StepOne { .. } => report.killed_by_step_one += 1,
            Kill::StepTwo { .. } => report.killed_by_step_two += 1,
        }
        report.models_replayed += 1;
        report.trace.push(ModelVerdict { model, kill });
    }
    report.agree &= report.search.is_unsat();
    if !report.agree {
        return Err(LtlError::Replay("search and replay disagree".into()));
    }
    Ok(report)
}
