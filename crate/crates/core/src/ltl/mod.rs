//! Linear temporal logic with `X` (next) and `G` (always) over lasso models,
//! the laws relating them, and a bounded check that the Yablo formula
//! `G (y ↔ X G ¬y)` has no model.

mod formula;
mod model;
mod parser;
mod sat;
mod semantics;
mod yablo;

use rand::Rng;
use thiserror::Error;

pub use formula::{AtomName, Formula};
pub use model::{LassoModel, Valuation, MAX_ATOMS};
pub use parser::parse;
pub use sat::{lassos, satisfiable_bounded, SatResult, SAT_MAX_ATOMS, SAT_MAX_LENGTH};
pub use semantics::{check_law, check_law_t1, check_law_t12, holds, truth_vector, Law};
pub use yablo::{replay, yablo_formula, yablo_theorem_check, Kill, ModelVerdict, YabloReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtlError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("`{0}` is not an atom name")]
    BadAtom(String),
    #[error("atom `{0}` is not declared by the model")]
    UndeclaredAtom(String),
    #[error("bad model: {0}")]
    Model(String),
    #[error("bounds: {0}")]
    Bounds(String),
    #[error("proof replay: {0}")]
    Replay(String),
}

/// A random lasso over `atoms` with `|prefix| <= max_prefix` and
/// `1 <= |loop| <= max_loop`.
pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[AtomName],
    max_prefix: usize,
    max_loop: usize,
) -> LassoModel {
    let k = atoms.len().min(MAX_ATOMS);
    let val = |rng: &mut R| -> Valuation {
        if k == 32 {
            rng.gen()
        } else {
            rng.gen_range(0..1u32 << k)
        }
    };
    let p = rng.gen_range(0..=max_prefix);
    let q = rng.gen_range(1..=max_loop.max(1));
    let prefix = (0..p).map(|_| val(rng)).collect();
    let cycle = (0..q).map(|_| val(rng)).collect();
    LassoModel::new(atoms[..k].to_vec(), prefix, cycle).expect("random lasso is well formed")
}

/// A random formula over `atoms` of depth at most `depth`.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, atoms: &[AtomName], depth: usize) -> Formula {
    assert!(!atoms.is_empty(), "need at least one atom");
    if depth == 0 || rng.gen_ratio(1, 5) {
        return Formula::Atom(atoms[rng.gen_range(0..atoms.len())].clone());
    }
    let sub = |rng: &mut R| random_formula(rng, atoms, depth - 1);
    match rng.gen_range(0..7) {
        0 => sub(rng).not(),
        1 => sub(rng).next(),
        2 => sub(rng).always(),
        3 => sub(rng).and(sub(rng)),
        4 => sub(rng).or(sub(rng)),
        5 => sub(rng).implies(sub(rng)),
        _ => sub(rng).iff(sub(rng)),
    }
}
