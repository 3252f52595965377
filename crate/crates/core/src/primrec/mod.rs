//! Primitive recursive functions: syntax, Gödel coding, a budgeted
//! evaluator, and the diagonal constructions over the coded enumeration.

mod code;
mod enumeration;
mod eval;
mod random;
mod term;

use thiserror::Error;

pub use code::{decode, decode_strict, encode, is_code, nth_prime, GodelCode, MATERIALIZE_BITS, SMOOTH_BOUND};
pub use enumeration::{check_domination, diagonal_out, diagonal_out_rho, dominator, nu, rho, DominationReport};
pub use eval::{eval, EvalBudget, Outcome};
pub use random::{random_term, RANDOM_MAX_ARITY};
pub use term::{PrTerm, Projection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimrecError {
    #[error("projection p_{index}^{arity} needs 1 <= i <= n")]
    BadProjection { index: usize, arity: usize },
    #[error("term has no valid arity")]
    InvalidTerm,
    #[error("term takes {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("value overflowed 64 bits")]
    Overflow,
    #[error("budget must be at least one step")]
    ZeroBudget,
    #[error("empty input range")]
    EmptyRange,
    #[error("table {index} has {len} entries, needs {needed}")]
    ShortTable { index: usize, len: usize, needed: usize },
    #[error("integer is too large to put in canonical code form")]
    Unfactorable,
    #[error("term syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("code syntax error at {pos}: {msg}")]
    CodeSyntax { pos: usize, msg: String },
}
