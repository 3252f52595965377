//! Executable diagonal/fixed-point constructions over finite and coded
//! domains: the diagonal schema itself, Euclid's prime instance, Boolos's
//! choice-map witnesses, the LTL Yablo formula, Priest's inclosure schema, and
//! the coded enumeration of primitive recursive functions with its
//! dominating function.

pub mod boolos;
pub mod carrier;
pub mod euclid;
pub mod inclosure;
pub mod ltl;
pub mod primrec;
pub mod report;
pub mod schema;
pub mod suite;
