//! Symbolic Kripke structures over bit-blasted variables.
//!
//! A model is a list of [`VarDecl`]s plus an initial-state predicate and a
//! transition predicate, both [`BoolExpr`]s over [`Atom`]s. Ranged integers
//! are stored as the raw binary of their value (no offset by the lower bound),
//! most significant bit first. Values that fit the bit width but fall outside
//! the declared range are ruled out by a domain constraint that is conjoined
//! into the initial and transition predicates on use.

mod explicit;
mod expr;
mod kripke;

pub use explicit::{enumerate_states, ExplicitKripke, State};
pub use expr::{eval, eval_with, Assignment, Atom, BoolExpr};
pub use kripke::{bit_blast, decode_value, encode_value, SymbolicKripke, VarDecl, VarKind};

use thiserror::Error;

/// Largest admissible upper bound of a ranged variable (exclusive).
pub const MAX_RANGE: u64 = 1 << 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("variable `{0}` declared twice")]
    DuplicateVar(String),
    #[error("variable `{name}`: invalid range {lo}..{hi}")]
    BadRange { name: String, lo: i64, hi: i64 },
    #[error("variable `{name}`: upper bound {hi} too large (limit {MAX_RANGE}), model too large")]
    RangeTooLarge { name: String, hi: i64 },
    #[error("value out of bound: {value} not in {lo}..{hi} for `{name}`")]
    ValueOutOfBound { name: String, value: i64, lo: i64, hi: i64 },
    #[error("atom `{0}` references an undeclared variable or bit")]
    UnknownAtom(String),
    #[error("initial predicate references next-state atom `{0}`")]
    PrimedInInit(String),
    #[error("halt variable `{0}` is not a declared boolean")]
    BadHaltVar(String),
    #[error("atom `{0}` missing from assignment")]
    MissingAtom(String),
    #[error("state space has {size} assignments, more than the limit {limit}")]
    TooManyStates { size: u128, limit: usize },
}
