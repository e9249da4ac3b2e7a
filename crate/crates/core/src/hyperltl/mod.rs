//! HyperLTL formulas in `.hq` syntax: parsing, NNF and typechecking.

mod ast;
mod nnf;
mod parser;
mod typecheck;

use thiserror::Error;

pub use ast::{CmpOp, HyperFormula, Loc, LtlExpr, Operand, Quant, TraceVar};
pub use nnf::{dual, is_nnf, negate, nnf, to_nnf};
pub use typecheck::typecheck;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HqErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("trace variable {0} is quantified twice")]
    DuplicateTid(String),
    #[error("trace variable {0} is not quantified")]
    UnboundTid(String),
    #[error("formula has {quantifiers} quantifiers but {models} models were given")]
    Arity { models: usize, quantifiers: usize },
    #[error("type error: {0}")]
    Type(String),
    #[error("{0}")]
    OutOfBound(String),
    #[error("undefined variable: {0}")]
    Undefined(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{loc}: {kind}")]
pub struct HqError {
    pub loc: Loc,
    pub kind: HqErrorKind,
}

pub fn parse_formula(text: &str) -> Result<HyperFormula, HqError> {
    parser::parse(text)
}
