//! Bounded model checking of HyperLTL formulas by reduction to QBF.

pub mod checker;
pub mod corpus;
pub mod encode;
pub mod hyperltl;
pub mod model;
pub mod oracle;
pub mod qbf;
pub mod smv;
pub mod solver;
pub mod unroll;

#[cfg(test)]
extern crate self as hyperbmc;

#[cfg(test)]
#[path = "../tests/common/gen.rs"]
mod gen;
