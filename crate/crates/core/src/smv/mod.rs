//! Parser and compiler for a small SMV subset.
//!
//! ```text
//! model   := "MODULE" "main" section+
//! section := "VAR" (ident ":" type ";")+ | "ASSIGN" assign+ | "INIT" expr ";" | "TRANS" expr ";"
//! type    := "boolean" | int ".." int
//! assign  := ("init" | "next") "(" ident ")" ":=" rhs ";"
//! rhs     := expr | "{" expr ("," expr)* "}" | "case" (expr ":" rhs ";")+ "esac"
//! ```
//!
//! Operators, loosest first: `<->`, `->` (right), `|`, `&`, comparisons
//! (`= != < <= > >=`), `+ -`, `!`. A variable called `halt`, or the one named
//! by a `-- @halt: name` comment, becomes the model's halting proposition.

pub mod ast;
mod bitvec;
mod compile;
mod lexer;
mod parser;
mod print;

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::model::{ModelError, SymbolicKripke};
pub use print::{print_expr, print_module};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SmvErrorKind {
    #[error("lexical error: {0}")]
    Lex(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared variable `{0}`")]
    Undeclared(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("{0}")]
    OutOfRange(String),
    #[error("{0}")]
    Duplicate(String),
    #[error("{0}")]
    Model(ModelError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{origin}:{pos}: {kind}")]
pub struct SmvError {
    pub origin: String,
    pub pos: Pos,
    pub kind: SmvErrorKind,
}

/// Parses `text` into an AST; `origin` is used in diagnostics only.
pub fn parse_ast(text: &str, origin: &str) -> Result<ast::SmvModule, SmvError> {
    parser::parse(text).map_err(|(kind, pos)| SmvError { origin: origin.to_string(), pos, kind })
}

/// Compiles a parsed module; the model is named after `origin`.
pub fn compile_ast(module: &ast::SmvModule, origin: &str) -> Result<SymbolicKripke, SmvError> {
    compile::compile(module, &model_name(origin)).map_err(|(kind, pos)| SmvError {
        origin: origin.to_string(),
        pos,
        kind,
    })
}

pub fn parse_model(text: &str, origin: &str) -> Result<SymbolicKripke, SmvError> {
    compile_ast(&parse_ast(text, origin)?, origin)
}

fn model_name(origin: &str) -> String {
    Path::new(origin).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| origin.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{encode_value, enumerate_states, eval_with, Atom, BoolExpr};

    pub(crate) const K_EXP: &str = "\
MODULE main
VAR
  low : boolean;
  high : boolean;
  halt : boolean;
  PC : 1..3;
ASSIGN
  init(low) := FALSE;
  init(high) := FALSE;
  init(halt) := FALSE;
  init(PC) := 1;
  next(PC) := case PC = 1 : 2; PC = 2 : 3; TRUE : 3; esac;
  next(high) := case PC = 1 : {TRUE, FALSE}; TRUE : high; esac;
  next(low) := case PC = 2 & high : TRUE; TRUE : low; esac;
  next(halt) := case PC = 2 : TRUE; TRUE : halt; esac;
";

    #[test]
    fn k_exp_has_five_reachable_states() {
        let m = parse_model(K_EXP, "k_exp.smv").unwrap();
        assert_eq!(m.name(), "k_exp");
        assert_eq!(m.halt_var(), Some("halt"));
        let k = enumerate_states(&m, 1000).unwrap().reachable();
        assert_eq!(k.states.len(), 5);
        assert!(k.dead_ends.is_empty());
        // values in declaration order: low, high, halt, PC
        let idx = |v: [u64; 4]| k.index_of(&v).unwrap();
        let s0 = idx([0, 0, 0, 1]);
        let s1 = idx([0, 1, 0, 2]);
        let s3 = idx([0, 0, 0, 2]);
        let s2 = idx([1, 1, 1, 3]);
        let s4 = idx([0, 0, 1, 3]);
        assert_eq!(k.initial, vec![s0]);
        let mut e0 = k.edges[s0].clone();
        e0.sort();
        let mut want = vec![s1, s3];
        want.sort();
        assert_eq!(e0, want);
        assert_eq!(k.edges[s1], vec![s2]);
        assert_eq!(k.edges[s3], vec![s4]);
        assert_eq!(k.edges[s2], vec![s2]);
        assert_eq!(k.edges[s4], vec![s4]);
    }

    #[test]
    fn k_exp_initial_predicate() {
        let m = parse_model(K_EXP, "k_exp.smv").unwrap();
        let pc = m.var("PC").unwrap();
        assert_eq!(encode_value(pc, 1).unwrap().to_string(), "(!PC_1 & PC_0)");
        assert_eq!(m.init().to_string(), "(!low & !high & !halt & !PC_1 & PC_0)");
    }

    #[test]
    fn stutter_boolean() {
        let m = parse_model("MODULE main VAR b: boolean; ASSIGN init(b):=FALSE; next(b):=b;", "t").unwrap();
        let k = enumerate_states(&m, 16).unwrap();
        assert_eq!(k.states.len(), 2);
        assert_eq!(k.initial.len(), 1);
        assert_eq!(k.edges, vec![vec![0], vec![1]]);
    }

    // Hand-rolled semantics of `next(n) := case c: 1; TRUE: {2,3}; esac`.
    fn case_oracle(c: bool, n_next: u64) -> bool {
        if c {
            n_next == 1
        } else {
            n_next == 2 || n_next == 3
        }
    }

    #[test]
    fn case_with_set_matches_truth_table() {
        let src = "MODULE main VAR c: boolean; n: 0..3; ASSIGN next(n) := case c: 1; TRUE: {2,3}; esac;";
        let m = parse_model(src, "t").unwrap();
        for bits in 0..(1u32 << 6) {
            let val = |a: &Atom| -> Option<bool> {
                let idx = match (a.var.as_str(), a.primed) {
                    ("c", false) => 0,
                    ("c", true) => 1,
                    ("n", false) => 2 + a.bit,
                    ("n", true) => 4 + a.bit,
                    _ => return None,
                };
                Some(bits >> idx & 1 == 1)
            };
            let c = bits & 1 == 1;
            let n_next = ((bits >> 4) & 3) as u64;
            let got = eval_with(&m.trans_constraint(), &mut |a| val(a)).unwrap();
            assert_eq!(got, case_oracle(c, n_next), "bits {bits:06b}");
        }
    }

    #[test]
    fn set_literals_commute() {
        let a = parse_model("MODULE main VAR n: 0..5; ASSIGN next(n) := {1, 4, 2};", "t").unwrap();
        let b = parse_model("MODULE main VAR n: 0..5; ASSIGN next(n) := {2, 1, 4};", "t").unwrap();
        for bits in 0..(1u32 << 6) {
            let mut val = |a: &Atom| Some(bits >> (a.bit + if a.primed { 3 } else { 0 }) & 1 == 1);
            assert_eq!(eval_with(a.trans(), &mut val).unwrap(), eval_with(b.trans(), &mut val).unwrap());
        }
    }

    #[test]
    fn arithmetic_next_partial_overflow_is_constrained_false() {
        let m = parse_model("MODULE main VAR x: 0..3; ASSIGN init(x) := 0; next(x) := x + 1;", "t").unwrap();
        let k = enumerate_states(&m, 16).unwrap();
        assert_eq!(k.edges, vec![vec![1], vec![2], vec![3], vec![]]);
        assert_eq!(k.dead_ends, vec![3]);
    }

    fn err(src: &str) -> SmvError {
        parse_model(src, "bad.smv").unwrap_err()
    }

    #[test]
    fn diagnostics() {
        let e = err("MODULE main VAR b: boolean; ASSIGN next(c) := b;");
        assert!(matches!(e.kind, SmvErrorKind::Undeclared(ref v) if v == "c"));
        assert_eq!(e.to_string(), "bad.smv:1:36: undeclared variable `c`");

        let e = err("MODULE main VAR b: boolean; n: 0..3; INIT b & n;");
        assert!(matches!(e.kind, SmvErrorKind::TypeMismatch(_)));

        let e = err("MODULE main VAR n: 0..3; ASSIGN init(n) := TRUE;");
        assert!(matches!(e.kind, SmvErrorKind::TypeMismatch(_)));

        let e = err("MODULE main VAR n: 0..3; ASSIGN init(n) := 7;");
        assert!(matches!(e.kind, SmvErrorKind::OutOfRange(_)));
        assert!(e.to_string().contains("value out of bound"));

        let e = err("MODULE main VAR n: 1..3; INIT n = 0;");
        assert!(matches!(e.kind, SmvErrorKind::OutOfRange(_)));

        let e = err("MODULE main VAR n: 0..3; ASSIGN next(n) := n + 4;");
        assert!(matches!(e.kind, SmvErrorKind::OutOfRange(_)));

        let e = err("MODULE main VAR b: boolean; INIT next(b);");
        assert!(matches!(e.kind, SmvErrorKind::Syntax(_)));

        let e = err("MODULE main VAR b: boolean; b: boolean;");
        assert!(matches!(e.kind, SmvErrorKind::Duplicate(_)));

        let e = err("MODULE main VAR b: boolean; ASSIGN init(b) := TRUE; init(b) := FALSE;");
        assert!(matches!(e.kind, SmvErrorKind::Duplicate(_)));

        let e = err("MODULE main VAR n: 0..1073741824;");
        assert!(matches!(e.kind, SmvErrorKind::Model(ModelError::RangeTooLarge { .. })));
    }

    #[test]
    fn halt_pragma() {
        let m = parse_model("-- @halt: done\nMODULE main VAR done: boolean;", "t").unwrap();
        assert_eq!(m.halt_var(), Some("done"));
        let e = err("-- @halt: nope\nMODULE main VAR done: boolean;");
        assert!(matches!(e.kind, SmvErrorKind::Undeclared(_)));
        assert_eq!(e.pos.line, 1);
        let m = parse_model("MODULE main VAR x: boolean;", "t").unwrap();
        assert_eq!(m.halt_var(), None);
    }

    #[test]
    fn print_round_trip() {
        let srcs = [
            K_EXP,
            "-- @halt: t\nMODULE main VAR t: boolean; x: 0..7; ASSIGN next(x) := case x < 3 : x + 1; TRUE : {0, x - 1}; esac; INIT x != 2 -> t; TRANS next(t) <-> !t | x >= 4;",
        ];
        for src in srcs {
            let ast = parse_ast(src, "m").unwrap();
            let printed = print_module(&ast);
            let again = parse_ast(&printed, "m").unwrap();
            assert_eq!(print_module(&again), printed);
            assert_eq!(compile_ast(&ast, "m").unwrap(), compile_ast(&again, "m").unwrap());
        }
    }

    #[test]
    fn ranged_trans_uses_domain() {
        let m = parse_model("MODULE main VAR PC: 1..3; ASSIGN next(PC) := PC;", "t").unwrap();
        let c = m.trans_constraint();
        // PC = 0 is not a state even though it is a bit pattern
        let mut zero = |_: &Atom| Some(false);
        assert!(!eval_with(&c, &mut zero).unwrap());
        assert_ne!(c, BoolExpr::False);
    }
}
