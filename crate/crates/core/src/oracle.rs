//! Reference implementation of the bounded semantics over explicit traces.
//!
//! Nothing here goes through circuits: models are enumerated state by state,
//! every path prefix of length `k + 1` is listed, and the body is evaluated
//! by direct recursion on concrete values. Used to cross-check the QBF
//! pipeline.

use std::collections::HashMap;

use thiserror::Error;

use crate::hyperltl::{dual, nnf, CmpOp, HyperFormula, LtlExpr, Operand, Quant};
use crate::model::{enumerate_states, ExplicitKripke, ModelError, SymbolicKripke};
use crate::unroll::Semantics;

pub const MAX_STATES: usize = 1 << 16;
pub const MAX_PATHS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{tid} has {count} path prefixes, over the limit of {limit}")]
    TooManyPaths { tid: String, count: usize, limit: usize },
    #[error("halting semantics, but the model bound to {0} has no halt variable")]
    MissingHalt(String),
    #[error("{models} models for {quantifiers} quantifiers")]
    Arity { models: usize, quantifiers: usize },
}

/// One finite trace per trace variable.
#[derive(Clone, Debug, Default)]
pub struct TraceTuple {
    traces: HashMap<String, Trace>,
}

#[derive(Clone, Debug)]
struct Trace {
    vars: HashMap<String, usize>,
    halt: Option<usize>,
    steps: Vec<Vec<u64>>,
}

impl TraceTuple {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `tid` to `steps`, each a value vector in `var_names` order.
    pub fn bind(&mut self, tid: &str, var_names: &[String], halt: Option<&str>, steps: Vec<Vec<u64>>) {
        let vars: HashMap<String, usize> = var_names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let halt = halt.and_then(|h| vars.get(h).copied());
        self.traces.insert(tid.to_string(), Trace { vars, halt, steps });
    }

    pub fn unbind(&mut self, tid: &str) {
        self.traces.remove(tid);
    }

    fn value(&self, tid: &str, var: &str, step: usize) -> u64 {
        let t = &self.traces[tid];
        t.steps[step][t.vars[var]]
    }

    fn len(&self, tid: &str) -> usize {
        self.traces[tid].steps.len()
    }

    /// All traces in `tids` have `halt` set at `step`; traces without a halt
    /// variable never count as halted.
    fn halted(&self, tids: &[String], step: usize) -> bool {
        tids.iter().all(|tid| {
            let t = &self.traces[tid];
            t.halt.is_some_and(|h| t.steps[step][h] != 0)
        })
    }
}

fn operand(tuple: &TraceTuple, o: &Operand, step: usize) -> i128 {
    match o {
        Operand::Const(c) => *c as i128,
        Operand::Var { var, tid } => tuple.value(tid, var, step) as i128,
    }
}

/// Value of `e` at a single step, reading `X`, `U` and `R` on the infinite
/// repetition of that step.
fn constant_suffix(tuple: &TraceTuple, e: &LtlExpr, step: usize) -> bool {
    let ev = |x: &LtlExpr| constant_suffix(tuple, x, step);
    match e {
        LtlExpr::True => true,
        LtlExpr::False => false,
        LtlExpr::Prop { var, tid, .. } => tuple.value(tid, var, step) != 0,
        LtlExpr::Cmp { op, lhs, rhs, .. } => {
            let eq = operand(tuple, lhs, step) == operand(tuple, rhs, step);
            eq == (*op == CmpOp::Eq)
        }
        LtlExpr::Not(x) => !ev(x),
        LtlExpr::And(x, y) => ev(x) && ev(y),
        LtlExpr::Or(x, y) => ev(x) || ev(y),
        LtlExpr::Implies(x, y) => !ev(x) || ev(y),
        LtlExpr::Iff(x, y) => ev(x) == ev(y),
        LtlExpr::Xor(x, y) => ev(x) != ev(y),
        LtlExpr::Next(x) | LtlExpr::Globally(x) | LtlExpr::Finally(x) => ev(x),
        LtlExpr::Until(_, y) | LtlExpr::Release(_, y) => ev(y),
    }
}

/// `(tuple, i) |=^sem_k psi` for `psi` in NNF. Traces must have at least
/// `k + 1` steps.
pub fn eval_bounded(tuple: &TraceTuple, psi: &LtlExpr, i: usize, k: usize, sem: Semantics) -> bool {
    if i > k {
        return match sem {
            Semantics::Pes => false,
            Semantics::Opt => true,
            Semantics::Hpes | Semantics::Hopt => {
                let halted = tuple.halted(&psi.tids(), k);
                let tail = constant_suffix(tuple, psi, k);
                if sem == Semantics::Hpes {
                    halted && tail
                } else {
                    !halted || tail
                }
            }
        };
    }
    let ev = |x: &LtlExpr, j: usize| eval_bounded(tuple, x, j, k, sem);
    match psi {
        LtlExpr::True => true,
        LtlExpr::False => false,
        LtlExpr::Prop { var, tid, .. } => {
            debug_assert!(tuple.len(tid) > k);
            tuple.value(tid, var, i) != 0
        }
        LtlExpr::Cmp { op, lhs, rhs, .. } => {
            let eq = operand(tuple, lhs, i) == operand(tuple, rhs, i);
            eq == (*op == CmpOp::Eq)
        }
        LtlExpr::Not(x) => !ev(x, i),
        LtlExpr::And(x, y) => ev(x, i) && ev(y, i),
        LtlExpr::Or(x, y) => ev(x, i) || ev(y, i),
        LtlExpr::Iff(x, y) if x.is_temporal_free() && y.is_temporal_free() => ev(x, i) == ev(y, i),
        LtlExpr::Xor(x, y) if x.is_temporal_free() && y.is_temporal_free() => ev(x, i) != ev(y, i),
        // with temporal operands both sides can be unsettled at the bound,
        // so "same value" is read as "both hold or both fail"
        LtlExpr::Iff(x, y) => (ev(x, i) && ev(y, i)) || (ev(&dual(x), i) && ev(&dual(y), i)),
        LtlExpr::Xor(x, y) => (ev(x, i) || ev(y, i)) && (ev(&dual(x), i) || ev(&dual(y), i)),
        LtlExpr::Next(x) => ev(x, i + 1),
        // past the bound the whole formula takes the semantics' default
        LtlExpr::Until(x, y) => {
            (i..=k).any(|j| ev(y, j) && (i..j).all(|m| ev(x, m))) || ((i..=k).all(|m| ev(x, m)) && ev(psi, k + 1))
        }
        LtlExpr::Release(x, y) => {
            (i..=k).any(|j| (i..=j).all(|m| ev(y, m)) && ev(x, j)) || ((i..=k).all(|m| ev(y, m)) && ev(psi, k + 1))
        }
        LtlExpr::Implies(..) | LtlExpr::Globally(_) | LtlExpr::Finally(_) => eval_bounded(tuple, &nnf(psi), i, k, sem),
    }
}

/// `models |=^sem_k f`, by quantifying over every path prefix of length `k + 1`.
pub fn check_brute(
    models: &[&SymbolicKripke],
    f: &HyperFormula,
    k: usize,
    sem: Semantics,
) -> Result<bool, OracleError> {
    if models.len() != f.prefix.len() {
        return Err(OracleError::Arity { models: models.len(), quantifiers: f.prefix.len() });
    }
    let mut bound = Vec::new();
    for (m, (_, tv)) in models.iter().zip(&f.prefix) {
        if sem.is_halting() && m.halt_var().is_none() {
            return Err(OracleError::MissingHalt(tv.tid.clone()));
        }
        let exp: ExplicitKripke = enumerate_states(m, MAX_STATES)?;
        let paths = exp.paths(k + 1);
        if paths.len() > MAX_PATHS {
            return Err(OracleError::TooManyPaths { tid: tv.tid.clone(), count: paths.len(), limit: MAX_PATHS });
        }
        let steps: Vec<Vec<Vec<u64>>> =
            paths.iter().map(|p| p.iter().map(|&s| exp.states[s].values.clone()).collect()).collect();
        bound.push((tv.tid.clone(), exp.var_names.clone(), m.halt_var().map(str::to_string), steps));
    }
    let body = nnf(&f.body);
    let mut tuple = TraceTuple::new();
    Ok(quantify(&f.prefix.iter().map(|(q, _)| *q).collect::<Vec<_>>(), &bound, &mut tuple, &body, k, sem))
}

type Bound = (String, Vec<String>, Option<String>, Vec<Vec<Vec<u64>>>);

fn quantify(
    quants: &[Quant],
    bound: &[Bound],
    tuple: &mut TraceTuple,
    body: &LtlExpr,
    k: usize,
    sem: Semantics,
) -> bool {
    let Some((q, rest)) = quants.split_first() else {
        return eval_bounded(tuple, body, 0, k, sem);
    };
    let (tid, names, halt, paths) = &bound[0];
    let mut pick = |p: &Vec<Vec<u64>>| {
        tuple.bind(tid, names, halt.as_deref(), p.clone());
        let r = quantify(rest, &bound[1..], tuple, body, k, sem);
        tuple.unbind(tid);
        r
    };
    match q {
        Quant::Exists => paths.iter().any(&mut pick),
        Quant::Forall => paths.iter().all(&mut pick),
    }
}
