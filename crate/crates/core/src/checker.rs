//! The end-to-end check: build the query for the chosen mode, solve it,
//! interpret the answer under the chosen semantics, and decode traces.

use std::collections::HashMap;
use std::fmt;
#[cfg(feature = "external")]
use std::time::Duration;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use crate::encode::Mode;
use crate::encode::{assemble, QbfInstance};
use crate::hyperltl::{negate, to_nnf, typecheck, HqError, HyperFormula, Quant};
use crate::model::{decode_value, eval_with, SymbolicKripke};
use crate::solver::{solve, SolveError, SolveResult, SolveStats, SolverConfig, Status};
#[cfg(feature = "external")]
use crate::solver::{solve_external, ExternalError, Format};
use crate::unroll::{Layout, Semantics, UnrollError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Holds,
    Violated,
    Inconclusive,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Holds => "holds",
            Answer::Violated => "violated",
            Answer::Inconclusive => "inconclusive",
        })
    }
}

impl std::str::FromStr for Answer {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "holds" => Ok(Answer::Holds),
            "violated" => Ok(Answer::Violated),
            "inconclusive" => Ok(Answer::Inconclusive),
            other => Err(format!("unknown answer `{other}` (expected holds, violated or inconclusive)")),
        }
    }
}

/// What a solver answer says about the property.
///
/// Only SAT under a pessimistic semantics and UNSAT under an optimistic one
/// carry over from the bounded query to the unbounded property.
pub fn interpret(mode: Mode, sem: Semantics, status: Status) -> Answer {
    match (mode, sem.is_pessimistic(), status) {
        (Mode::Bughunt, true, Status::Sat) => Answer::Violated,
        (Mode::Bughunt, false, Status::Unsat) => Answer::Holds,
        (Mode::Find, true, Status::Sat) => Answer::Holds,
        (Mode::Find, false, Status::Unsat) => Answer::Violated,
        _ => Answer::Inconclusive,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Int(u64),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(true) => f.write_str("TRUE"),
            Value::Bool(false) => f.write_str("FALSE"),
            Value::Int(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Bool(b) => s.serialize_bool(*b),
            Value::Int(v) => s.serialize_u64(*v),
        }
    }
}

/// Variable values at one step, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step(pub Vec<(String, Value)>);

impl Step {
    pub fn get(&self, var: &str) -> Option<Value> {
        self.0.iter().find(|(n, _)| n == var).map(|(_, v)| *v)
    }
}

impl Serialize for Step {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub tid: String,
    pub model: String,
    pub steps: Vec<Step>,
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "trace {} ({}):", self.tid, self.model)?;
        for (i, step) in self.steps.iter().enumerate() {
            let vals: Vec<String> = step.0.iter().map(|(n, v)| format!("{n}={v}")).collect();
            writeln!(f, "  step {i}: {}", vals.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    /// `None` when the solver gave up.
    pub qbf_status: Option<Status>,
    pub traces: Vec<Trace>,
    pub k: usize,
    pub semantics: Semantics,
    pub mode: Mode,
    pub notes: Vec<String>,
    pub stats: SolveStats,
}

impl Verdict {
    /// `YES`/`NO` for SAT/UNSAT, as printed by the command-line tool.
    pub fn yes_no(&self) -> &'static str {
        match self.qbf_status {
            Some(Status::Sat) => "YES",
            Some(Status::Unsat) => "NO",
            None => "UNKNOWN",
        }
    }
}

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Formula(#[from] HqError),
    #[error(transparent)]
    Unroll(#[from] UnrollError),
    #[error(transparent)]
    Solve(SolveError),
    #[cfg(feature = "external")]
    #[error("external solver: {0}")]
    External(#[from] ExternalError),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Clone, Debug)]
pub enum Backend {
    Internal(SolverConfig),
    #[cfg(feature = "external")]
    External {
        command: String,
        format: Format,
        timeout: Duration,
    },
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Internal(SolverConfig::default())
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub k: usize,
    pub semantics: Semantics,
    pub mode: Mode,
    pub backend: Backend,
}

impl CheckOptions {
    pub fn new(k: usize, semantics: Semantics, mode: Mode) -> Self {
        CheckOptions { k, semantics, mode, backend: Backend::default() }
    }
}

/// The formula actually encoded: negated for bug hunting, as is otherwise.
pub fn query_formula(f: &HyperFormula, mode: Mode) -> HyperFormula {
    match mode {
        Mode::Bughunt => negate(f),
        Mode::Find => to_nnf(f),
    }
}

/// Typechecks and assembles the query without solving it.
pub fn build_query(
    models: &[&SymbolicKripke],
    f: &HyperFormula,
    opts: &CheckOptions,
) -> Result<QbfInstance, CheckError> {
    typecheck(f, models)?;
    let q = query_formula(f, opts.mode);
    let mut inst = assemble(models, &q, opts.k, opts.semantics)?;
    inst.meta.mode = Some(opts.mode);
    Ok(inst)
}

pub fn check(models: &[&SymbolicKripke], f: &HyperFormula, opts: &CheckOptions) -> Result<Verdict, CheckError> {
    let inst = build_query(models, f, opts)?;
    let mut verdict = Verdict {
        answer: Answer::Inconclusive,
        qbf_status: None,
        traces: vec![],
        k: opts.k,
        semantics: opts.semantics,
        mode: opts.mode,
        notes: vec![],
        stats: SolveStats::default(),
    };
    let result = match &opts.backend {
        Backend::Internal(cfg) => match solve(&inst.qbf, cfg) {
            Ok(r) => r,
            Err(e @ SolveError::BudgetExceeded { .. }) => {
                verdict.notes.push(format!("solver gave up: {e}"));
                return Ok(verdict);
            }
            Err(e) => return Err(CheckError::Solve(e)),
        },
        #[cfg(feature = "external")]
        Backend::External { command, format, timeout } => {
            solve_external(&inst.qbf, Some(&inst.to_map()), command, *format, *timeout)?
        }
    };
    verdict.qbf_status = Some(result.status);
    verdict.answer = interpret(opts.mode, opts.semantics, result.status);
    verdict.stats = result.stats.clone();
    attach_traces(&inst, &result, &mut verdict)?;
    Ok(verdict)
}

fn attach_traces(inst: &QbfInstance, result: &SolveResult, verdict: &mut Verdict) -> Result<(), CheckError> {
    let Some((lead_q, _)) = inst.qbf.leading_run() else {
        return Ok(());
    };
    if !result.status.is_sat() {
        return Ok(());
    }
    if lead_q == Quant::Forall {
        verdict.notes.push("no certificate for leading universal block".into());
        return Ok(());
    }
    let Some(cert) = &result.certificate else {
        verdict.notes.push("solver returned no certificate".into());
        return Ok(());
    };
    let values: HashMap<u32, bool> = cert.iter().copied().collect();
    for t in 0..inst.layout.tids().len() {
        if inst.layout.block_vars(t).iter().all(|v| values.contains_key(v)) {
            verdict.traces.push(decode_trace(&values, &inst.layout, t)?);
        }
    }
    Ok(())
}

/// Reads trace `t` out of `assignment` and checks it is a path of its model.
pub fn decode_trace(assignment: &HashMap<u32, bool>, layout: &Layout, t: usize) -> Result<Trace, CheckError> {
    let model = layout.model(t);
    let tid = &layout.tids()[t];
    let bit = |step: usize, var: &str, b: u32| -> Result<bool, CheckError> {
        let id = layout.var_id(t, step, var, b).expect("declared variable");
        assignment
            .get(&id)
            .copied()
            .ok_or_else(|| CheckError::Internal(format!("no value for {var}[{tid}] bit {b} at step {step}")))
    };
    let mut steps = Vec::new();
    for step in 0..=layout.k() {
        let mut vals = Vec::new();
        for d in model.vars() {
            let bits = (0..d.bit_count()).rev().map(|b| bit(step, d.name(), b)).collect::<Result<Vec<_>, _>>()?;
            let v = decode_value(&bits);
            if !d.contains(v as i64) {
                return Err(CheckError::Internal(format!("{}[{tid}] = {v} at step {step} is out of range", d.name())));
            }
            vals.push((d.name().to_string(), if d.is_boolean() { Value::Bool(v == 1) } else { Value::Int(v) }));
        }
        steps.push(Step(vals));
    }
    let holds = |e: &crate::model::BoolExpr, step: usize| -> Result<bool, CheckError> {
        let mut missing = None;
        let r = eval_with(e, &mut |a| match bit(if a.primed { step + 1 } else { step }, &a.var, a.bit) {
            Ok(b) => Some(b),
            Err(err) => {
                missing = Some(err);
                None
            }
        });
        match (r, missing) {
            (_, Some(err)) => Err(err),
            (Ok(b), None) => Ok(b),
            (Err(e), None) => Err(CheckError::Internal(e.to_string())),
        }
    };
    if !holds(&model.init_constraint(), 0)? {
        return Err(CheckError::Internal(format!("trace {tid} does not start in an initial state")));
    }
    let trans = model.trans_constraint();
    for step in 0..layout.k() {
        if !holds(&trans, step)? {
            return Err(CheckError::Internal(format!(
                "trace {tid} has no transition from step {step} to {}",
                step + 1
            )));
        }
    }
    Ok(Trace { tid: tid.clone(), model: model.name().to_string(), steps })
}
