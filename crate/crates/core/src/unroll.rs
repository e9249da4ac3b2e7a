//! Bounded unrolling of models and LTL bodies into a shared [`Circuit`].
//!
//! Step `i` of trace `tid` gets its own copy of the model's state bits. The
//! global numbering is by trace block (prefix order), then step, then
//! variable declaration order, then bit (most significant first), from 1.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::hyperltl::{dual, nnf, CmpOp, LtlExpr, Operand};
use crate::model::{Atom, SymbolicKripke};
use crate::qbf::{Circuit, Lit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Pes,
    Opt,
    Hpes,
    Hopt,
}

impl Semantics {
    pub const ALL: [Semantics; 4] = [Semantics::Pes, Semantics::Opt, Semantics::Hpes, Semantics::Hopt];

    pub fn is_halting(self) -> bool {
        matches!(self, Semantics::Hpes | Semantics::Hopt)
    }

    /// Pessimistic flavours, whose SAT answers are conclusive.
    pub fn is_pessimistic(self) -> bool {
        matches!(self, Semantics::Pes | Semantics::Hpes)
    }

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Pes => "pes",
            Semantics::Opt => "opt",
            Semantics::Hpes => "hpes",
            Semantics::Hopt => "hopt",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semantics {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim_start_matches('-') {
            "pes" => Ok(Semantics::Pes),
            "opt" => Ok(Semantics::Opt),
            "hpes" => Ok(Semantics::Hpes),
            "hopt" => Ok(Semantics::Hopt),
            other => Err(format!("unknown semantics `{other}` (expected pes, opt, hpes or hopt)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnrollError {
    #[error("halting semantics needs a halt variable, but model `{model}` bound to {tid} has none")]
    MissingHalt { tid: String, model: String },
    #[error("trace variable {0} is not bound to a model")]
    UnknownTid(String),
    #[error("variable `{var}` is not declared in the model bound to {tid}")]
    UnknownVar { var: String, tid: String },
}

/// One bit of one variable of one trace at one step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UnrolledAtom {
    pub tid: String,
    pub var: String,
    pub bit: u32,
    pub step: usize,
}

/// Variable numbering for a tuple of traces unrolled to depth `k`.
#[derive(Clone, Debug)]
pub struct Layout {
    k: usize,
    tids: Vec<String>,
    models: Vec<SymbolicKripke>,
    offsets: Vec<u32>,
    total: u32,
}

impl Layout {
    pub fn new(models: &[&SymbolicKripke], tids: &[String], k: usize) -> Layout {
        assert_eq!(models.len(), tids.len());
        let mut offsets = Vec::new();
        let mut next = 0u32;
        for m in models {
            offsets.push(next);
            next += (m.state_width() * (k + 1)) as u32;
        }
        Layout { k, tids: tids.to_vec(), models: models.iter().map(|m| (*m).clone()).collect(), offsets, total: next }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tids(&self) -> &[String] {
        &self.tids
    }

    pub fn model(&self, t: usize) -> &SymbolicKripke {
        &self.models[t]
    }

    pub fn tid_index(&self, tid: &str) -> Option<usize> {
        self.tids.iter().position(|t| t == tid)
    }

    pub fn num_vars(&self) -> u32 {
        self.total
    }

    /// Position of `atom` within one state vector of `model`.
    fn bit_index(model: &SymbolicKripke, var: &str, bit: u32) -> Option<usize> {
        let mut off = 0;
        for v in model.vars() {
            if v.name() == var {
                return (bit < v.bit_count()).then(|| off + (v.bit_count() - 1 - bit) as usize);
            }
            off += v.bit_count() as usize;
        }
        None
    }

    /// 1-based id of a state bit; `primed` is ignored, pass the step explicitly.
    pub fn var_id(&self, t: usize, step: usize, var: &str, bit: u32) -> Option<u32> {
        let m = &self.models[t];
        let idx = Self::bit_index(m, var, bit)?;
        Some(self.offsets[t] + (step * m.state_width() + idx) as u32 + 1)
    }

    /// All ids of trace `t`, step-major.
    pub fn block_vars(&self, t: usize) -> Vec<u32> {
        let n = (self.models[t].state_width() * (self.k + 1)) as u32;
        (self.offsets[t] + 1..=self.offsets[t] + n).collect()
    }

    /// Ids of trace `t` at `step`, in state-vector order.
    pub fn step_vars(&self, t: usize, step: usize) -> Vec<u32> {
        let w = self.models[t].state_width() as u32;
        let base = self.offsets[t] + step as u32 * w + 1;
        (base..base + w).collect()
    }

    pub fn decode(&self, id: u32) -> Option<UnrolledAtom> {
        if id == 0 || id > self.total {
            return None;
        }
        let t = self.offsets.iter().rposition(|&o| o < id)?;
        let m = &self.models[t];
        let rel = (id - self.offsets[t] - 1) as usize;
        let (step, mut idx) = (rel / m.state_width(), rel % m.state_width());
        for v in m.vars() {
            let w = v.bit_count() as usize;
            if idx < w {
                return Some(UnrolledAtom {
                    tid: self.tids[t].clone(),
                    var: v.name().to_string(),
                    bit: v.bit_count() - 1 - idx as u32,
                    step,
                });
            }
            idx -= w;
        }
        None
    }

    fn lit(&self, c: &mut Circuit, t: usize, step: usize, atom: &Atom) -> Lit {
        let id = self.var_id(t, step, &atom.var, atom.bit).expect("model atoms are validated at construction");
        c.var(id)
    }
}

/// `I(x^0) ∧ δ(x^0, x^1) ∧ … ∧ δ(x^{k-1}, x^k)` for trace `t`.
pub fn unroll_model(c: &mut Circuit, layout: &Layout, t: usize) -> Lit {
    let m = layout.model(t);
    let init = m.init_constraint();
    let trans = m.trans_constraint();
    let mut parts = vec![c.lower(&init, &mut |c, a| layout.lit(c, t, 0, a))];
    for i in 0..layout.k() {
        parts.push(c.lower(&trans, &mut |c, a| layout.lit(c, t, if a.primed { i + 1 } else { i }, a)));
    }
    c.and(parts)
}

/// Conjunction of `halt` at `step` over the given traces.
pub fn halted_predicate(c: &mut Circuit, layout: &Layout, tids: &[usize], step: usize) -> Result<Lit, UnrollError> {
    let mut parts = Vec::new();
    for &t in tids {
        let m = layout.model(t);
        let h = m
            .halt_var()
            .ok_or_else(|| UnrollError::MissingHalt { tid: layout.tids()[t].clone(), model: m.name().to_string() })?;
        let id = layout.var_id(t, step, h, 0).expect("halt var is declared");
        parts.push(c.var(id));
    }
    Ok(c.and(parts))
}

/// Equality of two MSB-first bit vectors after zero-extending the shorter.
pub fn bits_equal(c: &mut Circuit, a: &[Lit], b: &[Lit]) -> Lit {
    let w = a.len().max(b.len());
    let pad = |v: &[Lit]| -> Vec<Lit> {
        let mut out = vec![Lit::FALSE; w - v.len()];
        out.extend_from_slice(v);
        out
    };
    let (a, b) = (pad(a), pad(b));
    let eqs: Vec<Lit> = a.iter().zip(&b).map(|(x, y)| c.iff(*x, *y)).collect();
    c.and(eqs)
}

/// Bits of an integer literal, MSB first; `None` for negative values.
fn const_bits(v: i64) -> Option<Vec<Lit>> {
    if v < 0 {
        return None;
    }
    let w = 64 - (v as u64).leading_zeros().min(63);
    Some((0..w).rev().map(|b| Circuit::constant(v >> b & 1 == 1)).collect())
}

/// Rewrites `<->`/xor with temporal operands into and/or form, so that the
/// bounded base cases apply to each side separately.
pub fn expand_temporal_iff(e: &LtlExpr) -> LtlExpr {
    use LtlExpr::*;
    let b = |x: LtlExpr| Box::new(x);
    match e {
        Iff(x, y) | Xor(x, y) if !(x.is_temporal_free() && y.is_temporal_free()) => {
            let (x, y) = (expand_temporal_iff(x), expand_temporal_iff(y));
            let (dx, dy) = (dual(&x), dual(&y));
            if matches!(e, Iff(..)) {
                Or(b(And(b(x), b(y))), b(And(b(dx), b(dy))))
            } else {
                // exact dual of the iff case, so pes/opt duality survives
                And(b(Or(b(x), b(y))), b(Or(b(dx), b(dy))))
            }
        }
        True | False | Prop { .. } | Cmp { .. } | Iff(..) | Xor(..) => e.clone(),
        Not(x) => Not(b(expand_temporal_iff(x))),
        Next(x) => Next(b(expand_temporal_iff(x))),
        Globally(x) => Globally(b(expand_temporal_iff(x))),
        Finally(x) => Finally(b(expand_temporal_iff(x))),
        And(x, y) => And(b(expand_temporal_iff(x)), b(expand_temporal_iff(y))),
        Or(x, y) => Or(b(expand_temporal_iff(x)), b(expand_temporal_iff(y))),
        Implies(x, y) => Implies(b(expand_temporal_iff(x)), b(expand_temporal_iff(y))),
        Until(x, y) => Until(b(expand_temporal_iff(x)), b(expand_temporal_iff(y))),
        Release(x, y) => Release(b(expand_temporal_iff(x)), b(expand_temporal_iff(y))),
    }
}

struct BodyUnroller<'a> {
    c: &'a mut Circuit,
    layout: &'a Layout,
    sem: Semantics,
    memo: HashMap<(usize, usize), Lit>,
    stutter_memo: HashMap<usize, Lit>,
}

fn key(e: &LtlExpr) -> usize {
    e as *const LtlExpr as usize
}

impl BodyUnroller<'_> {
    fn tid(&self, tid: &str) -> Result<usize, UnrollError> {
        self.layout.tid_index(tid).ok_or_else(|| UnrollError::UnknownTid(tid.to_string()))
    }

    fn prop(&mut self, var: &str, tid: &str, step: usize) -> Result<Lit, UnrollError> {
        let t = self.tid(tid)?;
        let id = self
            .layout
            .var_id(t, step, var, 0)
            .ok_or_else(|| UnrollError::UnknownVar { var: var.into(), tid: tid.into() })?;
        Ok(self.c.var(id))
    }

    fn operand(&mut self, o: &Operand, step: usize) -> Result<Option<Vec<Lit>>, UnrollError> {
        match o {
            Operand::Const(v) => Ok(const_bits(*v)),
            Operand::Var { var, tid } => {
                let t = self.tid(tid)?;
                let d = self
                    .layout
                    .model(t)
                    .var(var)
                    .ok_or_else(|| UnrollError::UnknownVar { var: var.clone(), tid: tid.clone() })?;
                let bits: Vec<u32> = (0..d.bit_count()).rev().collect();
                let mut out = Vec::new();
                for b in bits {
                    let id = self.layout.var_id(t, step, var, b).expect("declared");
                    out.push(self.c.var(id));
                }
                Ok(Some(out))
            }
        }
    }

    fn cmp(&mut self, op: CmpOp, lhs: &Operand, rhs: &Operand, step: usize) -> Result<Lit, UnrollError> {
        let eq = match (self.operand(lhs, step)?, self.operand(rhs, step)?) {
            (Some(a), Some(b)) => bits_equal(self.c, &a, &b),
            // a negative literal never equals a state value
            (None, Some(_)) | (Some(_), None) => Lit::FALSE,
            (None, None) => Circuit::constant(lhs == rhs),
        };
        Ok(if op == CmpOp::Eq { eq } else { !eq })
    }

    /// `[[e]]_i` for `0 <= i <= k + 1`.
    fn at(&mut self, e: &LtlExpr, i: usize) -> Result<Lit, UnrollError> {
        if let Some(&l) = self.memo.get(&(key(e), i)) {
            return Ok(l);
        }
        let k = self.layout.k();
        let lit = if i > k {
            self.base(e)?
        } else {
            use LtlExpr::*;
            match e {
                True => Lit::TRUE,
                False => Lit::FALSE,
                Prop { var, tid, .. } => self.prop(var, tid, i)?,
                Cmp { op, lhs, rhs, .. } => self.cmp(*op, lhs, rhs, i)?,
                Not(x) => !self.at(x, i)?,
                And(x, y) => {
                    let (a, b) = (self.at(x, i)?, self.at(y, i)?);
                    self.c.and2(a, b)
                }
                Or(x, y) => {
                    let (a, b) = (self.at(x, i)?, self.at(y, i)?);
                    self.c.or2(a, b)
                }
                Iff(x, y) => {
                    let (a, b) = (self.at(x, i)?, self.at(y, i)?);
                    self.c.iff(a, b)
                }
                Xor(x, y) => {
                    let (a, b) = (self.at(x, i)?, self.at(y, i)?);
                    self.c.xor(a, b)
                }
                Next(x) => self.at(x, i + 1)?,
                Until(x, y) => {
                    let now = self.at(y, i)?;
                    let hold = self.at(x, i)?;
                    let later = self.at(e, i + 1)?;
                    let keep = self.c.and2(hold, later);
                    self.c.or2(now, keep)
                }
                Release(x, y) => {
                    let now = self.at(y, i)?;
                    let hold = self.at(x, i)?;
                    let later = self.at(e, i + 1)?;
                    let keep = self.c.or2(hold, later);
                    self.c.and2(now, keep)
                }
                Implies(..) | Globally(_) | Finally(_) => unreachable!("body is in NNF"),
            }
        };
        self.memo.insert((key(e), i), lit);
        Ok(lit)
    }

    /// Value assumed for `e` past the end of the unrolling.
    fn base(&mut self, e: &LtlExpr) -> Result<Lit, UnrollError> {
        Ok(match self.sem {
            Semantics::Pes => Lit::FALSE,
            Semantics::Opt => Lit::TRUE,
            Semantics::Hpes | Semantics::Hopt => {
                let tids: Vec<usize> = e.tids().iter().map(|t| self.tid(t)).collect::<Result<_, _>>()?;
                let halted = halted_predicate(self.c, self.layout, &tids, self.layout.k())?;
                let value = self.stutter(e)?;
                if self.sem == Semantics::Hpes {
                    self.c.and2(halted, value)
                } else {
                    self.c.implies(halted, value)
                }
            }
        })
    }

    /// `e` on traces that repeat their step-`k` state forever.
    fn stutter(&mut self, e: &LtlExpr) -> Result<Lit, UnrollError> {
        if let Some(&l) = self.stutter_memo.get(&key(e)) {
            return Ok(l);
        }
        let k = self.layout.k();
        use LtlExpr::*;
        let lit = match e {
            True => Lit::TRUE,
            False => Lit::FALSE,
            Prop { var, tid, .. } => self.prop(var, tid, k)?,
            Cmp { op, lhs, rhs, .. } => self.cmp(*op, lhs, rhs, k)?,
            Not(x) => !self.stutter(x)?,
            And(x, y) => {
                let (a, b) = (self.stutter(x)?, self.stutter(y)?);
                self.c.and2(a, b)
            }
            Or(x, y) => {
                let (a, b) = (self.stutter(x)?, self.stutter(y)?);
                self.c.or2(a, b)
            }
            Iff(x, y) => {
                let (a, b) = (self.stutter(x)?, self.stutter(y)?);
                self.c.iff(a, b)
            }
            Xor(x, y) => {
                let (a, b) = (self.stutter(x)?, self.stutter(y)?);
                self.c.xor(a, b)
            }
            // every position of a constant suffix looks the same
            Next(x) | Until(_, x) | Release(_, x) => self.stutter(x)?,
            Implies(..) | Globally(_) | Finally(_) => unreachable!("body is in NNF"),
        };
        self.stutter_memo.insert(key(e), lit);
        Ok(lit)
    }
}

/// Checks that every trace has a halt variable when `sem` needs one.
pub fn check_halting(layout: &Layout, sem: Semantics) -> Result<(), UnrollError> {
    if sem.is_halting() {
        for t in 0..layout.tids().len() {
            if layout.model(t).halt_var().is_none() {
                return Err(UnrollError::MissingHalt {
                    tid: layout.tids()[t].clone(),
                    model: layout.model(t).name().to_string(),
                });
            }
        }
    }
    Ok(())
}

/// `[[body]]^sem_{0,k}`; the body is brought into NNF first.
pub fn unroll_body(c: &mut Circuit, layout: &Layout, body: &LtlExpr, sem: Semantics) -> Result<Lit, UnrollError> {
    check_halting(layout, sem)?;
    let body = expand_temporal_iff(&nnf(body));
    let mut u = BodyUnroller { c, layout, sem, memo: HashMap::new(), stutter_memo: HashMap::new() };
    u.at(&body, 0)
}
