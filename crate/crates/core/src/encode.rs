//! Assembly of the bounded model-checking query as a prenex QBF.
//!
//! For a prefix `Q_A A ... Q_Z Z` the matrix is
//! `K_A o_A (K_B o_B (... o_Z body))` where `o` is `and` after an
//! existential and `->` after a universal, and `K_T` is the unrolling of the
//! model bound to `T`.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::hyperltl::{nnf, HyperFormula, Quant};
use crate::model::SymbolicKripke;
use crate::qbf::{Circuit, Lit, Qbf, QbfError};
use crate::unroll::{check_halting, unroll_body, unroll_model, Layout, Semantics, UnrollError, UnrolledAtom};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Encode the negated formula; SAT yields a counterexample.
    Bughunt,
    /// Encode the formula as is; SAT yields a witness.
    Find,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Bughunt => "bughunt",
            Mode::Find => "find",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim_start_matches('-') {
            "bughunt" => Ok(Mode::Bughunt),
            "find" => Ok(Mode::Find),
            other => Err(format!("unknown mode `{other}` (expected bughunt or find)")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub k: usize,
    pub semantics: Semantics,
    pub mode: Option<Mode>,
    pub tids: Vec<String>,
    pub models: Vec<String>,
}

/// A QBF together with the information needed to read its answers back.
#[derive(Clone, Debug)]
pub struct QbfInstance {
    pub qbf: Qbf,
    pub layout: Layout,
    pub meta: Meta,
    /// Unrolling of each trace's model, in prefix order.
    pub model_lits: Vec<Lit>,
    pub body_lit: Lit,
}

impl QbfInstance {
    pub fn atom(&self, id: u32) -> Option<UnrolledAtom> {
        self.layout.decode(id)
    }

    pub fn to_qcir(&self) -> String {
        crate::qbf::qcir::emit(&self.qbf)
    }

    pub fn to_qdimacs(&self) -> String {
        crate::qbf::qdimacs::emit(&self.qbf)
    }

    pub fn to_map(&self) -> String {
        write_map(&self.layout)
    }
}

/// Builds the query for `f` (its body is taken to NNF here) over the models
/// bound positionally to its prefix.
pub fn assemble(
    models: &[&SymbolicKripke],
    f: &HyperFormula,
    k: usize,
    sem: Semantics,
) -> Result<QbfInstance, UnrollError> {
    let tids: Vec<String> = f.prefix.iter().map(|(_, t)| t.tid.clone()).collect();
    let layout = Layout::new(models, &tids, k);
    check_halting(&layout, sem)?;
    let mut c = Circuit::new();
    let model_lits: Vec<Lit> = (0..tids.len()).map(|t| unroll_model(&mut c, &layout, t)).collect();
    let body_lit = unroll_body(&mut c, &layout, &nnf(&f.body), sem)?;
    let mut matrix = body_lit;
    for (t, (q, _)) in f.prefix.iter().enumerate().rev() {
        matrix = match q {
            Quant::Exists => c.and2(model_lits[t], matrix),
            Quant::Forall => c.implies(model_lits[t], matrix),
        };
    }
    let prefix = f.prefix.iter().enumerate().map(|(t, (q, _))| (*q, layout.block_vars(t))).collect();
    let qbf = Qbf { num_vars: layout.num_vars(), prefix, circuit: c, output: matrix };
    Ok(QbfInstance {
        qbf,
        meta: Meta {
            k,
            semantics: sem,
            mode: None,
            tids,
            models: models.iter().map(|m| m.name().to_string()).collect(),
        },
        layout,
        model_lits,
        body_lit,
    })
}

/// One line `id tid var bit step` per unrolled atom.
pub fn write_map(layout: &Layout) -> String {
    let mut out = String::from("c id tid var bit step\n");
    for id in 1..=layout.num_vars() {
        let a = layout.decode(id).expect("ids are dense");
        writeln!(out, "{id} {} {} {} {}", a.tid, a.var, a.bit, a.step).unwrap();
    }
    out
}

pub fn parse_map(text: &str) -> Result<HashMap<u32, UnrolledAtom>, QbfError> {
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('#') {
            continue;
        }
        let bad = || QbfError::Parse { line: i + 1, msg: format!("expected `id tid var bit step`, got `{line}`") };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 5 {
            return Err(bad());
        }
        let id = f[0].parse().map_err(|_| bad())?;
        let atom = UnrolledAtom {
            tid: f[1].to_string(),
            var: f[2].to_string(),
            bit: f[3].parse().map_err(|_| bad())?,
            step: f[4].parse().map_err(|_| bad())?,
        };
        out.insert(id, atom);
    }
    Ok(out)
}
