//! Prenex quantified boolean formulas over a shared circuit.

mod circuit;
pub mod qcir;
pub mod qdimacs;

use std::collections::HashSet;
use std::str::FromStr;

use thiserror::Error;

pub use crate::hyperltl::Quant;
pub use circuit::{Circuit, Lit, Node};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QbfError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("variable {0} occurs in the matrix but is not quantified")]
    NotClosed(u32),
    #[error("variable {0} is quantified more than once")]
    Requantified(u32),
    #[error("variable {0} exceeds the declared variable count")]
    OutOfRange(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Qcir,
    Qdimacs,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Qcir => "qcir",
            Format::Qdimacs => "qdimacs",
        }
    }

    pub fn emit(self, q: &Qbf) -> String {
        match self {
            Format::Qcir => qcir::emit(q),
            Format::Qdimacs => qdimacs::emit(q),
        }
    }

    pub fn parse(self, text: &str) -> Result<Qbf, QbfError> {
        match self {
            Format::Qcir => qcir::parse(text),
            Format::Qdimacs => qdimacs::parse(text),
        }
    }

    /// Guesses the format from a file's contents.
    pub fn sniff(text: &str) -> Format {
        let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
        if first.starts_with("#QCIR") {
            Format::Qcir
        } else {
            Format::Qdimacs
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "qcir" => Ok(Format::Qcir),
            "qdimacs" => Ok(Format::Qdimacs),
            other => Err(format!("unknown format `{other}` (expected qcir or qdimacs)")),
        }
    }
}

/// `Q1 X1 ... Qn Xn. output`, variables numbered from 1.
#[derive(Clone, Debug)]
pub struct Qbf {
    pub num_vars: u32,
    pub prefix: Vec<(Quant, Vec<u32>)>,
    pub circuit: Circuit,
    pub output: Lit,
}

impl Qbf {
    /// Every matrix variable quantified exactly once and within range.
    pub fn check_closed(&self) -> Result<(), QbfError> {
        let mut seen = HashSet::new();
        for (_, vs) in &self.prefix {
            for &v in vs {
                if v == 0 || v > self.num_vars {
                    return Err(QbfError::OutOfRange(v));
                }
                if !seen.insert(v) {
                    return Err(QbfError::Requantified(v));
                }
            }
        }
        match self.circuit.support(self.output).into_iter().find(|v| !seen.contains(v)) {
            Some(v) => Err(QbfError::NotClosed(v)),
            None => Ok(()),
        }
    }

    /// Prefix with empty blocks dropped and equal neighbours merged.
    pub fn normalized_prefix(&self) -> Vec<(Quant, Vec<u32>)> {
        let mut out: Vec<(Quant, Vec<u32>)> = Vec::new();
        for (q, vs) in &self.prefix {
            if vs.is_empty() {
                continue;
            }
            match out.last_mut() {
                Some((lq, lvs)) if lq == q => lvs.extend(vs),
                _ => out.push((*q, vs.clone())),
            }
        }
        out
    }

    /// Quantifier and variables of the outermost maximal block run.
    pub fn leading_run(&self) -> Option<(Quant, Vec<u32>)> {
        self.normalized_prefix().into_iter().next()
    }

    pub fn quantifier_of(&self, v: u32) -> Option<Quant> {
        self.prefix.iter().find(|(_, vs)| vs.contains(&v)).map(|(q, _)| *q)
    }

    pub fn eval_matrix(&self, value: &impl Fn(u32) -> bool) -> bool {
        self.circuit.eval(self.output, value)
    }

    /// Substitutes `assignment` and drops the assigned variables from the prefix.
    pub fn restrict(&self, assignment: &[(u32, bool)]) -> Qbf {
        let fixed: std::collections::HashMap<u32, bool> = assignment.iter().copied().collect();
        let mut circuit = Circuit::new();
        let output = circuit.import(&self.circuit, self.output, &mut |c: &mut Circuit, v: u32| match fixed.get(&v) {
            Some(&b) => Circuit::constant(b),
            None => c.var(v),
        });
        let prefix = self
            .prefix
            .iter()
            .map(|(q, vs)| (*q, vs.iter().copied().filter(|v| !fixed.contains_key(v)).collect()))
            .collect();
        Qbf { num_vars: self.num_vars, prefix, circuit, output }
    }
}
