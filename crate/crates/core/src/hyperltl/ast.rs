use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

/// Source location of a formula node.
///
/// Locations never take part in equality or hashing, so two formulas that
/// differ only in layout compare equal.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Loc {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Loc {}

impl Hash for Loc {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quant {
    Forall,
    Exists,
}

impl Quant {
    pub fn flip(self) -> Quant {
        match self {
            Quant::Forall => Quant::Exists,
            Quant::Exists => Quant::Forall,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quant::Forall => "forall",
            Quant::Exists => "exists",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TraceVar {
    pub tid: String,
    pub position: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CmpOp {
    Eq,
    Ne,
}

impl CmpOp {
    pub fn flip(self) -> CmpOp {
        match self {
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Operand {
    Var { var: String, tid: String },
    Const(i64),
}

/// LTL body over indexed propositions `var[tid]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LtlExpr {
    True,
    False,
    Prop {
        var: String,
        tid: String,
        loc: Loc,
    },
    Cmp {
        op: CmpOp,
        lhs: Operand,
        rhs: Operand,
        loc: Loc,
    },
    Not(Box<LtlExpr>),
    And(Box<LtlExpr>, Box<LtlExpr>),
    Or(Box<LtlExpr>, Box<LtlExpr>),
    Implies(Box<LtlExpr>, Box<LtlExpr>),
    Iff(Box<LtlExpr>, Box<LtlExpr>),
    /// Only produced by negating `Iff` during NNF conversion.
    Xor(Box<LtlExpr>, Box<LtlExpr>),
    Next(Box<LtlExpr>),
    Until(Box<LtlExpr>, Box<LtlExpr>),
    Release(Box<LtlExpr>, Box<LtlExpr>),
    Globally(Box<LtlExpr>),
    Finally(Box<LtlExpr>),
}

impl LtlExpr {
    pub fn prop(var: &str, tid: &str) -> Self {
        LtlExpr::Prop { var: var.into(), tid: tid.into(), loc: Loc::default() }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: LtlExpr) -> Self {
        LtlExpr::Not(Box::new(e))
    }

    pub fn and(a: LtlExpr, b: LtlExpr) -> Self {
        LtlExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: LtlExpr, b: LtlExpr) -> Self {
        LtlExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn iff(a: LtlExpr, b: LtlExpr) -> Self {
        LtlExpr::Iff(Box::new(a), Box::new(b))
    }

    pub fn until(a: LtlExpr, b: LtlExpr) -> Self {
        LtlExpr::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: LtlExpr, b: LtlExpr) -> Self {
        LtlExpr::Release(Box::new(a), Box::new(b))
    }

    pub fn next(a: LtlExpr) -> Self {
        LtlExpr::Next(Box::new(a))
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&LtlExpr> {
        use LtlExpr::*;
        match self {
            True | False | Prop { .. } | Cmp { .. } => vec![],
            Not(a) | Next(a) | Globally(a) | Finally(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Xor(a, b) | Until(a, b) | Release(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Trace ids referenced anywhere in the expression, sorted.
    pub fn tids(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_tids(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_tids(&self, out: &mut Vec<String>) {
        match self {
            LtlExpr::Prop { tid, .. } => out.push(tid.clone()),
            LtlExpr::Cmp { lhs, rhs, .. } => {
                for o in [lhs, rhs] {
                    if let Operand::Var { tid, .. } = o {
                        out.push(tid.clone());
                    }
                }
            }
            e => e.children().into_iter().for_each(|c| c.collect_tids(out)),
        }
    }

    pub fn is_temporal_free(&self) -> bool {
        match self {
            LtlExpr::Next(_)
            | LtlExpr::Until(..)
            | LtlExpr::Release(..)
            | LtlExpr::Globally(_)
            | LtlExpr::Finally(_) => false,
            e => e.children().into_iter().all(LtlExpr::is_temporal_free),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(LtlExpr::size).sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperFormula {
    pub prefix: Vec<(Quant, TraceVar)>,
    pub body: LtlExpr,
}

impl HyperFormula {
    pub fn tids(&self) -> impl Iterator<Item = &str> {
        self.prefix.iter().map(|(_, t)| t.tid.as_str())
    }

    pub fn position(&self, tid: &str) -> Option<usize> {
        self.prefix.iter().position(|(_, t)| t.tid == tid)
    }

    pub fn quantifiers(&self) -> Vec<Quant> {
        self.prefix.iter().map(|(q, _)| *q).collect()
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Var { var, tid } => write!(f, "{var}[{tid}]"),
            Operand::Const(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for LtlExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use LtlExpr::*;
        match self {
            True => write!(f, "TRUE"),
            False => write!(f, "FALSE"),
            Prop { var, tid, .. } => write!(f, "{var}[{tid}]"),
            Cmp { op, lhs, rhs, .. } => {
                let op = if *op == CmpOp::Eq { "=" } else { "!=" };
                write!(f, "*{lhs} {op} {rhs}*")
            }
            Not(a) => write!(f, "!{a}"),
            Next(a) => write!(f, "X {a}"),
            Globally(a) => write!(f, "G {a}"),
            Finally(a) => write!(f, "F {a}"),
            And(a, b) => write!(f, "({a} /\\ {b})"),
            Or(a, b) => write!(f, "({a} \\/ {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            Iff(a, b) => write!(f, "({a} <-> {b})"),
            // no concrete syntax for xor; print its definition
            Xor(a, b) => write!(f, "!({a} <-> {b})"),
            Until(a, b) => write!(f, "({a} U {b})"),
            Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

impl fmt::Display for HyperFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, t) in &self.prefix {
            write!(f, "{} {}. ", q.keyword(), t.tid)?;
        }
        write!(f, "{}", self.body)
    }
}
