use std::collections::HashMap;
use std::fmt;

use super::ModelError;

/// One Boolean bit of a model variable, in the current or the next state.
///
/// Booleans have a single bit `0`; ranged integers use bits `0..bit_count`
/// with bit `bit_count - 1` the most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub var: String,
    pub bit: u32,
    pub primed: bool,
    /// Set for bits of ranged variables; only affects the printed name.
    pub ranged: bool,
}

impl Atom {
    /// The single bit of a Boolean variable.
    pub fn boolean(var: impl Into<String>) -> Self {
        Atom { var: var.into(), bit: 0, primed: false, ranged: false }
    }

    /// Bit `bit` of a ranged variable.
    pub fn range_bit(var: impl Into<String>, bit: u32) -> Self {
        Atom { var: var.into(), bit, primed: false, ranged: true }
    }

    pub fn with_primed(&self, primed: bool) -> Self {
        Atom { primed, ..self.clone() }
    }

    /// `b` for Booleans, `PC_1` for bit 1 of a ranged `PC`.
    pub fn name(&self) -> String {
        if self.ranged {
            format!("{}_{}", self.var, self.bit)
        } else {
            self.var.clone()
        }
    }
}

/// Total (or partial) valuation of atoms.
pub type Assignment = HashMap<Atom, bool>;

/// Propositional formula over [`Atom`]s.
///
/// Prefer the smart constructors ([`BoolExpr::and`], [`BoolExpr::or`], ...):
/// they fold constants and never build empty `And`/`Or` lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    True,
    False,
    Atom(Atom),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
    Implies(Box<BoolExpr>, Box<BoolExpr>),
    Iff(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn constant(value: bool) -> Self {
        if value {
            BoolExpr::True
        } else {
            BoolExpr::False
        }
    }

    pub fn atom(atom: Atom) -> Self {
        BoolExpr::Atom(atom)
    }

    pub fn literal(atom: Atom, positive: bool) -> Self {
        if positive {
            BoolExpr::Atom(atom)
        } else {
            BoolExpr::Not(Box::new(BoolExpr::Atom(atom)))
        }
    }

    pub fn as_const(&self) -> Option<bool> {
        match self {
            BoolExpr::True => Some(true),
            BoolExpr::False => Some(false),
            _ => None,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: BoolExpr) -> Self {
        match e {
            BoolExpr::True => BoolExpr::False,
            BoolExpr::False => BoolExpr::True,
            BoolExpr::Not(inner) => *inner,
            other => BoolExpr::Not(Box::new(other)),
        }
    }

    pub fn and(items: impl IntoIterator<Item = BoolExpr>) -> Self {
        let mut out = Vec::new();
        for item in items {
            match item {
                BoolExpr::True => {}
                BoolExpr::False => return BoolExpr::False,
                BoolExpr::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => BoolExpr::True,
            1 => out.pop().unwrap(),
            _ => BoolExpr::And(out),
        }
    }

    pub fn or(items: impl IntoIterator<Item = BoolExpr>) -> Self {
        let mut out = Vec::new();
        for item in items {
            match item {
                BoolExpr::False => {}
                BoolExpr::True => return BoolExpr::True,
                BoolExpr::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => BoolExpr::False,
            1 => out.pop().unwrap(),
            _ => BoolExpr::Or(out),
        }
    }

    pub fn implies(lhs: BoolExpr, rhs: BoolExpr) -> Self {
        match (lhs.as_const(), rhs.as_const()) {
            (Some(false), _) | (_, Some(true)) => BoolExpr::True,
            (Some(true), _) => rhs,
            (_, Some(false)) => BoolExpr::not(lhs),
            _ => BoolExpr::Implies(Box::new(lhs), Box::new(rhs)),
        }
    }

    pub fn iff(lhs: BoolExpr, rhs: BoolExpr) -> Self {
        match (lhs.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => BoolExpr::constant(a == b),
            (Some(true), _) => rhs,
            (Some(false), _) => BoolExpr::not(rhs),
            (_, Some(true)) => lhs,
            (_, Some(false)) => BoolExpr::not(lhs),
            _ => BoolExpr::Iff(Box::new(lhs), Box::new(rhs)),
        }
    }

    pub fn xor(lhs: BoolExpr, rhs: BoolExpr) -> Self {
        BoolExpr::not(BoolExpr::iff(lhs, rhs))
    }

    /// `if cond then a else b`.
    pub fn ite(cond: BoolExpr, then: BoolExpr, otherwise: BoolExpr) -> Self {
        match cond.as_const() {
            Some(true) => then,
            Some(false) => otherwise,
            None => {
                BoolExpr::or([BoolExpr::and([cond.clone(), then]), BoolExpr::and([BoolExpr::not(cond), otherwise])])
            }
        }
    }

    /// Visits every atom occurrence.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            BoolExpr::True | BoolExpr::False => {}
            BoolExpr::Atom(a) => f(a),
            BoolExpr::Not(e) => e.for_each_atom(f),
            BoolExpr::And(es) | BoolExpr::Or(es) => es.iter().for_each(|e| e.for_each_atom(f)),
            BoolExpr::Implies(a, b) | BoolExpr::Iff(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
        }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.for_each_atom(&mut |a| out.push(a.clone()));
        out.sort();
        out.dedup();
        out
    }

    /// Rewrites every atom through `f`.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> BoolExpr) -> BoolExpr {
        match self {
            BoolExpr::True => BoolExpr::True,
            BoolExpr::False => BoolExpr::False,
            BoolExpr::Atom(a) => f(a),
            BoolExpr::Not(e) => BoolExpr::not(e.map_atoms(f)),
            BoolExpr::And(es) => BoolExpr::and(es.iter().map(|e| e.map_atoms(f)).collect::<Vec<_>>()),
            BoolExpr::Or(es) => BoolExpr::or(es.iter().map(|e| e.map_atoms(f)).collect::<Vec<_>>()),
            BoolExpr::Implies(a, b) => BoolExpr::implies(a.map_atoms(f), b.map_atoms(f)),
            BoolExpr::Iff(a, b) => BoolExpr::iff(a.map_atoms(f), b.map_atoms(f)),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            BoolExpr::True | BoolExpr::False | BoolExpr::Atom(_) => 1,
            BoolExpr::Not(e) => 1 + e.size(),
            BoolExpr::And(es) | BoolExpr::Or(es) => 1 + es.iter().map(BoolExpr::size).sum::<usize>(),
            BoolExpr::Implies(a, b) | BoolExpr::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// Evaluates `expr` under `assignment`; every atom of `expr` must be assigned.
pub fn eval(expr: &BoolExpr, assignment: &Assignment) -> Result<bool, ModelError> {
    eval_with(expr, &mut |a| assignment.get(a).copied())
}

/// Like [`eval`] but with a lookup closure.
pub fn eval_with(expr: &BoolExpr, lookup: &mut impl FnMut(&Atom) -> Option<bool>) -> Result<bool, ModelError> {
    Ok(match expr {
        BoolExpr::True => true,
        BoolExpr::False => false,
        BoolExpr::Atom(a) => lookup(a).ok_or_else(|| ModelError::MissingAtom(a.to_string()))?,
        BoolExpr::Not(e) => !eval_with(e, lookup)?,
        BoolExpr::And(es) => {
            // evaluate all children so missing atoms are always reported
            let mut value = true;
            for e in es {
                value &= eval_with(e, lookup)?;
            }
            value
        }
        BoolExpr::Or(es) => {
            let mut value = false;
            for e in es {
                value |= eval_with(e, lookup)?;
            }
            value
        }
        BoolExpr::Implies(a, b) => {
            let a = eval_with(a, lookup)?;
            let b = eval_with(b, lookup)?;
            !a || b
        }
        BoolExpr::Iff(a, b) => eval_with(a, lookup)? == eval_with(b, lookup)?,
    })
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name(), if self.primed { "'" } else { "" })
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, es: &[BoolExpr], op: &str) -> fmt::Result {
            write!(f, "(")?;
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, ")")
        }
        match self {
            BoolExpr::True => write!(f, "true"),
            BoolExpr::False => write!(f, "false"),
            BoolExpr::Atom(a) => write!(f, "{a}"),
            BoolExpr::Not(e) => write!(f, "!{e}"),
            BoolExpr::And(es) => join(f, es, "&"),
            BoolExpr::Or(es) => join(f, es, "|"),
            BoolExpr::Implies(a, b) => write!(f, "({a} -> {b})"),
            BoolExpr::Iff(a, b) => write!(f, "({a} <-> {b})"),
        }
    }
}
