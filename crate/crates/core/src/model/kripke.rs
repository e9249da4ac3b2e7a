use std::collections::HashSet;

use serde::Serialize;

use super::{Atom, BoolExpr, ModelError, MAX_RANGE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum VarKind {
    Boolean,
    Range { lo: u64, hi: u64 },
}

/// A declared state variable and its bit width.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VarDecl {
    name: String,
    kind: VarKind,
    bit_count: u32,
}

impl VarDecl {
    pub fn boolean(name: impl Into<String>) -> Self {
        VarDecl { name: name.into(), kind: VarKind::Boolean, bit_count: 1 }
    }

    /// `lo..hi` with `0 <= lo < hi < 2^30`; width is `ceil(log2(hi + 1))`.
    pub fn range(name: impl Into<String>, lo: i64, hi: i64) -> Result<Self, ModelError> {
        let name = name.into();
        if lo < 0 || hi <= lo {
            return Err(ModelError::BadRange { name, lo, hi });
        }
        if hi as u64 >= MAX_RANGE {
            return Err(ModelError::RangeTooLarge { name, hi });
        }
        let bit_count = 64 - (hi as u64).leading_zeros();
        Ok(VarDecl { name, kind: VarKind::Range { lo: lo as u64, hi: hi as u64 }, bit_count })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn bit_count(&self) -> u32 {
        self.bit_count
    }

    pub fn is_boolean(&self) -> bool {
        matches!(self.kind, VarKind::Boolean)
    }

    pub fn lo(&self) -> u64 {
        match self.kind {
            VarKind::Boolean => 0,
            VarKind::Range { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> u64 {
        match self.kind {
            VarKind::Boolean => 1,
            VarKind::Range { hi, .. } => hi,
        }
    }

    pub fn contains(&self, value: i64) -> bool {
        value >= self.lo() as i64 && value <= self.hi() as i64
    }

    /// Number of admissible values.
    pub fn domain_size(&self) -> u64 {
        self.hi() - self.lo() + 1
    }

    /// Atom for bit `bit` (0 = least significant).
    pub fn atom(&self, bit: u32, primed: bool) -> Atom {
        debug_assert!(bit < self.bit_count);
        let atom = match self.kind {
            VarKind::Boolean => Atom::boolean(self.name.clone()),
            VarKind::Range { .. } => Atom::range_bit(self.name.clone(), bit),
        };
        atom.with_primed(primed)
    }

    /// All atoms of this variable, most significant first.
    pub fn atoms(&self, primed: bool) -> Vec<Atom> {
        (0..self.bit_count).rev().map(|b| self.atom(b, primed)).collect()
    }

    /// Constraint `lo <= value <= hi`; `True` when every bit pattern is admissible.
    pub fn domain_constraint(&self, primed: bool) -> BoolExpr {
        let VarKind::Range { lo, hi } = self.kind else {
            return BoolExpr::True;
        };
        let bits: Vec<BoolExpr> = self.atoms(primed).into_iter().map(BoolExpr::atom).collect();
        let top = (1u64 << self.bit_count) - 1;
        let upper = if hi == top { BoolExpr::True } else { bits_le_const(&bits, hi, self.bit_count) };
        let lower = if lo == 0 { BoolExpr::True } else { bits_ge_const(&bits, lo, self.bit_count) };
        BoolExpr::and([lower, upper])
    }
}

// `bits` is MSB-first with width `width`.
fn bits_le_const(bits: &[BoolExpr], c: u64, width: u32) -> BoolExpr {
    let Some((head, rest)) = bits.split_first() else {
        return BoolExpr::True;
    };
    let pos = width - 1;
    let tail = bits_le_const(rest, c, pos);
    if c >> pos & 1 == 1 {
        BoolExpr::or([BoolExpr::not(head.clone()), tail])
    } else {
        BoolExpr::and([BoolExpr::not(head.clone()), tail])
    }
}

fn bits_ge_const(bits: &[BoolExpr], c: u64, width: u32) -> BoolExpr {
    let Some((head, rest)) = bits.split_first() else {
        return BoolExpr::True;
    };
    let pos = width - 1;
    let tail = bits_ge_const(rest, c, pos);
    if c >> pos & 1 == 1 {
        BoolExpr::and([head.clone(), tail])
    } else {
        BoolExpr::or([head.clone(), tail])
    }
}

/// The atoms representing `decl`, most significant bit first.
pub fn bit_blast(decl: &VarDecl) -> Result<Vec<Atom>, ModelError> {
    if decl.hi() >= MAX_RANGE {
        return Err(ModelError::RangeTooLarge { name: decl.name.clone(), hi: decl.hi() as i64 });
    }
    Ok(decl.atoms(false))
}

/// Conjunction of bit literals characterising `value`.
pub fn encode_value(decl: &VarDecl, value: i64) -> Result<BoolExpr, ModelError> {
    encode_value_at(decl, value, false)
}

pub(crate) fn encode_value_at(decl: &VarDecl, value: i64, primed: bool) -> Result<BoolExpr, ModelError> {
    if !decl.contains(value) {
        return Err(ModelError::ValueOutOfBound {
            name: decl.name.clone(),
            value,
            lo: decl.lo() as i64,
            hi: decl.hi() as i64,
        });
    }
    let v = value as u64;
    Ok(BoolExpr::and((0..decl.bit_count).rev().map(|b| BoolExpr::literal(decl.atom(b, primed), v >> b & 1 == 1))))
}

/// Reassembles an integer from MSB-first bits.
pub fn decode_value(bits: &[bool]) -> u64 {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as u64)
}

/// Symbolic transition system `<vars, init, trans>`.
///
/// `init` ranges over current-state atoms; `trans` over current and next
/// (primed) atoms. Domain constraints for ranged variables are not stored in
/// `init`/`trans`; use [`SymbolicKripke::init_constraint`] and
/// [`SymbolicKripke::trans_constraint`] to get the effective predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicKripke {
    name: String,
    vars: Vec<VarDecl>,
    init: BoolExpr,
    trans: BoolExpr,
    halt_var: Option<String>,
}

impl SymbolicKripke {
    pub fn new(
        name: impl Into<String>,
        vars: Vec<VarDecl>,
        init: BoolExpr,
        trans: BoolExpr,
        halt_var: Option<String>,
    ) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        for v in &vars {
            if !seen.insert(v.name.as_str()) {
                return Err(ModelError::DuplicateVar(v.name.clone()));
            }
        }
        let model = SymbolicKripke { name: name.into(), vars, init, trans, halt_var };
        for atom in model.init.atoms() {
            if atom.primed {
                return Err(ModelError::PrimedInInit(atom.to_string()));
            }
            model.check_atom(&atom)?;
        }
        for atom in model.trans.atoms() {
            model.check_atom(&atom)?;
        }
        if let Some(h) = &model.halt_var {
            match model.var(h) {
                Some(d) if d.is_boolean() => {}
                _ => return Err(ModelError::BadHaltVar(h.clone())),
            }
        }
        Ok(model)
    }

    fn check_atom(&self, atom: &Atom) -> Result<(), ModelError> {
        match self.var(&atom.var) {
            Some(d) if atom.bit < d.bit_count && atom.ranged == !d.is_boolean() => Ok(()),
            _ => Err(ModelError::UnknownAtom(atom.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn var(&self, name: &str) -> Option<&VarDecl> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn init(&self) -> &BoolExpr {
        &self.init
    }

    pub fn trans(&self) -> &BoolExpr {
        &self.trans
    }

    pub fn halt_var(&self) -> Option<&str> {
        self.halt_var.as_deref()
    }

    /// All state atoms in layout order: declaration order, MSB first.
    pub fn state_atoms(&self, primed: bool) -> Vec<Atom> {
        self.vars.iter().flat_map(|v| v.atoms(primed)).collect()
    }

    /// Total number of state bits.
    pub fn state_width(&self) -> usize {
        self.vars.iter().map(|v| v.bit_count as usize).sum()
    }

    pub fn domain_constraint(&self, primed: bool) -> BoolExpr {
        BoolExpr::and(self.vars.iter().map(|v| v.domain_constraint(primed)))
    }

    /// `init` conjoined with the domain constraint.
    pub fn init_constraint(&self) -> BoolExpr {
        BoolExpr::and([self.init.clone(), self.domain_constraint(false)])
    }

    /// `trans` conjoined with the domain constraints of both states.
    pub fn trans_constraint(&self) -> BoolExpr {
        BoolExpr::and([self.trans.clone(), self.domain_constraint(false), self.domain_constraint(true)])
    }

    /// Splits a layout-ordered bit vector into per-variable integer values.
    pub fn decode_state(&self, bits: &[bool]) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.vars.len());
        let mut off = 0;
        for v in &self.vars {
            let w = v.bit_count as usize;
            out.push(decode_value(&bits[off..off + w]));
            off += w;
        }
        out
    }

    /// Inverse of [`SymbolicKripke::decode_state`].
    pub fn encode_state(&self, values: &[u64]) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.state_width());
        for (v, &val) in self.vars.iter().zip(values) {
            for b in (0..v.bit_count).rev() {
                out.push(val >> b & 1 == 1);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::eval;
    use std::collections::HashMap;

    fn decl_pc() -> VarDecl {
        VarDecl::range("PC", 1, 3).unwrap()
    }

    #[test]
    fn pc_blasts_to_two_bits_msb_first() {
        let atoms = bit_blast(&decl_pc()).unwrap();
        let names: Vec<String> = atoms.iter().map(Atom::name).collect();
        assert_eq!(names, ["PC_1", "PC_0"]);
    }

    #[test]
    fn pc_value_one_is_not_pc1_and_pc0() {
        let e = encode_value(&decl_pc(), 1).unwrap();
        assert_eq!(e.to_string(), "(!PC_1 & PC_0)");
    }

    #[test]
    fn boolean_is_its_own_bit() {
        let b = VarDecl::boolean("b");
        assert_eq!(bit_blast(&b).unwrap(), vec![Atom::boolean("b")]);
        assert_eq!(encode_value(&b, 1).unwrap(), BoolExpr::atom(Atom::boolean("b")));
    }

    // Independent binary expansion: repeated division by two.
    fn binary_digits_msb_first(mut v: u64, width: u32) -> Vec<bool> {
        let mut digits = Vec::new();
        for _ in 0..width {
            digits.push(v % 2 == 1);
            v /= 2;
        }
        digits.reverse();
        digits
    }

    #[test]
    fn n_range_values() {
        let n = VarDecl::range("n", 0, 7).unwrap();
        assert_eq!(bit_blast(&n).unwrap().len(), 3);
        assert_eq!(binary_digits_msb_first(5, 3), [true, false, true]);
        assert_eq!(encode_value(&n, 5).unwrap().to_string(), "(n_2 & !n_1 & n_0)");
        assert_eq!(binary_digits_msb_first(6, 3), [true, true, false]);
        assert_eq!(encode_value(&n, 6).unwrap().to_string(), "(n_2 & n_1 & !n_0)");
    }

    #[test]
    fn encode_decode_identity_exhaustive() {
        for hi in 1..=255i64 {
            for lo in [0, 1, hi / 2, hi - 1] {
                if lo >= hi {
                    continue;
                }
                let d = VarDecl::range("v", lo, hi).unwrap();
                assert_eq!(
                    d.bit_count(),
                    binary_digits_msb_first(hi as u64, 9).iter().skip_while(|b| !**b).count() as u32
                );
                for v in lo..=hi {
                    let e = encode_value(&d, v).unwrap();
                    let bits: Vec<bool> = d
                        .atoms(false)
                        .iter()
                        .map(|a| {
                            let asg: HashMap<Atom, bool> = d
                                .atoms(false)
                                .iter()
                                .zip(binary_digits_msb_first(v as u64, d.bit_count()))
                                .map(|(a, b)| (a.clone(), b))
                                .collect();
                            assert!(eval(&e, &asg).unwrap());
                            asg[a]
                        })
                        .collect();
                    assert_eq!(decode_value(&bits), v as u64);
                }
            }
        }
    }

    #[test]
    fn out_of_range_value_rejected() {
        let err = encode_value(&decl_pc(), 10).unwrap_err();
        assert!(err.to_string().contains("value out of bound"));
        assert!(encode_value(&decl_pc(), 0).is_err());
    }

    #[test]
    fn huge_range_rejected() {
        assert!(matches!(VarDecl::range("big", 0, 1 << 30), Err(ModelError::RangeTooLarge { .. })));
        assert!(VarDecl::range("ok", 0, (1 << 30) - 1).is_ok());
        assert!(VarDecl::range("neg", -1, 3).is_err());
        assert!(VarDecl::range("empty", 3, 3).is_err());
    }

    #[test]
    fn domain_constraint_admits_exactly_the_range() {
        for (lo, hi) in [(1, 3), (0, 5), (2, 6), (3, 4), (0, 7), (5, 12)] {
            let d = VarDecl::range("x", lo, hi).unwrap();
            let c = d.domain_constraint(false);
            for v in 0..(1u64 << d.bit_count()) {
                let asg: HashMap<Atom, bool> =
                    d.atoms(false).into_iter().zip(binary_digits_msb_first(v, d.bit_count())).collect();
                assert_eq!(eval(&c, &asg).unwrap(), v as i64 >= lo && v as i64 <= hi, "{lo}..{hi} at {v}");
            }
        }
    }

    #[test]
    fn kripke_validation() {
        let b = VarDecl::boolean("b");
        let primed = BoolExpr::atom(Atom::boolean("b").with_primed(true));
        assert!(matches!(
            SymbolicKripke::new("m", vec![b.clone()], primed.clone(), BoolExpr::True, None),
            Err(ModelError::PrimedInInit(_))
        ));
        assert!(matches!(
            SymbolicKripke::new("m", vec![b.clone(), b.clone()], BoolExpr::True, BoolExpr::True, None),
            Err(ModelError::DuplicateVar(_))
        ));
        assert!(matches!(
            SymbolicKripke::new("m", vec![b.clone()], BoolExpr::atom(Atom::boolean("c")), BoolExpr::True, None),
            Err(ModelError::UnknownAtom(_))
        ));
        assert!(matches!(
            SymbolicKripke::new("m", vec![decl_pc()], BoolExpr::True, BoolExpr::True, Some("PC".into())),
            Err(ModelError::BadHaltVar(_))
        ));
        assert!(SymbolicKripke::new("m", vec![b], BoolExpr::True, primed, Some("b".into())).is_ok());
    }
}
