//! Two's-complement bit vectors over [`BoolExpr`] with exact interval tracking.
//!
//! Widths are chosen so that every value in the tracked interval fits, which
//! makes `+` and `-` wraparound-free.

use crate::model::{BoolExpr, VarDecl};

#[derive(Clone, Debug)]
pub struct BitVec {
    /// Least significant bit first; the last bit is the sign.
    pub bits: Vec<BoolExpr>,
    pub lo: i64,
    pub hi: i64,
}

/// Smallest two's-complement width holding every value in `lo..=hi`.
pub fn width_for(lo: i64, hi: i64) -> usize {
    let mut w = 1;
    while !(-(1i64 << (w - 1)) <= lo && hi < (1i64 << (w - 1))) {
        w += 1;
    }
    w
}

impl BitVec {
    pub fn constant(v: i64) -> Self {
        let w = width_for(v, v);
        BitVec { bits: (0..w).map(|i| BoolExpr::constant(v >> i & 1 == 1)).collect(), lo: v, hi: v }
    }

    /// The bits of a ranged variable plus a zero sign bit.
    pub fn var(decl: &VarDecl, primed: bool) -> Self {
        let mut bits: Vec<BoolExpr> = (0..decl.bit_count()).map(|b| BoolExpr::atom(decl.atom(b, primed))).collect();
        bits.push(BoolExpr::False);
        BitVec { bits, lo: decl.lo() as i64, hi: decl.hi() as i64 }
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn as_const(&self) -> Option<i64> {
        (self.lo == self.hi).then_some(self.lo)
    }

    fn extend(&self, w: usize) -> Vec<BoolExpr> {
        let mut bits = self.bits.clone();
        let sign = bits.last().cloned().unwrap_or(BoolExpr::False);
        while bits.len() < w {
            bits.push(sign.clone());
        }
        bits
    }

    fn adder(a: &[BoolExpr], b: &[BoolExpr], carry_in: bool) -> Vec<BoolExpr> {
        let mut carry = BoolExpr::constant(carry_in);
        let mut out = Vec::with_capacity(a.len());
        for (x, y) in a.iter().zip(b) {
            let xy = BoolExpr::xor(x.clone(), y.clone());
            out.push(BoolExpr::xor(xy.clone(), carry.clone()));
            carry = BoolExpr::or([BoolExpr::and([x.clone(), y.clone()]), BoolExpr::and([xy, carry])]);
        }
        out
    }

    pub fn add(&self, other: &BitVec) -> BitVec {
        let (lo, hi) = (self.lo + other.lo, self.hi + other.hi);
        if lo == hi {
            return BitVec::constant(lo);
        }
        let w = width_for(lo, hi).max(self.width()).max(other.width());
        let bits = Self::adder(&self.extend(w), &other.extend(w), false);
        BitVec { bits, lo, hi }
    }

    pub fn sub(&self, other: &BitVec) -> BitVec {
        let (lo, hi) = (self.lo - other.hi, self.hi - other.lo);
        if lo == hi {
            return BitVec::constant(lo);
        }
        let w = width_for(lo, hi).max(self.width()).max(other.width());
        let neg: Vec<BoolExpr> = other.extend(w).into_iter().map(BoolExpr::not).collect();
        let bits = Self::adder(&self.extend(w), &neg, true);
        BitVec { bits, lo, hi }
    }

    pub fn eq(&self, other: &BitVec) -> BoolExpr {
        if self.hi < other.lo || other.hi < self.lo {
            return BoolExpr::False;
        }
        let w = self.width().max(other.width());
        // most significant bit first, matching the state encoding
        BoolExpr::and(
            self.extend(w).into_iter().zip(other.extend(w)).rev().map(|(a, b)| BoolExpr::iff(a, b)).collect::<Vec<_>>(),
        )
    }

    /// `self < other`, via the sign of the exact difference.
    pub fn lt(&self, other: &BitVec) -> BoolExpr {
        if self.hi < other.lo {
            return BoolExpr::True;
        }
        if self.lo >= other.hi {
            return BoolExpr::False;
        }
        let d = self.sub(other);
        d.bits.last().cloned().unwrap()
    }
}
