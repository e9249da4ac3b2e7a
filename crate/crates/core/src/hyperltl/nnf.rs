//! Negation normal form.
//!
//! In NNF, `Not` wraps only `Prop`; comparisons absorb negation by flipping
//! `=`/`!=`; `G`/`F` and `->` are gone; `<->` and its dual `Xor` stay as
//! connectives since expanding them would duplicate operands.

use super::ast::{HyperFormula, LtlExpr};

fn bx(e: LtlExpr) -> Box<LtlExpr> {
    Box::new(e)
}

/// NNF of `e`.
pub fn nnf(e: &LtlExpr) -> LtlExpr {
    use LtlExpr::*;
    match e {
        True | False | Prop { .. } | Cmp { .. } => e.clone(),
        Not(a) => dual(&nnf(a)),
        And(a, b) => And(bx(nnf(a)), bx(nnf(b))),
        Or(a, b) => Or(bx(nnf(a)), bx(nnf(b))),
        Implies(a, b) => Or(bx(dual(&nnf(a))), bx(nnf(b))),
        Iff(a, b) => Iff(bx(nnf(a)), bx(nnf(b))),
        Xor(a, b) => Xor(bx(nnf(a)), bx(nnf(b))),
        Next(a) => Next(bx(nnf(a))),
        Until(a, b) => Until(bx(nnf(a)), bx(nnf(b))),
        Release(a, b) => Release(bx(nnf(a)), bx(nnf(b))),
        Globally(a) => Release(bx(False), bx(nnf(a))),
        Finally(a) => Until(bx(True), bx(nnf(a))),
    }
}

/// NNF of `¬e`, for `e` already in NNF.
pub fn dual(e: &LtlExpr) -> LtlExpr {
    use LtlExpr::*;
    match e {
        True => False,
        False => True,
        Prop { .. } => Not(bx(e.clone())),
        Not(a) => (**a).clone(),
        Cmp { op, lhs, rhs, loc } => Cmp { op: op.flip(), lhs: lhs.clone(), rhs: rhs.clone(), loc: *loc },
        And(a, b) => Or(bx(dual(a)), bx(dual(b))),
        Or(a, b) => And(bx(dual(a)), bx(dual(b))),
        Iff(a, b) => Xor(a.clone(), b.clone()),
        Xor(a, b) => Iff(a.clone(), b.clone()),
        Next(a) => Next(bx(dual(a))),
        Until(a, b) => Release(bx(dual(a)), bx(dual(b))),
        Release(a, b) => Until(bx(dual(a)), bx(dual(b))),
        Implies(..) | Globally(_) | Finally(_) => dual(&nnf(e)),
    }
}

pub fn is_nnf(e: &LtlExpr) -> bool {
    use LtlExpr::*;
    match e {
        Not(a) => matches!(**a, Prop { .. }),
        Implies(..) | Globally(_) | Finally(_) => false,
        e => e.children().into_iter().all(is_nnf),
    }
}

/// Same prefix, body in NNF.
pub fn to_nnf(f: &HyperFormula) -> HyperFormula {
    HyperFormula { prefix: f.prefix.clone(), body: nnf(&f.body) }
}

/// Every quantifier flipped and the body negated, in NNF.
pub fn negate(f: &HyperFormula) -> HyperFormula {
    HyperFormula { prefix: f.prefix.iter().map(|(q, t)| (q.flip(), t.clone())).collect(), body: dual(&nnf(&f.body)) }
}
