use super::ast::{HyperFormula, Loc, LtlExpr, Operand};
use super::{HqError, HqErrorKind};
use crate::model::SymbolicKripke;

/// Checks `f` against the models bound positionally to its prefix.
///
/// Reports the first of: arity mismatch, undefined variable, a boolean
/// operator on an integer variable, a comparison on a boolean variable, or a
/// literal outside the compared variable's range.
pub fn typecheck(f: &HyperFormula, models: &[&SymbolicKripke]) -> Result<(), HqError> {
    if models.len() != f.prefix.len() {
        return Err(HqError {
            loc: Loc::default(),
            kind: HqErrorKind::Arity { models: models.len(), quantifiers: f.prefix.len() },
        });
    }
    check(&f.body, f, models)
}

fn model_for<'a>(
    f: &HyperFormula,
    models: &[&'a SymbolicKripke],
    tid: &str,
    loc: Loc,
) -> Result<&'a SymbolicKripke, HqError> {
    f.position(tid).map(|i| models[i]).ok_or_else(|| HqError { loc, kind: HqErrorKind::UnboundTid(tid.to_string()) })
}

fn check(e: &LtlExpr, f: &HyperFormula, models: &[&SymbolicKripke]) -> Result<(), HqError> {
    match e {
        LtlExpr::Prop { var, tid, loc } => {
            let m = model_for(f, models, tid, *loc)?;
            let d = m.var(var).ok_or_else(|| undefined(var, tid, m, *loc))?;
            if !d.is_boolean() {
                return Err(HqError {
                    loc: *loc,
                    kind: HqErrorKind::Type(format!(
                        "`{var}[{tid}]` is an integer; boolean and temporal operators need booleans (compare it with *{var}[{tid}] = ...*)"
                    )),
                });
            }
            Ok(())
        }
        LtlExpr::Cmp { lhs, rhs, loc, .. } => {
            let mut ranges = Vec::new();
            for o in [lhs, rhs] {
                if let Operand::Var { var, tid } = o {
                    let m = model_for(f, models, tid, *loc)?;
                    let d = m.var(var).ok_or_else(|| undefined(var, tid, m, *loc))?;
                    if d.is_boolean() {
                        return Err(HqError {
                            loc: *loc,
                            kind: HqErrorKind::Type(format!(
                                "`{var}[{tid}]` is boolean; arithmetic comparison needs integers"
                            )),
                        });
                    }
                    ranges.push((format!("{var}[{tid}]"), d.lo() as i64, d.hi() as i64));
                }
            }
            for (o, other) in [(lhs, rhs), (rhs, lhs)] {
                if let (Operand::Const(c), Operand::Var { .. }) = (o, other) {
                    let (name, lo, hi) = &ranges[0];
                    if c < lo || c > hi {
                        return Err(HqError {
                            loc: *loc,
                            kind: HqErrorKind::OutOfBound(format!(
                                "value out of bound: {c} not in {lo}..{hi} for `{name}`"
                            )),
                        });
                    }
                }
            }
            Ok(())
        }
        e => e.children().into_iter().try_for_each(|c| check(c, f, models)),
    }
}

fn undefined(var: &str, tid: &str, m: &SymbolicKripke, loc: Loc) -> HqError {
    HqError {
        loc,
        kind: HqErrorKind::Undefined(format!("`{var}` is not defined in model `{}` bound to {tid}", m.name())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperltl::parse_formula;
    use crate::smv::parse_model;

    fn kexp() -> SymbolicKripke {
        parse_model(
            "MODULE main VAR low: boolean; high: boolean; halt: boolean; PC: 1..3; ASSIGN init(PC) := 1;",
            "k_exp.smv",
        )
        .unwrap()
    }

    fn tc(src: &str, n: usize) -> Result<(), HqError> {
        let k = kexp();
        let models = vec![&k; n];
        typecheck(&parse_formula(src).unwrap(), &models)
    }

    #[test]
    fn gni_against_three_copies() {
        tc("forall A. forall B. exists C. X(high[A] <-> high[C]) /\\ G(low[B] <-> low[C])", 3).unwrap();
    }

    #[test]
    fn ill_typed_examples_rejected() {
        let e = tc("forall A. forall B. (PC[A] ∧ halt[B])", 2).unwrap_err();
        assert!(matches!(e.kind, HqErrorKind::Type(_)));
        let e = tc("forall A. forall B. (*PC[A] = halt[B]*)", 2).unwrap_err();
        assert!(matches!(e.kind, HqErrorKind::Type(_)));
    }

    #[test]
    fn out_of_bound_literal() {
        let e = tc("forall A. (*PC[A] = 10*)", 1).unwrap_err();
        assert!(e.to_string().contains("value out of bound"));
        tc("forall A. (*3 = PC[A]*)", 1).unwrap();
        assert!(tc("forall A. (*0 = PC[A]*)", 1).is_err());
    }

    #[test]
    fn undefined_variable() {
        let e = tc("forall A. G undefined[A]", 1).unwrap_err();
        assert!(matches!(e.kind, HqErrorKind::Undefined(_)));
        assert_eq!((e.loc.line, e.loc.col), (1, 13));
    }

    #[test]
    fn arity() {
        let e = tc("forall A. forall B. *PC[A] = PC[B]*", 1).unwrap_err();
        assert!(matches!(e.kind, HqErrorKind::Arity { models: 1, quantifiers: 2 }));
        tc("forall A. forall B. *PC[A] = PC[B]*", 2).unwrap();
    }
}
