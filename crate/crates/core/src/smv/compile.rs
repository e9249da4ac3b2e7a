use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::bitvec::BitVec;
use super::{Pos, SmvErrorKind};
use crate::model::{BoolExpr, SymbolicKripke, VarDecl};

type CResult<T> = Result<T, (SmvErrorKind, Pos)>;

enum Val {
    Bool(BoolExpr),
    Int(BitVec),
}

struct Ctx<'a> {
    decls: &'a HashMap<String, VarDecl>,
    allow_next: bool,
}

impl Ctx<'_> {
    fn decl(&self, name: &str, pos: Pos) -> CResult<&VarDecl> {
        self.decls.get(name).ok_or_else(|| (SmvErrorKind::Undeclared(name.to_string()), pos))
    }

    fn var(&self, name: &str, primed: bool, pos: Pos) -> CResult<Val> {
        let d = self.decl(name, pos)?;
        Ok(if d.is_boolean() { Val::Bool(BoolExpr::atom(d.atom(0, primed))) } else { Val::Int(BitVec::var(d, primed)) })
    }

    fn expr(&self, e: &Expr) -> CResult<Val> {
        Ok(match &e.kind {
            ExprKind::Bool(b) => Val::Bool(BoolExpr::constant(*b)),
            ExprKind::Int(n) => Val::Int(BitVec::constant(*n)),
            ExprKind::Var(v) => self.var(v, false, e.pos)?,
            ExprKind::Next(v) => {
                if !self.allow_next {
                    return Err((SmvErrorKind::Syntax(format!("next({v}) is not allowed here")), e.pos));
                }
                self.var(v, true, e.pos)?
            }
            ExprKind::Not(x) => Val::Bool(BoolExpr::not(self.boolean(x)?)),
            ExprKind::Bin(op, a, b) => match op {
                BinOp::And => Val::Bool(BoolExpr::and([self.boolean(a)?, self.boolean(b)?])),
                BinOp::Or => Val::Bool(BoolExpr::or([self.boolean(a)?, self.boolean(b)?])),
                BinOp::Implies => Val::Bool(BoolExpr::implies(self.boolean(a)?, self.boolean(b)?)),
                BinOp::Iff => Val::Bool(BoolExpr::iff(self.boolean(a)?, self.boolean(b)?)),
                BinOp::Eq | BinOp::Ne => {
                    let eq = match (self.expr(a)?, self.expr(b)?) {
                        (Val::Bool(x), Val::Bool(y)) => BoolExpr::iff(x, y),
                        (Val::Int(x), Val::Int(y)) => {
                            self.check_literal_against_var(a, b)?;
                            self.check_literal_against_var(b, a)?;
                            x.eq(&y)
                        }
                        _ => {
                            return Err((
                                SmvErrorKind::TypeMismatch(format!(
                                    "operands of `{}` must both be boolean or both be integer",
                                    op.symbol()
                                )),
                                e.pos,
                            ))
                        }
                    };
                    Val::Bool(if *op == BinOp::Eq { eq } else { BoolExpr::not(eq) })
                }
                BinOp::Lt => Val::Bool(self.int(a)?.lt(&self.int(b)?)),
                BinOp::Gt => Val::Bool(self.int(b)?.lt(&self.int(a)?)),
                BinOp::Le => Val::Bool(BoolExpr::not(self.int(b)?.lt(&self.int(a)?))),
                BinOp::Ge => Val::Bool(BoolExpr::not(self.int(a)?.lt(&self.int(b)?))),
                BinOp::Add => Val::Int(self.int(a)?.add(&self.int(b)?)),
                BinOp::Sub => Val::Int(self.int(a)?.sub(&self.int(b)?)),
            },
        })
    }

    /// `x = 7` with `x : 0..3` is a type error rather than a silent `FALSE`.
    fn check_literal_against_var(&self, lit: &Expr, var: &Expr) -> CResult<()> {
        let (ExprKind::Int(n), ExprKind::Var(v) | ExprKind::Next(v)) = (&lit.kind, &var.kind) else {
            return Ok(());
        };
        let d = self.decl(v, var.pos)?;
        if !d.contains(*n) {
            return Err((
                SmvErrorKind::OutOfRange(format!("value out of bound: {n} not in {}..{} for `{v}`", d.lo(), d.hi())),
                lit.pos,
            ));
        }
        Ok(())
    }

    fn boolean(&self, e: &Expr) -> CResult<BoolExpr> {
        match self.expr(e)? {
            Val::Bool(b) => Ok(b),
            Val::Int(_) => Err((SmvErrorKind::TypeMismatch("integer where boolean expected".into()), e.pos)),
        }
    }

    fn int(&self, e: &Expr) -> CResult<BitVec> {
        match self.expr(e)? {
            Val::Int(v) => Ok(v),
            Val::Bool(_) => Err((SmvErrorKind::TypeMismatch("boolean where integer expected".into()), e.pos)),
        }
    }

    /// Constraint that `target` takes (one of) the values of `rhs`.
    fn target(&self, decl: &VarDecl, primed: bool, rhs: &Rhs) -> CResult<BoolExpr> {
        match rhs {
            Rhs::Expr(e) => {
                if decl.is_boolean() {
                    let v = self.boolean(e)?;
                    Ok(BoolExpr::iff(BoolExpr::atom(decl.atom(0, primed)), v))
                } else {
                    let v = self.int(e).map_err(|(k, p)| match k {
                        SmvErrorKind::TypeMismatch(_) => (
                            SmvErrorKind::TypeMismatch(format!(
                                "boolean assigned to integer variable `{}`",
                                decl.name()
                            )),
                            p,
                        ),
                        k => (k, p),
                    })?;
                    if v.hi < decl.lo() as i64 || v.lo > decl.hi() as i64 {
                        let what = match v.as_const() {
                            Some(c) => format!("value {c}"),
                            None => format!("values {}..{}", v.lo, v.hi),
                        };
                        return Err((
                            SmvErrorKind::OutOfRange(format!(
                                "value out of bound: {what} never within {}..{} of `{}`",
                                decl.lo(),
                                decl.hi(),
                                decl.name()
                            )),
                            e.pos,
                        ));
                    }
                    // partial overlap: out-of-range results violate the domain constraint
                    Ok(BitVec::var(decl, primed).eq(&v))
                }
            }
            Rhs::Set(items, _) => {
                let mut alts = Vec::new();
                for item in items {
                    alts.push(self.target(decl, primed, &Rhs::Expr(item.clone()))?);
                }
                Ok(BoolExpr::or(alts))
            }
            Rhs::Case(arms, _) => {
                let mut acc = BoolExpr::False;
                for (guard, body) in arms.iter().rev() {
                    let g = self.boolean(guard)?;
                    let b = self.target(decl, primed, body)?;
                    acc = BoolExpr::ite(g, b, acc);
                }
                Ok(acc)
            }
        }
    }
}

pub fn compile(module: &SmvModule, name: &str) -> CResult<SymbolicKripke> {
    let mut decls = HashMap::new();
    let mut order = Vec::new();
    for v in &module.vars {
        let decl = match v.ty {
            TypeSpec::Boolean => VarDecl::boolean(&v.name),
            TypeSpec::Range(lo, hi) => VarDecl::range(&v.name, lo, hi).map_err(|e| (SmvErrorKind::Model(e), v.pos))?,
        };
        if decls.insert(v.name.clone(), decl.clone()).is_some() {
            return Err((SmvErrorKind::Duplicate(format!("variable `{}` declared twice", v.name)), v.pos));
        }
        order.push(decl);
    }

    let mut init = Vec::new();
    let mut trans = Vec::new();
    let mut assigned = HashSet::new();
    for a in &module.assigns {
        let ctx = Ctx { decls: &decls, allow_next: a.kind == AssignKind::Next };
        let decl = ctx.decl(&a.target, a.pos)?;
        if !assigned.insert((a.kind, a.target.clone())) {
            return Err((SmvErrorKind::Duplicate(format!("`{}` assigned twice", a.target)), a.pos));
        }
        match a.kind {
            AssignKind::Init => init.push(ctx.target(decl, false, &a.rhs)?),
            AssignKind::Next => trans.push(ctx.target(decl, true, &a.rhs)?),
        }
    }
    let cur = Ctx { decls: &decls, allow_next: false };
    for e in &module.inits {
        init.push(cur.boolean(e)?);
    }
    let both = Ctx { decls: &decls, allow_next: true };
    for e in &module.transes {
        trans.push(both.boolean(e)?);
    }

    let halt_var = match &module.halt_pragma {
        Some((h, pos)) => {
            cur.decl(h, *pos)?;
            Some(h.clone())
        }
        None => decls.contains_key("halt").then(|| "halt".to_string()),
    };
    let pos = module.halt_pragma.as_ref().map(|(_, p)| *p).unwrap_or(Pos { line: 1, col: 1 });
    SymbolicKripke::new(name, order, BoolExpr::and(init), BoolExpr::and(trans), halt_var)
        .map_err(|e| (SmvErrorKind::Model(e), pos))
}
