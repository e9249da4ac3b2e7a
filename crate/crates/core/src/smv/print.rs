use std::fmt::Write;

use super::ast::*;

/// Canonical, fully parenthesised rendering of a parsed module.
pub fn print_module(m: &SmvModule) -> String {
    let mut out = String::from("MODULE main\n");
    if let Some((h, _)) = &m.halt_pragma {
        let _ = writeln!(out, "-- @halt: {h}");
    }
    if !m.vars.is_empty() {
        out.push_str("VAR\n");
        for v in &m.vars {
            let ty = match v.ty {
                TypeSpec::Boolean => "boolean".to_string(),
                TypeSpec::Range(lo, hi) => format!("{lo}..{hi}"),
            };
            let _ = writeln!(out, "  {} : {ty};", v.name);
        }
    }
    if !m.assigns.is_empty() {
        out.push_str("ASSIGN\n");
        for a in &m.assigns {
            let kw = match a.kind {
                AssignKind::Init => "init",
                AssignKind::Next => "next",
            };
            let _ = writeln!(out, "  {kw}({}) := {};", a.target, print_rhs(&a.rhs, 2));
        }
    }
    for e in &m.inits {
        let _ = writeln!(out, "INIT\n  {};", print_expr(e));
    }
    for e in &m.transes {
        let _ = writeln!(out, "TRANS\n  {};", print_expr(e));
    }
    out
}

fn print_rhs(rhs: &Rhs, indent: usize) -> String {
    match rhs {
        Rhs::Expr(e) => print_expr(e),
        Rhs::Set(items, _) => {
            let items: Vec<String> = items.iter().map(print_expr).collect();
            format!("{{{}}}", items.join(", "))
        }
        Rhs::Case(arms, _) => {
            let pad = " ".repeat(indent + 2);
            let mut s = String::from("case\n");
            for (g, b) in arms {
                let _ = writeln!(s, "{pad}{} : {};", print_expr(g), print_rhs(b, indent + 2));
            }
            s.push_str(&" ".repeat(indent));
            s.push_str("esac");
            s
        }
    }
}

pub fn print_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Bool(true) => "TRUE".into(),
        ExprKind::Bool(false) => "FALSE".into(),
        ExprKind::Int(n) if *n < 0 => format!("({n})"),
        ExprKind::Int(n) => n.to_string(),
        ExprKind::Var(v) => v.clone(),
        ExprKind::Next(v) => format!("next({v})"),
        ExprKind::Not(x) => format!("!{}", print_expr(x)),
        ExprKind::Bin(op, a, b) => format!("({} {} {})", print_expr(a), op.symbol(), print_expr(b)),
    }
}
