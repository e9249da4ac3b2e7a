//! Random instances for property and differential tests.
//!
//! Shared between unit tests (via `#[path]`) and integration tests, so it
//! only names the library as `hyperbmc`.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use hyperbmc::hyperltl::{parse_formula, HyperFormula, LtlExpr};
use hyperbmc::model::{enumerate_states, SymbolicKripke};
use hyperbmc::qbf::{Circuit, Lit, Qbf, Quant};
use hyperbmc::smv::parse_model;

/// A closed QBF over `1..=n` with a random block structure and matrix.
pub fn qbf(rng: &mut impl Rng, n: u32) -> Qbf {
    let mut vars: Vec<u32> = (1..=n).collect();
    vars.shuffle(rng);
    let mut prefix: Vec<(Quant, Vec<u32>)> = Vec::new();
    for v in vars {
        if prefix.is_empty() || rng.gen_bool(0.35) {
            let q = if rng.gen_bool(0.5) { Quant::Exists } else { Quant::Forall };
            prefix.push((q, vec![]));
        }
        prefix.last_mut().unwrap().1.push(v);
    }
    let mut c = Circuit::new();
    let mut pool: Vec<Lit> = (1..=n).map(|v| c.var(v)).collect();
    let gates = rng.gen_range(n as usize..=3 * n as usize);
    for _ in 0..gates {
        let arity = rng.gen_range(2..=3);
        let ins: Vec<Lit> = (0..arity)
            .map(|_| {
                // bias towards recent gates so the output depends on most inputs
                let lo = pool.len().saturating_sub(2 * n as usize);
                pool[rng.gen_range(lo..pool.len())].with_sign(rng.gen_bool(0.5))
            })
            .collect();
        let g = match rng.gen_range(0..4) {
            0 => c.and(ins),
            1 => c.or(ins),
            2 => c.xor(ins[0], ins[1]),
            _ => c.iff(ins[0], ins[1]),
        };
        pool.push(g);
    }
    let output = *pool.last().unwrap();
    Qbf { num_vars: n, prefix, circuit: c, output }
}

fn bool_lit<R: Rng + ?Sized>(rng: &mut R) -> &'static str {
    if rng.gen_bool(0.5) {
        "TRUE"
    } else {
        "FALSE"
    }
}

fn cond_atom<R: Rng + ?Sized>(rng: &mut R, bools: &[String], ranged: Option<(u32, u32)>) -> String {
    match ranged {
        Some((lo, hi)) if rng.gen_bool(0.3) => format!("x = {}", rng.gen_range(lo..=hi)),
        _ => {
            let b = &bools[rng.gen_range(0..bools.len())];
            if rng.gen_bool(0.3) {
                format!("!{b}")
            } else {
                b.clone()
            }
        }
    }
}

/// A small condition over the model's variables.
fn cond<R: Rng + ?Sized>(rng: &mut R, bools: &[String], ranged: Option<(u32, u32)>) -> String {
    match rng.gen_range(0..3) {
        0 => cond_atom(rng, bools, ranged),
        1 => format!("{} & {}", cond_atom(rng, bools, ranged), cond_atom(rng, bools, ranged)),
        _ => format!("{} | {}", cond_atom(rng, bools, ranged), cond_atom(rng, bools, ranged)),
    }
}

/// SMV source for a model with 1 to 3 booleans (the last named `halt`) and
/// an optional ranged variable `x`.
pub fn smv_source(rng: &mut impl Rng) -> String {
    let nb = rng.gen_range(1..=3);
    let mut bools: Vec<String> = (0..nb - 1).map(|i| format!("p{i}")).collect();
    bools.push("halt".into());
    let ranged = rng.gen_bool(0.5).then(|| {
        let lo = rng.gen_range(0..=1);
        (lo, lo + rng.gen_range(1..=2))
    });
    let mut s = String::from("MODULE main\nVAR\n");
    for b in &bools {
        s += &format!("  {b} : boolean;\n");
    }
    if let Some((lo, hi)) = ranged {
        s += &format!("  x : {lo}..{hi};\n");
    }
    s += "ASSIGN\n";
    for b in &bools {
        match rng.gen_range(0..3) {
            0 => s += &format!("  init({b}) := {{TRUE, FALSE}};\n"),
            _ => s += &format!("  init({b}) := {};\n", bool_lit(rng)),
        }
        let next = match rng.gen_range(0..4) {
            0 => "{TRUE, FALSE}".to_string(),
            1 => format!("case {} : {}; TRUE : {b}; esac", cond(rng, &bools, ranged), bool_lit(rng)),
            2 => format!("case {} : !{b}; TRUE : {}; esac", cond(rng, &bools, ranged), bool_lit(rng)),
            _ => cond(rng, &bools, ranged),
        };
        s += &format!("  next({b}) := {next};\n");
    }
    if let Some((lo, hi)) = ranged {
        s += &format!("  init(x) := {lo};\n");
        let a = rng.gen_range(lo..=hi);
        let b = rng.gen_range(lo..=hi);
        let next = match rng.gen_range(0..3) {
            0 => format!("{{{a}, {b}}}"),
            1 => format!("case {} : {a}; TRUE : x; esac", cond(rng, &bools, ranged)),
            _ => format!("case x = {hi} : {lo}; TRUE : x + 1; esac"),
        };
        s += &format!("  next(x) := {next};\n");
    }
    s
}

/// A random model with at most `max_states` reachable states.
pub fn model(rng: &mut impl Rng, max_states: usize) -> SymbolicKripke {
    loop {
        let src = smv_source(rng);
        let m = parse_model(&src, "random.smv").unwrap_or_else(|e| panic!("{e}\n{src}"));
        let exp = enumerate_states(&m, 1 << 10).unwrap();
        if exp.reachable_indices().len() <= max_states {
            return m;
        }
    }
}

/// Atomic propositions available for trace `tid` of `m`.
fn atoms(m: &SymbolicKripke, tid: &str) -> Vec<LtlExpr> {
    let mut out = Vec::new();
    for v in m.vars() {
        if v.is_boolean() {
            out.push(LtlExpr::prop(v.name(), tid));
        }
    }
    out
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, models: &[(&SymbolicKripke, String)]) -> String {
    let (m, tid) = &models[rng.gen_range(0..models.len())];
    let ranged: Vec<_> = m.vars().iter().filter(|v| !v.is_boolean()).collect();
    if !ranged.is_empty() && rng.gen_bool(0.25) {
        let v = ranged[0];
        let op = if rng.gen_bool(0.5) { "=" } else { "!=" };
        // compare against another trace of a model with the same variable, or a literal
        let other: Vec<&String> = models
            .iter()
            .filter(|(m2, _)| m2.var(v.name()).is_some_and(|d| d.lo() == v.lo() && d.hi() == v.hi()))
            .map(|(_, t)| t)
            .collect();
        if other.len() > 1 && rng.gen_bool(0.5) {
            let t2 = other[rng.gen_range(0..other.len())];
            return format!("*{}[{tid}] {op} {}[{t2}]*", v.name(), v.name());
        }
        return format!("*{}[{tid}] {op} {}*", v.name(), rng.gen_range(v.lo()..=v.hi()));
    }
    let props = atoms(m, tid);
    if props.is_empty() || rng.gen_bool(0.05) {
        return bool_lit(rng).to_string();
    }
    props[rng.gen_range(0..props.len())].to_string()
}

/// A random body in concrete syntax of depth at most `depth`.
pub fn body_source<R: Rng + ?Sized>(
    rng: &mut R,
    models: &[(&SymbolicKripke, String)],
    depth: u32,
    temporal: bool,
) -> String {
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng, models);
    }
    let d = depth - 1;
    let n = if temporal { 11 } else { 6 };
    match rng.gen_range(0..n) {
        0 => format!("!({})", body_source(rng, models, d, temporal)),
        1 => format!("({}) & ({})", body_source(rng, models, d, temporal), body_source(rng, models, d, temporal)),
        2 => format!("({}) | ({})", body_source(rng, models, d, temporal), body_source(rng, models, d, temporal)),
        3 => format!("({}) -> ({})", body_source(rng, models, d, temporal), body_source(rng, models, d, temporal)),
        4 => format!("({}) <-> ({})", body_source(rng, models, d, temporal), body_source(rng, models, d, temporal)),
        5 => format!("!(({}) <-> ({}))", body_source(rng, models, d, temporal), body_source(rng, models, d, temporal)),
        6 => format!("X({})", body_source(rng, models, d, temporal)),
        7 => format!("({}) U ({})", body_source(rng, models, d, temporal), body_source(rng, models, d, temporal)),
        8 => format!("({}) R ({})", body_source(rng, models, d, temporal), body_source(rng, models, d, temporal)),
        9 => format!("G({})", body_source(rng, models, d, temporal)),
        _ => format!("F({})", body_source(rng, models, d, temporal)),
    }
}

const TIDS: [&str; 3] = ["A", "B", "C"];

/// A random formula with `quants` quantifiers over `models` (one per trace).
pub fn formula(rng: &mut impl Rng, models: &[&SymbolicKripke], quants: &[Quant], depth: u32) -> HyperFormula {
    let bound: Vec<(&SymbolicKripke, String)> = models.iter().zip(TIDS).map(|(m, t)| (*m, t.to_string())).collect();
    let prefix: Vec<String> = quants.iter().zip(TIDS).map(|(q, t)| format!("{} {t}.", q.keyword())).collect();
    let src = format!("{} {}", prefix.join(" "), body_source(rng, &bound, depth, true));
    parse_formula(&src).unwrap_or_else(|e| panic!("{e}\n{src}"))
}

pub fn quantifiers(rng: &mut impl Rng, n: usize) -> Vec<Quant> {
    (0..n).map(|_| if rng.gen_bool(0.5) { Quant::Exists } else { Quant::Forall }).collect()
}
