#![allow(dead_code)]

pub mod gen;

use rand::Rng;

use hyperbmc::encode::assemble;
use hyperbmc::hyperltl::HyperFormula;
use hyperbmc::model::{enumerate_states, SymbolicKripke};
use hyperbmc::oracle::check_brute;
use hyperbmc::solver::{solve, SolverConfig};
use hyperbmc::unroll::Semantics;

/// One random model-checking instance for differential testing.
pub struct Instance {
    pub models: Vec<SymbolicKripke>,
    pub formula: HyperFormula,
    pub k: usize,
    pub sem: Semantics,
}

impl Instance {
    pub fn model_refs(&self) -> Vec<&SymbolicKripke> {
        self.models.iter().collect()
    }

    /// (QBF answer, oracle answer).
    pub fn run(&self) -> (bool, bool) {
        let models = self.model_refs();
        let q = assemble(&models, &self.formula, self.k, self.sem).expect("assemble");
        let r = solve(&q.qbf, &SolverConfig::default()).expect("solve");
        let o = check_brute(&models, &self.formula, self.k, self.sem).expect("oracle");
        (r.status.is_sat(), o)
    }

    pub fn describe(&self) -> String {
        let mut s = format!("k={} sem={} formula: {}\n", self.k, self.sem, self.formula);
        for (i, m) in self.models.iter().enumerate() {
            let vars: Vec<String> = m.vars().iter().map(|v| format!("{}:{}..{}", v.name(), v.lo(), v.hi())).collect();
            s += &format!("model {i}: vars {}\n  init {}\n  trans {}\n", vars.join(" "), m.init(), m.trans());
        }
        s
    }
}

/// Number of length-`k+1` path prefixes of `m`.
fn path_count(m: &SymbolicKripke, k: usize) -> usize {
    enumerate_states(m, 1 << 10).unwrap().paths(k + 1).len()
}

/// A random instance with `quants` quantifiers whose path product stays small.
pub fn instance(rng: &mut impl Rng, nq: usize, alternate: bool) -> Instance {
    loop {
        let quants = if alternate {
            loop {
                let q = gen::quantifiers(rng, nq);
                if q.windows(2).any(|w| w[0] != w[1]) {
                    break q;
                }
            }
        } else {
            gen::quantifiers(rng, nq)
        };
        let shared = rng.gen_bool(0.5);
        let first = gen::model(rng, 6);
        let models: Vec<SymbolicKripke> =
            (0..nq).map(|i| if shared || i == 0 { first.clone() } else { gen::model(rng, 6) }).collect();
        let k = rng.gen_range(0..=4);
        let product: usize = models.iter().map(|m| path_count(m, k)).product();
        if product > 100_000 {
            continue;
        }
        let refs: Vec<&SymbolicKripke> = models.iter().collect();
        let formula = gen::formula(rng, &refs, &quants, 3);
        let sem = Semantics::ALL[rng.gen_range(0..4)];
        return Instance { models, formula, k, sem };
    }
}

/// Two unconstrained booleans plus a halt flag, for body-level properties.
pub const FREE_MODEL: &str = "MODULE main\nVAR\n  a : boolean;\n  b : boolean;\n  halt : boolean;\n";

pub fn free_model() -> SymbolicKripke {
    hyperbmc::smv::parse_model(FREE_MODEL, "free.smv").unwrap()
}

pub fn tids(n: usize) -> Vec<String> {
    ["A", "B", "C"][..n].iter().map(|t| t.to_string()).collect()
}

/// A random body over traces A and B of `m`, with at most `2^depth` leaves.
pub fn body(rng: &mut impl Rng, m: &SymbolicKripke, depth: u32) -> hyperbmc::hyperltl::LtlExpr {
    use hyperbmc::qbf::Quant;
    gen::formula(rng, &[m, m], &[Quant::Forall, Quant::Forall], depth).body
}

/// Random values for traces A and B of `m` with `len` steps each.
pub fn random_steps(rng: &mut impl Rng, m: &SymbolicKripke, len: usize) -> Vec<Vec<Vec<u64>>> {
    (0..2)
        .map(|_| (0..len).map(|_| m.vars().iter().map(|v| rng.gen_range(v.lo()..=v.hi())).collect()).collect())
        .collect()
}

pub fn tuple_of(m: &SymbolicKripke, steps: &[Vec<Vec<u64>>]) -> hyperbmc::oracle::TraceTuple {
    let names: Vec<String> = m.vars().iter().map(|v| v.name().to_string()).collect();
    let mut t = hyperbmc::oracle::TraceTuple::new();
    for (tid, s) in tids(steps.len()).iter().zip(steps) {
        t.bind(tid, &names, m.halt_var(), s.clone());
    }
    t
}

/// Value of unrolled variable `id` when the traces take the values `steps`.
pub fn layout_value(layout: &hyperbmc::unroll::Layout, steps: &[Vec<Vec<u64>>], id: u32) -> bool {
    let a = layout.decode(id).expect("id in layout");
    let t = layout.tid_index(&a.tid).unwrap();
    let m = layout.model(t);
    let idx = m.vars().iter().position(|v| v.name() == a.var).unwrap();
    steps[t][a.step][idx] >> a.bit & 1 == 1
}

/// `[[nnf(!psi)]]^opt` against `![[psi]]^pes` (and the halting pair) by
/// truth table over the union of both supports.
pub fn duality_counterexample(m: &SymbolicKripke, psi: &hyperbmc::hyperltl::LtlExpr, k: usize) -> Option<String> {
    use hyperbmc::hyperltl::{nnf, LtlExpr};
    use hyperbmc::qbf::Circuit;
    use hyperbmc::unroll::{unroll_body, Layout};

    let layout = Layout::new(&[m, m], &tids(2), k);
    let neg = nnf(&LtlExpr::not(psi.clone()));
    for (p, o) in [(Semantics::Pes, Semantics::Opt), (Semantics::Hpes, Semantics::Hopt)] {
        let mut c = Circuit::new();
        let pos = unroll_body(&mut c, &layout, psi, p).unwrap();
        let dual = unroll_body(&mut c, &layout, &neg, o).unwrap();
        let mut support: Vec<u32> = c.support(pos);
        support.extend(c.support(dual));
        support.sort_unstable();
        support.dedup();
        assert!(support.len() <= 20, "support too large for a truth table: {}", support.len());
        for bits in 0u64..1 << support.len() {
            let value = |v: u32| bits >> support.binary_search(&v).unwrap() & 1 == 1;
            if c.eval(pos, &value) == c.eval(dual, &value) {
                return Some(format!("{p}/{o} k={k} psi={psi} bits={bits:b} over {support:?}"));
            }
        }
    }
    None
}

/// Checks pes and opt monotonicity in `k` for one tuple, both on the oracle
/// and on the unrolled circuit. `steps` must have at least `k + 2` entries.
pub fn monotonicity_counterexample(
    m: &SymbolicKripke,
    psi: &hyperbmc::hyperltl::LtlExpr,
    steps: &[Vec<Vec<u64>>],
    k: usize,
) -> Option<String> {
    use hyperbmc::hyperltl::nnf;
    use hyperbmc::oracle::eval_bounded;
    use hyperbmc::qbf::Circuit;
    use hyperbmc::unroll::{unroll_body, Layout};

    let tuple = tuple_of(m, steps);
    let body = nnf(psi);
    let circuit_eval = |k: usize, sem: Semantics| {
        let layout = Layout::new(&[m, m], &tids(2), k);
        let mut c = Circuit::new();
        let l = unroll_body(&mut c, &layout, &body, sem).unwrap();
        c.eval(l, &|v| layout_value(&layout, steps, v))
    };
    for sem in Semantics::ALL {
        for kk in [k, k + 1] {
            let (o, q) = (eval_bounded(&tuple, &body, 0, kk, sem), circuit_eval(kk, sem));
            if o != q {
                return Some(format!("oracle {o} vs circuit {q} under {sem} at k={kk}: {psi}"));
            }
        }
    }
    let at = |kk, sem| eval_bounded(&tuple, &body, 0, kk, sem);
    if at(k, Semantics::Pes) && !at(k + 1, Semantics::Pes) {
        return Some(format!("pes true at k={k} but false at k+1: {psi}"));
    }
    if !at(k, Semantics::Opt) && at(k + 1, Semantics::Opt) {
        return Some(format!("opt false at k={k} but true at k+1: {psi}"));
    }
    None
}

/// solve agrees with brute force, and the certificate, if any, preserves
/// the answer when substituted. Returns a description of any failure.
pub fn solver_counterexample(q: &hyperbmc::qbf::Qbf) -> Option<String> {
    use hyperbmc::solver::brute_eval;
    let expected = brute_eval(q).unwrap();
    for cfg in [
        SolverConfig::default(),
        SolverConfig { propagate: false, ..SolverConfig::default() },
        SolverConfig { memo: false, ..SolverConfig::default() },
    ] {
        let r = solve(q, &cfg).unwrap();
        if r.status.is_sat() != expected {
            return Some(format!("{cfg:?}: solve says {} but brute force says {expected}", r.status));
        }
        let lead = q.leading_run();
        let wants_cert = matches!(
            (&lead, expected),
            (Some((hyperbmc::qbf::Quant::Exists, _)), true) | (Some((hyperbmc::qbf::Quant::Forall, _)), false)
        );
        match (&r.certificate, wants_cert) {
            (Some(cert), true) => {
                if brute_eval(&q.restrict(cert)).unwrap() != expected {
                    return Some(format!("{cfg:?}: certificate {cert:?} does not preserve the answer"));
                }
                if cert.len() != lead.unwrap().1.len() {
                    return Some(format!("{cfg:?}: certificate does not cover the leading block"));
                }
            }
            (None, false) => {}
            (c, _) => return Some(format!("{cfg:?}: unexpected certificate presence {c:?}")),
        }
    }
    None
}

/// Whether `trace` is a path of `m` starting in an initial state.
pub fn is_model_path(m: &SymbolicKripke, trace: &hyperbmc::checker::Trace) -> bool {
    use hyperbmc::checker::Value;
    let exp = enumerate_states(m, 1 << 12).unwrap();
    let idx: Vec<Option<usize>> = trace
        .steps
        .iter()
        .map(|s| {
            let values: Vec<u64> = m
                .vars()
                .iter()
                .map(|v| match s.get(v.name()) {
                    Some(Value::Bool(b)) => b as u64,
                    Some(Value::Int(n)) => n,
                    None => u64::MAX,
                })
                .collect();
            exp.index_of(&values)
        })
        .collect();
    let Some(idx) = idx.into_iter().collect::<Option<Vec<usize>>>() else {
        return false;
    };
    !idx.is_empty() && exp.initial.contains(&idx[0]) && idx.windows(2).all(|w| exp.edges[w[0]].contains(&w[1]))
}

pub fn has_iff(e: &hyperbmc::hyperltl::LtlExpr) -> bool {
    use hyperbmc::hyperltl::LtlExpr;
    matches!(e, LtlExpr::Iff(..) | LtlExpr::Xor(..)) || e.children().into_iter().any(has_iff)
}
