//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every entry point takes and returns JSON strings so the page needs no
//! generated type definitions. The plain functions are usable (and tested)
//! natively; the `wasm_bindgen` wrappers only turn errors into JS errors.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value as Json};
use wasm_bindgen::prelude::*;

use hyperbmc::checker::{build_query, check, Backend, CheckOptions, Mode, Verdict};
use hyperbmc::hyperltl::{parse_formula, HyperFormula};
use hyperbmc::model::{enumerate_states, SymbolicKripke};
use hyperbmc::smv::parse_model;
use hyperbmc::solver::SolverConfig;
use hyperbmc::unroll::Semantics;

/// Enumeration cap for the state explorer.
pub const MAX_EXPLORE_STATES: usize = 4096;
/// Decision cap so a careless query cannot hang the tab.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Deserialize)]
pub struct Request {
    /// SMV sources, one per quantifier.
    pub models: Vec<String>,
    pub formula: String,
    pub k: usize,
    pub semantics: String,
    #[serde(default = "default_mode")]
    pub mode: String,
    pub budget: Option<u64>,
}

fn default_mode() -> String {
    "bughunt".into()
}

struct Parsed {
    models: Vec<SymbolicKripke>,
    formula: HyperFormula,
    opts: CheckOptions,
}

fn parse_request(json: &str) -> Result<Parsed, String> {
    let req: Request = serde_json::from_str(json).map_err(|e| format!("bad request: {e}"))?;
    let formula = parse_formula(&req.formula).map_err(|e| format!("formula:{e}"))?;
    if req.models.len() != formula.prefix.len() {
        return Err(format!("{} model(s) for {} quantifier(s)", req.models.len(), formula.prefix.len()));
    }
    let models = req
        .models
        .iter()
        .enumerate()
        .map(|(i, src)| parse_model(src, &format!("model{}.smv", i + 1)).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let semantics: Semantics = req.semantics.parse()?;
    let mode: Mode = req.mode.parse()?;
    let mut opts = CheckOptions::new(req.k, semantics, mode);
    opts.backend =
        Backend::Internal(SolverConfig { budget: Some(req.budget.unwrap_or(DEFAULT_BUDGET)), ..Default::default() });
    Ok(Parsed { models, formula, opts })
}

#[derive(Serialize)]
struct CheckReply<'a> {
    verdict_line: &'static str,
    #[serde(flatten)]
    verdict: &'a Verdict,
}

/// Runs a check; the reply is the CLI's JSON verdict plus its YES/NO line.
pub fn check_json(request: &str) -> Result<String, String> {
    let p = parse_request(request)?;
    let refs: Vec<&SymbolicKripke> = p.models.iter().collect();
    let v = check(&refs, &p.formula, &p.opts).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&CheckReply { verdict_line: v.yes_no(), verdict: &v }).expect("verdicts serialize"))
}

/// The query the request would be solved with, in QCIR.
pub fn emit_qcir_text(request: &str) -> Result<String, String> {
    let p = parse_request(request)?;
    let refs: Vec<&SymbolicKripke> = p.models.iter().collect();
    let inst = build_query(&refs, &p.formula, &p.opts).map_err(|e| e.to_string())?;
    Ok(inst.to_qcir())
}

/// Reachable states of one model with their successors.
pub fn explore_json(smv: &str) -> Result<String, String> {
    let m = parse_model(smv, "model.smv").map_err(|e| e.to_string())?;
    let exp = enumerate_states(&m, MAX_EXPLORE_STATES).map_err(|e| e.to_string())?.reachable();
    let halt_idx = m.halt_var().and_then(|h| exp.var_names.iter().position(|n| n == h));
    let states: Vec<Json> = exp
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut values = Map::new();
            for (decl, &v) in m.vars().iter().zip(&s.values) {
                let val = if decl.is_boolean() { json!(v == 1) } else { json!(v) };
                values.insert(decl.name().to_string(), val);
            }
            json!({
                "id": i,
                "initial": exp.initial.contains(&i),
                "halted": halt_idx.is_some_and(|h| s.values[h] == 1),
                "values": values,
                "successors": exp.edges[i],
            })
        })
        .collect();
    Ok(json!({
        "vars": exp.var_names,
        "halt": m.halt_var(),
        "states": states,
        "dead_ends": exp.dead_ends,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn check_model(request: &str) -> Result<String, JsError> {
    check_json(request).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn emit_qcir(request: &str) -> Result<String, JsError> {
    emit_qcir_text(request).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn explore(smv: &str) -> Result<String, JsError> {
    explore_json(smv).map_err(|e| JsError::new(&e))
}
