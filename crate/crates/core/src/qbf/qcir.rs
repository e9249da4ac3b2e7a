//! QCIR-G14 output and a reader for the same dialect.
//!
//! Variables keep their numbers; conjunction gates are numbered after them
//! in node order, so the output only depends on the circuit.

use std::collections::HashMap;
use std::fmt::Write;

use super::{Circuit, Lit, Node, Qbf, QbfError, Quant};

pub fn emit(q: &Qbf) -> String {
    let mut out = String::from("#QCIR-G14\n");
    for (quant, vs) in q.normalized_prefix() {
        let names: Vec<String> = vs.iter().map(u32::to_string).collect();
        writeln!(out, "{}({})", quant.keyword(), names.join(", ")).unwrap();
    }
    let mut gate_id: HashMap<usize, u32> = HashMap::new();
    let mut next = q.num_vars;
    let mut gates = String::new();
    let show = |gate_id: &HashMap<usize, u32>, l: Lit| -> String {
        let id = match q.circuit.node(l) {
            Node::Var(v) => *v,
            _ => gate_id[&l.node()],
        };
        if l.is_neg() {
            format!("-{id}")
        } else {
            id.to_string()
        }
    };
    for n in q.circuit.cone(q.output) {
        match &q.circuit.nodes()[n] {
            Node::And(kids) => {
                next += 1;
                gate_id.insert(n, next);
                let args: Vec<String> = kids.iter().map(|&k| show(&gate_id, k)).collect();
                writeln!(gates, "{next} = and({})", args.join(", ")).unwrap();
            }
            Node::True => {
                next += 1;
                gate_id.insert(n, next);
                writeln!(gates, "{next} = and()").unwrap();
            }
            Node::Var(_) => {}
        }
    }
    writeln!(out, "output({})", show(&gate_id, q.output)).unwrap();
    out.push_str(&gates);
    out
}

fn perr(line: usize, msg: impl Into<String>) -> QbfError {
    QbfError::Parse { line, msg: msg.into() }
}

/// Splits `name(a, b, c)` into `name` and its arguments.
fn call(s: &str) -> Option<(&str, Vec<&str>)> {
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    let args = inner.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
    Some((s[..open].trim(), args))
}

struct Reader {
    circuit: Circuit,
    vars: HashMap<String, u32>,
    gates: HashMap<String, Lit>,
    next_var: u32,
}

impl Reader {
    fn var_id(&mut self, name: &str) -> u32 {
        if let Some(&v) = self.vars.get(name) {
            return v;
        }
        let v = match name.parse::<u32>() {
            Ok(v) if v > 0 => v,
            _ => {
                self.next_var += 1;
                self.next_var
            }
        };
        self.vars.insert(name.to_string(), v);
        v
    }

    fn lit(&mut self, line: usize, tok: &str) -> Result<Lit, QbfError> {
        let (neg, name) = match tok.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, tok),
        };
        if name.is_empty() {
            return Err(perr(line, "empty literal"));
        }
        let l = match self.gates.get(name) {
            Some(&g) => g,
            None => {
                let v = self.var_id(name);
                self.circuit.var(v)
            }
        };
        Ok(l.with_sign(neg))
    }
}

/// Reads QCIR; identifiers that are neither gates nor quantified become
/// variables of an outermost existential block.
pub fn parse(text: &str) -> Result<Qbf, QbfError> {
    let mut prefix: Vec<(Quant, Vec<u32>)> = Vec::new();
    let mut output: Option<(usize, String)> = None;
    let mut defs: Vec<(usize, String, String, Vec<String>)> = Vec::new();
    // numeric names are taken literally, so fresh ids start above all of them
    let max_numeric = text
        .split(|c: char| !c.is_ascii_alphanumeric() && c != '_')
        .filter_map(|t| t.parse::<u32>().ok())
        .max()
        .unwrap_or(0);
    let mut r = Reader { circuit: Circuit::new(), vars: HashMap::new(), gates: HashMap::new(), next_var: max_numeric };
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((lhs, rhs)) = line.split_once('=') {
            let (op, args) = call(rhs.trim()).ok_or_else(|| perr(ln, "expected `gate = op(args)`"))?;
            defs.push((ln, lhs.trim().to_string(), op.to_string(), args.iter().map(|a| a.to_string()).collect()));
            continue;
        }
        let (head, args) = call(line).ok_or_else(|| perr(ln, format!("unrecognised line `{line}`")))?;
        match head {
            "exists" | "forall" | "free" => {
                if output.is_some() {
                    return Err(perr(ln, "quantifier after output"));
                }
                let q = if head == "forall" { Quant::Forall } else { Quant::Exists };
                let vs = args.iter().map(|a| r.var_id(a)).collect();
                prefix.push((q, vs));
            }
            "output" => {
                if args.len() != 1 {
                    return Err(perr(ln, "output takes one literal"));
                }
                output = Some((ln, args[0].to_string()));
            }
            other => return Err(perr(ln, format!("unknown statement `{other}`"))),
        }
    }
    for (ln, name, op, args) in defs {
        if r.gates.contains_key(&name) || r.vars.contains_key(&name) {
            return Err(perr(ln, format!("`{name}` defined twice")));
        }
        let lits = args.iter().map(|a| r.lit(ln, a)).collect::<Result<Vec<_>, _>>()?;
        let c = &mut r.circuit;
        let g = match (op.as_str(), lits.as_slice()) {
            ("and", _) => c.and(lits),
            ("or", _) => c.or(lits),
            ("xor", [a, b]) => c.xor(*a, *b),
            ("ite", [i, t, e]) => c.ite(*i, *t, *e),
            _ => return Err(perr(ln, format!("unsupported gate `{op}` with {} inputs", lits.len()))),
        };
        r.gates.insert(name, g);
    }
    let (ln, out) = output.ok_or_else(|| perr(0, "missing output statement"))?;
    let output = r.lit(ln, &out)?;
    let quantified: std::collections::HashSet<u32> = prefix.iter().flat_map(|(_, vs)| vs.iter().copied()).collect();
    let free: Vec<u32> = r.circuit.support(output).into_iter().filter(|v| !quantified.contains(v)).collect();
    if !free.is_empty() {
        prefix.insert(0, (Quant::Exists, free));
    }
    let num_vars = r.vars.values().copied().max().unwrap_or(0);
    Ok(Qbf { num_vars, prefix, circuit: r.circuit, output })
}
