//! QDIMACS output by Tseitin transformation, and a reader for the format.
//!
//! Every conjunction gate under the output gets a definition variable,
//! numbered after the instance's own variables in node order, with full
//! equivalence clauses. Definition variables go into the innermost
//! existential block, which is created if the innermost block is universal.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use super::{Circuit, Lit, Node, Qbf, QbfError, Quant};

pub fn emit(q: &Qbf) -> String {
    let mut gate_var: HashMap<usize, i64> = HashMap::new();
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut next = q.num_vars as i64;
    let cone = q.circuit.cone(q.output);
    let lit_of = |gate_var: &HashMap<usize, i64>, l: Lit| -> i64 {
        let v = match q.circuit.node(l) {
            Node::Var(v) => *v as i64,
            _ => gate_var[&l.node()],
        };
        if l.is_neg() {
            -v
        } else {
            v
        }
    };
    for &n in &cone {
        if let Node::And(kids) = &q.circuit.nodes()[n] {
            next += 1;
            gate_var.insert(n, next);
            let kid_lits: Vec<i64> = kids.iter().map(|&k| lit_of(&gate_var, k)).collect();
            for &k in &kid_lits {
                clauses.push(vec![-next, k]);
            }
            let mut long = vec![next];
            long.extend(kid_lits.iter().map(|k| -k));
            clauses.push(long);
        }
    }
    match q.output.as_const() {
        Some(true) => {}
        Some(false) => clauses.push(vec![]),
        None => clauses.push(vec![lit_of(&gate_var, q.output)]),
    }

    let mut blocks = q.normalized_prefix();
    let aux: Vec<u32> = ((q.num_vars + 1) as i64..=next).map(|v| v as u32).collect();
    if !aux.is_empty() {
        match blocks.last_mut() {
            Some((Quant::Exists, vs)) => vs.extend(aux),
            _ => blocks.push((Quant::Exists, aux)),
        }
    }

    let mut out = String::new();
    writeln!(out, "p cnf {} {}", next, clauses.len()).unwrap();
    for (quant, vs) in &blocks {
        out.push(if *quant == Quant::Exists { 'e' } else { 'a' });
        for v in vs {
            write!(out, " {v}").unwrap();
        }
        out.push_str(" 0\n");
    }
    for c in &clauses {
        for l in c {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> QbfError {
    QbfError::Parse { line, msg: msg.into() }
}

/// Reads QDIMACS; variables left unquantified join an outermost existential block.
pub fn parse(text: &str) -> Result<Qbf, QbfError> {
    let mut header: Option<(u32, usize)> = None;
    let mut prefix: Vec<(Quant, Vec<u32>)> = Vec::new();
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.clone().next() {
            Some("p") => {
                let parts: Vec<&str> = toks.collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(perr(ln, "expected `p cnf <vars> <clauses>`"));
                }
                let v = parts[2].parse().map_err(|_| perr(ln, "bad variable count"))?;
                let c = parts[3].parse().map_err(|_| perr(ln, "bad clause count"))?;
                header = Some((v, c));
            }
            Some(q @ ("e" | "a")) => {
                if header.is_none() {
                    return Err(perr(ln, "quantifier line before header"));
                }
                if !clauses.is_empty() || !current.is_empty() {
                    return Err(perr(ln, "quantifier line after clauses"));
                }
                toks.next();
                let mut vs = Vec::new();
                for t in toks {
                    let v: u32 = t.parse().map_err(|_| perr(ln, format!("bad variable `{t}`")))?;
                    if v == 0 {
                        break;
                    }
                    vs.push(v);
                }
                let quant = if q == "e" { Quant::Exists } else { Quant::Forall };
                prefix.push((quant, vs));
            }
            Some(_) => {
                if header.is_none() {
                    return Err(perr(ln, "clause before header"));
                }
                for t in toks {
                    let l: i64 = t.parse().map_err(|_| perr(ln, format!("bad literal `{t}`")))?;
                    if l == 0 {
                        clauses.push(std::mem::take(&mut current));
                    } else {
                        current.push(l);
                    }
                }
            }
            None => {}
        }
    }
    let (declared, _) = header.ok_or_else(|| perr(0, "missing `p cnf` header"))?;
    if !current.is_empty() {
        clauses.push(current);
    }

    let quantified: BTreeSet<u32> = prefix.iter().flat_map(|(_, vs)| vs.iter().copied()).collect();
    let used: BTreeSet<u32> = clauses.iter().flatten().map(|l| l.unsigned_abs() as u32).collect();
    let free: Vec<u32> = used.difference(&quantified).copied().collect();
    let max_seen = used.iter().chain(quantified.iter()).copied().max().unwrap_or(0);

    let mut circuit = Circuit::new();
    let (defined, is_def) = recover_gates(&mut circuit, &mut prefix, &clauses);
    let lit = |circuit: &mut Circuit, l: i64| {
        let v = l.unsigned_abs() as u32;
        defined.get(&v).copied().unwrap_or_else(|| circuit.var(v)).with_sign(l < 0)
    };
    let mut conj = Vec::new();
    for (i, c) in clauses.iter().enumerate() {
        if !is_def[i] {
            let lits: Vec<Lit> = c.iter().map(|&l| lit(&mut circuit, l)).collect();
            conj.push(circuit.or(lits));
        }
    }
    let output = circuit.and(conj);
    if !free.is_empty() {
        prefix.insert(0, (Quant::Exists, free));
    }
    Ok(Qbf { num_vars: declared.max(max_seen), prefix, circuit, output })
}

/// Finds variables of the innermost existential block that are defined as
/// a conjunction by full equivalence clauses, builds those gates, and drops
/// the variables from the prefix. Returns the gate of each defined variable
/// and which clauses were consumed as definitions.
///
/// A definition may only use variables quantified outside the block or
/// defined before it in id order, so the gates form a DAG.
fn recover_gates(
    circuit: &mut Circuit,
    prefix: &mut Vec<(Quant, Vec<u32>)>,
    clauses: &[Vec<i64>],
) -> (HashMap<u32, Lit>, Vec<bool>) {
    let mut defined: HashMap<u32, Lit> = HashMap::new();
    let mut is_def = vec![false; clauses.len()];
    let Some((Quant::Exists, inner)) = prefix.last() else {
        return (defined, is_def);
    };
    let mut candidates: Vec<u32> = inner.clone();
    candidates.sort_unstable();
    let inner_set: BTreeSet<u32> = candidates.iter().copied().collect();

    let mut occurs: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, c) in clauses.iter().enumerate() {
        for &l in c {
            occurs.entry(l.unsigned_abs() as u32).or_default().push(i);
        }
    }
    for &v in &candidates {
        let Some(occ) = occurs.get(&v) else { continue };
        let vi = v as i64;
        // binary clauses `-v x`, by x
        let mut binary: HashMap<i64, usize> = HashMap::new();
        for &i in occ {
            if let [a, b] = clauses[i][..] {
                if a == -vi && b != vi && b != -vi {
                    binary.entry(b).or_insert(i);
                } else if b == -vi && a != vi && a != -vi {
                    binary.entry(a).or_insert(i);
                }
            }
        }
        let usable = |x: i64| {
            let xv = x.unsigned_abs() as u32;
            xv != v && (!inner_set.contains(&xv) || xv < v)
        };
        let long = occ
            .iter()
            .copied()
            .filter(|&i| {
                let c = &clauses[i];
                c.len() >= 2
                    && c.iter().filter(|&&l| l == vi).count() == 1
                    && c.iter().filter(|&&l| l != vi).all(|&l| binary.contains_key(&-l) && usable(-l))
            })
            .max_by_key(|&i| clauses[i].len());
        let Some(li) = long else { continue };
        let inputs: Vec<i64> = clauses[li].iter().filter(|&&l| l != vi).map(|&l| -l).collect();
        let lits: Vec<Lit> = inputs
            .iter()
            .map(|&x| {
                let xv = x.unsigned_abs() as u32;
                defined.get(&xv).copied().unwrap_or_else(|| circuit.var(xv)).with_sign(x < 0)
            })
            .collect();
        defined.insert(v, circuit.and(lits));
        is_def[li] = true;
        for x in &inputs {
            is_def[binary[x]] = true;
        }
    }
    if let Some((_, vs)) = prefix.last_mut() {
        vs.retain(|v| !defined.contains_key(v));
        if vs.is_empty() {
            prefix.pop();
        }
    }
    (defined, is_def)
}
