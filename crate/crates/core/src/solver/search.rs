//! Search-based QBF decision procedure on the circuit.
//!
//! Variables are branched in prefix order. Before each branch the matrix is
//! evaluated in three-valued logic under the partial assignment, and
//! literals that the matrix needs for a given outcome are propagated:
//! a variable needed for `true` is fixed to that value if existential, and
//! refutes the node if universal; dually for `false`. At the first node of a
//! new block, the cofactor is summarized by the values on the border between
//! decided and undecided gates and looked up in a memo table.

use std::collections::HashMap;
use web_time::Instant;

use super::{SolveError, SolveResult, SolveStats, SolverConfig, Status};
use crate::qbf::{Lit, Node, Qbf, Quant};

const UNKNOWN: u8 = 2;
const MEMO_LIMIT: usize = 1 << 20;

struct Search<'a> {
    q: &'a Qbf,
    cfg: &'a SolverConfig,
    /// Variables in prefix order with their block index.
    order: Vec<(u32, usize)>,
    block_quant: Vec<Quant>,
    /// Per variable: index into `order`.
    pos: HashMap<u32, usize>,
    assign: Vec<u8>,
    trail: Vec<usize>,
    cone: Vec<usize>,
    val: Vec<u8>,
    want: Vec<u8>,
    memo: HashMap<(usize, Vec<u32>), bool>,
    /// Variables of the leading block run and the value that makes them a certificate.
    lead: Vec<usize>,
    lead_target: bool,
    lead_end: usize,
    certificate: Option<Vec<bool>>,
    stats: SolveStats,
}

impl<'a> Search<'a> {
    fn new(q: &'a Qbf, cfg: &'a SolverConfig) -> Self {
        let blocks = q.normalized_prefix();
        let mut order = Vec::new();
        let mut block_quant = Vec::new();
        for (b, (quant, vs)) in blocks.iter().enumerate() {
            block_quant.push(*quant);
            order.extend(vs.iter().map(|&v| (v, b)));
        }
        let pos = order.iter().enumerate().map(|(i, &(v, _))| (v, i)).collect();
        let lead_end = blocks.first().map_or(0, |(_, vs)| vs.len());
        let cone = q.circuit.cone(q.output);
        let n = q.output.node() + 1;
        Search {
            q,
            cfg,
            lead: (0..lead_end).collect(),
            lead_target: blocks.first().is_some_and(|(quant, _)| *quant == Quant::Exists),
            lead_end,
            assign: vec![UNKNOWN; order.len()],
            order,
            block_quant,
            pos,
            trail: Vec::new(),
            cone,
            val: vec![UNKNOWN; n],
            want: vec![UNKNOWN; n],
            memo: HashMap::new(),
            certificate: None,
            stats: SolveStats::default(),
        }
    }

    fn quant(&self, i: usize) -> Quant {
        self.block_quant[self.order[i].1]
    }

    fn set(&mut self, i: usize, b: bool) {
        self.assign[i] = b as u8;
        self.trail.push(i);
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().unwrap();
            self.assign[i] = UNKNOWN;
        }
    }

    fn lit_val(&self, l: Lit) -> u8 {
        match self.val[l.node()] {
            UNKNOWN => UNKNOWN,
            v => v ^ l.is_neg() as u8,
        }
    }

    /// Three-valued evaluation of the cone; returns the output's value.
    fn eval(&mut self) -> u8 {
        for idx in 0..self.cone.len() {
            let n = self.cone[idx];
            self.val[n] = match &self.q.circuit.nodes()[n] {
                Node::True => 1,
                Node::Var(v) => self.assign[self.pos[v]],
                Node::And(kids) => {
                    let mut out = 1;
                    for &k in kids {
                        match self.lit_val(k) {
                            0 => {
                                out = 0;
                                break;
                            }
                            UNKNOWN => out = UNKNOWN,
                            _ => {}
                        }
                    }
                    out
                }
            };
        }
        self.lit_val(self.q.output)
    }

    /// Literals the output needs to take value `target`; `None` on a clash.
    fn required(&mut self, target: bool) -> Option<Vec<(usize, bool)>> {
        for &n in &self.cone {
            self.want[n] = UNKNOWN;
        }
        let out = self.q.output;
        self.want[out.node()] = (target ^ out.is_neg()) as u8;
        let mut found = Vec::new();
        for idx in (0..self.cone.len()).rev() {
            let n = self.cone[idx];
            let w = self.want[n];
            if w == UNKNOWN || self.val[n] != UNKNOWN {
                continue;
            }
            match &self.q.circuit.nodes()[n] {
                Node::Var(v) => found.push((self.pos[v], w == 1)),
                Node::And(kids) => {
                    let pushes: Vec<Lit> = if w == 1 {
                        kids.clone()
                    } else {
                        // a false conjunction with one open input forces it false
                        let mut open = kids.iter().filter(|&&k| self.lit_val(k) == UNKNOWN);
                        match (open.next(), open.next()) {
                            (Some(&k), None) => vec![!k],
                            _ => vec![],
                        }
                    };
                    for k in pushes {
                        if self.lit_val(k) != UNKNOWN {
                            continue;
                        }
                        let want = (!k.is_neg()) as u8;
                        let slot = &mut self.want[k.node()];
                        if *slot == UNKNOWN {
                            *slot = want;
                        } else if *slot != want {
                            return None;
                        }
                    }
                }
                Node::True => {}
            }
        }
        Some(found)
    }

    /// Evaluates and propagates to a fixpoint; `Some` once the value is known.
    fn propagate(&mut self) -> Option<bool> {
        loop {
            match self.eval() {
                UNKNOWN => {}
                v => return Some(v == 1),
            }
            if !self.cfg.propagate {
                return None;
            }
            let mut changed = false;
            for target in [true, false] {
                let Some(req) = self.required(target) else {
                    return Some(!target);
                };
                for (i, b) in req {
                    // the player owning the variable picks the side it prefers
                    let owner_wants_target = (self.quant(i) == Quant::Exists) == target;
                    let value = if owner_wants_target { b } else { !b };
                    if self.assign[i] == UNKNOWN {
                        self.set(i, value);
                        self.stats.propagations += 1;
                        changed = true;
                    }
                }
                if changed {
                    break;
                }
            }
            if !changed {
                return None;
            }
        }
    }

    fn lead_assigned(&self) -> bool {
        self.lead.iter().all(|&i| self.assign[i] != UNKNOWN)
    }

    fn snapshot(&mut self) {
        self.certificate = Some(self.lead.iter().map(|&i| self.assign[i] == 1).collect());
    }

    /// Border of the decided region: decided inputs of undecided gates.
    fn memo_key(&self) -> Vec<u32> {
        let mut key = Vec::new();
        for &n in &self.cone {
            if self.val[n] != UNKNOWN {
                continue;
            }
            if let Node::And(kids) = &self.q.circuit.nodes()[n] {
                for &k in kids {
                    if self.val[k.node()] != UNKNOWN {
                        key.push((k.node() as u32) << 1 | self.val[k.node()] as u32);
                    }
                }
            }
        }
        key.sort_unstable();
        key.dedup();
        key
    }

    fn solve(&mut self, from: usize) -> Result<bool, SolveError> {
        let mark = self.trail.len();
        let result = self.solve_inner(from);
        if let Ok(r) = result {
            if r == self.lead_target && self.lead_assigned() {
                self.snapshot();
            }
        }
        self.undo(mark);
        result
    }

    fn solve_inner(&mut self, from: usize) -> Result<bool, SolveError> {
        if let Some(v) = self.propagate() {
            if v == self.lead_target && !self.lead_assigned() {
                // any completion works: the matrix is decided already
                let fill: Vec<bool> = self.lead.iter().map(|&i| self.assign[i] == 1).collect();
                self.certificate = Some(fill);
            }
            return Ok(v);
        }
        let Some(i) = (from..self.order.len()).find(|&i| self.assign[i] == UNKNOWN) else {
            unreachable!("a total assignment decides the matrix");
        };
        let block = self.order[i].1;
        let entering = from == 0 || self.order[from - 1].1 != block;
        let memo_key = if self.cfg.memo && entering && i >= self.lead_end {
            let key = (block, self.memo_key());
            if let Some(&v) = self.memo.get(&key) {
                self.stats.memo_hits += 1;
                return Ok(v);
            }
            Some(key)
        } else {
            None
        };
        let exists = self.quant(i) == Quant::Exists;
        let mut result = !exists;
        for b in [true, false] {
            self.stats.decisions += 1;
            if self.cfg.budget.is_some_and(|limit| self.stats.decisions > limit) {
                return Err(SolveError::BudgetExceeded { decisions: self.stats.decisions - 1 });
            }
            let mark = self.trail.len();
            self.set(i, b);
            let r = self.solve(i + 1);
            self.undo(mark);
            if r? == exists {
                result = exists;
                break;
            }
        }
        if let Some(key) = memo_key {
            if self.memo.len() >= MEMO_LIMIT {
                self.memo.clear();
            }
            self.memo.insert(key, result);
        }
        Ok(result)
    }
}

pub fn solve(q: &Qbf, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    q.check_closed().map_err(SolveError::Instance)?;
    let start = Instant::now();
    let mut s = Search::new(q, cfg);
    let sat = s.solve(0)?;
    s.stats.time_ms = start.elapsed().as_secs_f64() * 1e3;
    let certificate = if sat == s.lead_target && !s.lead.is_empty() {
        let bits = s.certificate.clone().expect("a matching result records its leading assignment");
        Some(s.lead.iter().zip(bits).map(|(&i, b)| (s.order[i].0, b)).collect())
    } else {
        None
    };
    Ok(SolveResult { status: if sat { Status::Sat } else { Status::Unsat }, certificate, stats: s.stats })
}
