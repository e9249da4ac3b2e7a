use std::collections::VecDeque;

use serde::Serialize;

use super::{eval_with, Atom, ModelError, SymbolicKripke};

/// One explicit state: the decoded value of each variable in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct State {
    pub values: Vec<u64>,
}

impl State {
    /// Looks up `atom` (primed or not) against this state's bits.
    fn bit(&self, model: &SymbolicKripke, atom: &Atom) -> Option<bool> {
        let idx = model.vars().iter().position(|v| v.name() == atom.var)?;
        Some(self.values[idx] >> atom.bit & 1 == 1)
    }
}

/// Explicit state graph of a (small) symbolic model.
#[derive(Clone, Debug, Serialize)]
pub struct ExplicitKripke {
    pub var_names: Vec<String>,
    pub states: Vec<State>,
    pub initial: Vec<usize>,
    pub edges: Vec<Vec<usize>>,
    /// Reachable states without a successor (totality lint).
    pub dead_ends: Vec<usize>,
}

impl ExplicitKripke {
    /// Indices of states reachable from an initial state, in BFS order.
    pub fn reachable_indices(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states.len()];
        let mut order = Vec::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &i in &self.initial {
            if !seen[i] {
                seen[i] = true;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &j in &self.edges[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        order
    }

    /// Restriction to reachable states, renumbered in BFS order.
    pub fn reachable(&self) -> ExplicitKripke {
        let order = self.reachable_indices();
        let mut renum = vec![usize::MAX; self.states.len()];
        for (new, &old) in order.iter().enumerate() {
            renum[old] = new;
        }
        let map =
            |v: &[usize]| -> Vec<usize> { v.iter().filter(|&&i| renum[i] != usize::MAX).map(|&i| renum[i]).collect() };
        ExplicitKripke {
            var_names: self.var_names.clone(),
            states: order.iter().map(|&i| self.states[i].clone()).collect(),
            initial: map(&self.initial),
            edges: order.iter().map(|&i| map(&self.edges[i])).collect(),
            dead_ends: map(&self.dead_ends),
        }
    }

    pub fn index_of(&self, values: &[u64]) -> Option<usize> {
        self.states.iter().position(|s| s.values == values)
    }

    /// All paths with `len` states starting in an initial state.
    pub fn paths(&self, len: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.initial.iter().map(|&i| vec![i]).collect();
        for _ in 1..len {
            out = out
                .into_iter()
                .flat_map(|p| {
                    let last = *p.last().unwrap();
                    self.edges[last].iter().map(move |&j| {
                        let mut q = p.clone();
                        q.push(j);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Human-readable dump of the totality lint, if any.
    pub fn totality_diagnostic(&self) -> Option<String> {
        if self.dead_ends.is_empty() {
            return None;
        }
        let list: Vec<String> = self.dead_ends.iter().map(|&i| self.describe(i)).collect();
        Some(format!("reachable states without successor: {}", list.join("; ")))
    }

    pub fn describe(&self, idx: usize) -> String {
        self.var_names
            .iter()
            .zip(&self.states[idx].values)
            .map(|(n, v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Enumerates every domain-respecting state of `model` with its successors.
pub fn enumerate_states(model: &SymbolicKripke, max_states: usize) -> Result<ExplicitKripke, ModelError> {
    let size: u128 = model.vars().iter().map(|v| v.domain_size() as u128).product();
    if size > max_states as u128 {
        return Err(ModelError::TooManyStates { size, limit: max_states });
    }
    let mut states = vec![State { values: Vec::new() }];
    for v in model.vars() {
        states = states
            .into_iter()
            .flat_map(|s| {
                (v.lo()..=v.hi()).map(move |x| {
                    let mut values = s.values.clone();
                    values.push(x);
                    State { values }
                })
            })
            .collect();
    }

    let init = model.init();
    let trans = model.trans();
    let mut initial = Vec::new();
    for (i, s) in states.iter().enumerate() {
        if eval_with(init, &mut |a| s.bit(model, a))? {
            initial.push(i);
        }
    }
    let mut edges = vec![Vec::new(); states.len()];
    for (i, s) in states.iter().enumerate() {
        for (j, t) in states.iter().enumerate() {
            let ok = eval_with(trans, &mut |a| {
                if a.primed {
                    t.bit(model, a)
                } else {
                    s.bit(model, a)
                }
            })?;
            if ok {
                edges[i].push(j);
            }
        }
    }
    let mut kripke = ExplicitKripke {
        var_names: model.vars().iter().map(|v| v.name().to_string()).collect(),
        states,
        initial,
        edges,
        dead_ends: Vec::new(),
    };
    kripke.dead_ends = kripke.reachable_indices().into_iter().filter(|&i| kripke.edges[i].is_empty()).collect();
    kripke.dead_ends.sort_unstable();
    Ok(kripke)
}
