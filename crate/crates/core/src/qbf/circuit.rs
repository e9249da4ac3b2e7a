//! Hash-consed and-inverter graph.
//!
//! Node 0 is the constant `true`; every other node is a variable or an
//! n-ary conjunction over literals. A literal is a node index shifted left
//! by one, with the low bit marking negation. Children always precede their
//! parents, so node order is a topological order.

use std::collections::HashMap;
use std::fmt;

use crate::model::{Atom, BoolExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub const TRUE: Lit = Lit(0);
    pub const FALSE: Lit = Lit(1);

    pub fn node(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    pub fn with_sign(self, neg: bool) -> Lit {
        if neg {
            self.negate()
        } else {
            self
        }
    }

    pub fn as_const(self) -> Option<bool> {
        match self {
            Lit::TRUE => Some(true),
            Lit::FALSE => Some(false),
            _ => None,
        }
    }

    pub fn raw(self) -> u32 {
        self.0
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        self.negate()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    Var(u32),
    And(Vec<Lit>),
}

#[derive(Clone, Debug)]
pub struct Circuit {
    nodes: Vec<Node>,
    index: HashMap<Node, u32>,
}

impl Default for Circuit {
    fn default() -> Self {
        Self::new()
    }
}

impl Circuit {
    pub fn new() -> Self {
        let mut index = HashMap::new();
        index.insert(Node::True, 0);
        Circuit { nodes: vec![Node::True], index }
    }

    fn intern(&mut self, node: Node) -> Lit {
        if let Some(&i) = self.index.get(&node) {
            return Lit(i << 1);
        }
        let i = self.nodes.len() as u32;
        self.nodes.push(node.clone());
        self.index.insert(node, i);
        Lit(i << 1)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, lit: Lit) -> &Node {
        &self.nodes[lit.node()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    /// Positive literal of variable `v` (1-based, as in QDIMACS).
    pub fn var(&mut self, v: u32) -> Lit {
        self.intern(Node::Var(v))
    }

    pub fn constant(b: bool) -> Lit {
        if b {
            Lit::TRUE
        } else {
            Lit::FALSE
        }
    }

    pub fn and(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let mut out: Vec<Lit> = Vec::new();
        for l in lits {
            match l {
                Lit::TRUE => {}
                Lit::FALSE => return Lit::FALSE,
                l => out.push(l),
            }
        }
        out.sort_unstable();
        out.dedup();
        // x and !x are adjacent after sorting
        if out.windows(2).any(|w| w[0].node() == w[1].node()) {
            return Lit::FALSE;
        }
        match out.len() {
            0 => Lit::TRUE,
            1 => out[0],
            _ => self.intern(Node::And(out)),
        }
    }

    pub fn or(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let neg: Vec<Lit> = lits.into_iter().map(Lit::negate).collect();
        !self.and(neg)
    }

    pub fn and2(&mut self, a: Lit, b: Lit) -> Lit {
        self.and([a, b])
    }

    pub fn or2(&mut self, a: Lit, b: Lit) -> Lit {
        self.or([a, b])
    }

    pub fn implies(&mut self, a: Lit, b: Lit) -> Lit {
        self.or([!a, b])
    }

    pub fn iff(&mut self, a: Lit, b: Lit) -> Lit {
        if a == b {
            return Lit::TRUE;
        }
        if a == !b {
            return Lit::FALSE;
        }
        let both = self.and2(a, b);
        let neither = self.and2(!a, !b);
        self.or2(both, neither)
    }

    pub fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        !self.iff(a, b)
    }

    pub fn ite(&mut self, c: Lit, t: Lit, e: Lit) -> Lit {
        let a = self.and2(c, t);
        let b = self.and2(!c, e);
        self.or2(a, b)
    }

    /// Builds `expr` with atoms mapped through `atom`.
    pub fn lower(&mut self, expr: &BoolExpr, atom: &mut impl FnMut(&mut Circuit, &Atom) -> Lit) -> Lit {
        match expr {
            BoolExpr::True => Lit::TRUE,
            BoolExpr::False => Lit::FALSE,
            BoolExpr::Atom(a) => atom(self, a),
            BoolExpr::Not(e) => !self.lower(e, atom),
            BoolExpr::And(es) => {
                let ls: Vec<Lit> = es.iter().map(|e| self.lower(e, atom)).collect();
                self.and(ls)
            }
            BoolExpr::Or(es) => {
                let ls: Vec<Lit> = es.iter().map(|e| self.lower(e, atom)).collect();
                self.or(ls)
            }
            BoolExpr::Implies(a, b) => {
                let (a, b) = (self.lower(a, atom), self.lower(b, atom));
                self.implies(a, b)
            }
            BoolExpr::Iff(a, b) => {
                let (a, b) = (self.lower(a, atom), self.lower(b, atom));
                self.iff(a, b)
            }
        }
    }

    /// Evaluates `root` under a total variable assignment.
    pub fn eval(&self, root: Lit, value: &impl Fn(u32) -> bool) -> bool {
        let mut val = vec![false; root.node() + 1];
        for n in self.cone(root) {
            val[n] = match &self.nodes[n] {
                Node::True => true,
                Node::Var(x) => value(*x),
                Node::And(ls) => ls.iter().all(|l| val[l.node()] ^ l.is_neg()),
            };
        }
        val[root.node()] ^ root.is_neg()
    }

    /// Nodes reachable from `root`, ascending (hence topological).
    pub fn cone(&self, root: Lit) -> Vec<usize> {
        let mut seen = vec![false; root.node() + 1];
        let mut stack = vec![root.node()];
        while let Some(n) = stack.pop() {
            if seen[n] {
                continue;
            }
            seen[n] = true;
            if let Node::And(ls) = &self.nodes[n] {
                stack.extend(ls.iter().map(|l| l.node()));
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }

    /// Variables occurring under `root`.
    pub fn support(&self, root: Lit) -> Vec<u32> {
        let mut vs: Vec<u32> = self
            .cone(root)
            .into_iter()
            .filter_map(|n| match self.nodes[n] {
                Node::Var(v) => Some(v),
                _ => None,
            })
            .collect();
        vs.sort_unstable();
        vs
    }

    /// Number of conjunction gates under `root`.
    pub fn gate_count(&self, root: Lit) -> usize {
        self.cone(root).into_iter().filter(|&n| matches!(self.nodes[n], Node::And(_))).count()
    }

    /// Copies the cone of `root` from `other` into `self`, renaming variables.
    pub fn import(&mut self, other: &Circuit, root: Lit, rename: &mut impl FnMut(&mut Circuit, u32) -> Lit) -> Lit {
        let mut map: HashMap<usize, Lit> = HashMap::new();
        for n in other.cone(root) {
            let lit = match &other.nodes[n] {
                Node::True => Lit::TRUE,
                Node::Var(v) => rename(self, *v),
                Node::And(ls) => {
                    let kids: Vec<Lit> = ls.iter().map(|l| map[&l.node()].with_sign(l.is_neg())).collect();
                    self.and(kids)
                }
            };
            map.insert(n, lit);
        }
        map[&root.node()].with_sign(root.is_neg())
    }

    pub fn display(&self, root: Lit) -> impl fmt::Display + '_ {
        Show { c: self, root }
    }
}

struct Show<'a> {
    c: &'a Circuit,
    root: Lit,
}

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = if self.root.is_neg() { "!" } else { "" };
        match self.c.node(self.root) {
            Node::True => write!(f, "{}", if self.root.is_neg() { "false" } else { "true" }),
            Node::Var(v) => write!(f, "{neg}x{v}"),
            Node::And(ls) => {
                write!(f, "{neg}(")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    write!(f, "{}", self.c.display(*l))?;
                }
                write!(f, ")")
            }
        }
    }
}
