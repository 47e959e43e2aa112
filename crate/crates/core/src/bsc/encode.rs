//! Propositional encoding of bounded lasso satisfiability.
//!
//! Positions run over `0..=k`; exactly one selector `l_j` (`0 <= j <= k`)
//! sends the successor of `k` back to `j`. A formula in negation normal
//! form is shared as a DAG. Past operators see a loop whose values settle
//! only after some passes, so each node of past depth `d` gets `d + 1`
//! copies of the positions, one per unrolling; the last copy stands for
//! every later pass. Crossing the seam moves a future operator to the next
//! copy and a past operator back to the previous one.
//!
//! Every node occurs positively, so each variable only implies its
//! definition. Until additionally needs its right argument somewhere in
//! the loop of the last copy, which rules out postponing forever.

use std::collections::HashMap;

use thiserror::Error;

use super::cnf::{CnfInstance, VarLabel};
use crate::ltl::{to_nnf, LtlFormula, Nnf};

/// Largest accepted bound. Keeps every index well inside `i32`.
pub const MAX_BOUND: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("bound {0} exceeds the supported maximum {MAX_BOUND}")]
    BoundTooLarge(usize),
    #[error("encoding needs more than {} variables", i32::MAX)]
    TooManyVariables,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(usize, bool),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    Prev(usize),
    WeakPrev(usize),
    Until(usize, usize),
    Since(usize, usize),
    Release(usize, usize),
    Trigger(usize, usize),
}

struct Dag {
    nodes: Vec<Node>,
    depth: Vec<usize>,
    index: HashMap<Node, usize>,
    props: Vec<String>,
    prop_index: HashMap<String, usize>,
}

impl Dag {
    fn intern(&mut self, n: &Nnf) -> usize {
        let node = match n {
            Nnf::True => Node::True,
            Nnf::False => Node::False,
            Nnf::Lit { name, positive } => Node::Lit(self.prop_index[name], *positive),
            Nnf::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            Nnf::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            Nnf::Next(a) => Node::Next(self.intern(a)),
            Nnf::Prev(a) => Node::Prev(self.intern(a)),
            Nnf::WeakPrev(a) => Node::WeakPrev(self.intern(a)),
            Nnf::Until(a, b) => Node::Until(self.intern(a), self.intern(b)),
            Nnf::Since(a, b) => Node::Since(self.intern(a), self.intern(b)),
            Nnf::Release(a, b) => Node::Release(self.intern(a), self.intern(b)),
            Nnf::Trigger(a, b) => Node::Trigger(self.intern(a), self.intern(b)),
        };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let d = |i: usize| self.depth[i];
        let depth = match node {
            Node::True | Node::False | Node::Lit(..) => 0,
            Node::Next(a) => d(a),
            Node::Prev(a) | Node::WeakPrev(a) => d(a) + 1,
            Node::And(a, b) | Node::Or(a, b) | Node::Until(a, b) | Node::Release(a, b) => {
                d(a).max(d(b))
            }
            Node::Since(a, b) | Node::Trigger(a, b) => d(a).max(d(b)) + 1,
        };
        let id = self.nodes.len();
        self.nodes.push(node);
        self.depth.push(depth);
        self.index.insert(node, id);
        id
    }

    fn describe(&self, id: usize) -> String {
        let n = |i: usize| format!("n{i}");
        match self.nodes[id] {
            Node::True => "true".into(),
            Node::False => "false".into(),
            Node::Lit(p, true) => self.props[p].clone(),
            Node::Lit(p, false) => format!("!{}", self.props[p]),
            Node::And(a, b) => format!("{} & {}", n(a), n(b)),
            Node::Or(a, b) => format!("{} | {}", n(a), n(b)),
            Node::Next(a) => format!("X {}", n(a)),
            Node::Prev(a) => format!("Y {}", n(a)),
            Node::WeakPrev(a) => format!("!Y !{}", n(a)),
            Node::Until(a, b) => format!("{} U {}", n(a), n(b)),
            Node::Since(a, b) => format!("{} S {}", n(a), n(b)),
            Node::Release(a, b) => format!("{} R {}", n(a), n(b)),
            Node::Trigger(a, b) => format!("{} T {}", n(a), n(b)),
        }
    }
}

struct Builder {
    k: usize,
    clauses: Vec<Vec<i32>>,
    labels: Vec<VarLabel>,
    truth: i32,
    /// `props[p][i]`
    props: Vec<Vec<i32>>,
    sel: Vec<i32>,
    in_loop: Vec<i32>,
    /// `vals[node][copy][pos]`
    vals: Vec<Vec<Vec<i32>>>,
}

impl Builder {
    fn var(&mut self, label: VarLabel) -> Result<i32, EncodeError> {
        if self.labels.len() >= i32::MAX as usize {
            return Err(EncodeError::TooManyVariables);
        }
        self.labels.push(label);
        Ok(self.labels.len() as i32)
    }

    fn clause(&mut self, lits: &[i32]) {
        self.clauses.push(lits.to_vec());
    }

    /// Value of `node` at `pos` in unrolling `copy`, clamped to its depth.
    fn val(&self, node: usize, pos: usize, copy: usize) -> i32 {
        let copies = &self.vals[node];
        copies[copy.min(copies.len() - 1)][pos]
    }
}

/// Encodes bounded lasso satisfiability of `formula` at position 0.
pub fn encode(formula: &LtlFormula, k: usize) -> Result<CnfInstance, EncodeError> {
    if k == 0 {
        return Err(EncodeError::ZeroBound);
    }
    if k > MAX_BOUND {
        return Err(EncodeError::BoundTooLarge(k));
    }
    let nnf = to_nnf(formula);
    let props: Vec<String> = formula.atoms().into_iter().collect();
    let mut dag = Dag {
        nodes: Vec::new(),
        depth: Vec::new(),
        index: HashMap::new(),
        prop_index: props.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect(),
        props,
    };
    let root = dag.intern(&nnf);

    let mut b = Builder {
        k,
        clauses: Vec::new(),
        labels: Vec::new(),
        truth: 0,
        props: Vec::new(),
        sel: Vec::new(),
        in_loop: Vec::new(),
        vals: Vec::with_capacity(dag.nodes.len()),
    };
    b.truth = b.var(VarLabel::Const)?;
    b.clause(&[b.truth]);
    for name in &dag.props {
        let mut row = Vec::with_capacity(k + 1);
        for pos in 0..=k {
            row.push(b.var(VarLabel::Prop {
                name: name.clone(),
                pos,
            })?);
        }
        b.props.push(row);
    }
    loop_constraints(&mut b)?;
    for id in 0..dag.nodes.len() {
        encode_node(&mut b, &dag, id)?;
    }
    let top = b.val(root, 0, 0);
    b.clause(&[top]);

    Ok(CnfInstance {
        clauses: b.clauses,
        labels: b.labels,
        nodes: (0..dag.nodes.len()).map(|i| dag.describe(i)).collect(),
        k: Some(k),
    })
}

fn loop_constraints(b: &mut Builder) -> Result<(), EncodeError> {
    let k = b.k;
    for j in 0..=k {
        let v = b.var(VarLabel::Loop(j))?;
        b.sel.push(v);
    }
    let sel = b.sel.clone();
    b.clause(&sel);
    for x in 0..sel.len() {
        for y in x + 1..sel.len() {
            b.clause(&[-sel[x], -sel[y]]);
        }
    }
    // in_loop_i <-> in_loop_{i-1} | l_i
    for i in 0..=k {
        let v = b.var(VarLabel::InLoop(i))?;
        if i == 0 {
            b.clause(&[-v, sel[0]]);
            b.clause(&[v, -sel[0]]);
        } else {
            let prev = b.in_loop[i - 1];
            b.clause(&[-v, prev, sel[i]]);
            b.clause(&[v, -prev]);
            b.clause(&[v, -sel[i]]);
        }
        b.in_loop.push(v);
    }
    Ok(())
}

fn encode_node(b: &mut Builder, dag: &Dag, id: usize) -> Result<(), EncodeError> {
    let k = b.k;
    let depth = dag.depth[id];
    let node = dag.nodes[id];
    let t = b.truth;

    // Allocate (or alias) the value of every position and copy first, so
    // that recursive definitions can refer to any of them.
    let mut vals = vec![vec![0i32; k + 1]; depth + 1];
    for (copy, row) in vals.iter_mut().enumerate() {
        for (pos, slot) in row.iter_mut().enumerate() {
            *slot = match node {
                Node::True => t,
                Node::False => -t,
                Node::Lit(p, positive) => {
                    let v = b.props[p][pos];
                    if positive {
                        v
                    } else {
                        -v
                    }
                }
                Node::Next(a) if pos < k => b.val(a, pos + 1, copy),
                Node::Prev(a) if copy == 0 => {
                    if pos == 0 {
                        -t
                    } else {
                        b.val(a, pos - 1, 0)
                    }
                }
                Node::WeakPrev(a) if copy == 0 => {
                    if pos == 0 {
                        t
                    } else {
                        b.val(a, pos - 1, 0)
                    }
                }
                _ => b.var(VarLabel::Node { node: id, pos, copy })?,
            };
        }
    }
    b.vals.push(vals);

    let last = depth;
    for copy in 0..=depth {
        for pos in 0..=k {
            let v = b.val(id, pos, copy);
            match node {
                Node::True | Node::False | Node::Lit(..) => {}
                Node::And(x, y) => {
                    let (x, y) = (b.val(x, pos, copy), b.val(y, pos, copy));
                    b.clause(&[-v, x]);
                    b.clause(&[-v, y]);
                }
                Node::Or(x, y) => {
                    let (x, y) = (b.val(x, pos, copy), b.val(y, pos, copy));
                    b.clause(&[-v, x, y]);
                }
                Node::Next(a) => {
                    if pos == k {
                        seam_successor(b, v, a, (copy + 1).min(last));
                    }
                }
                Node::Prev(a) | Node::WeakPrev(a) => {
                    if copy > 0 {
                        let weak = matches!(node, Node::WeakPrev(_));
                        past_link(b, v, a, pos, copy, weak);
                    }
                }
                Node::Until(x, y) => {
                    let (x, y) = (b.val(x, pos, copy), b.val(y, pos, copy));
                    let next = successor(b, id, pos, copy, last)?;
                    b.clause(&[-v, y, x]);
                    b.clause(&[-v, y, next]);
                }
                Node::Release(x, y) => {
                    let (x, y) = (b.val(x, pos, copy), b.val(y, pos, copy));
                    let next = successor(b, id, pos, copy, last)?;
                    b.clause(&[-v, y]);
                    b.clause(&[-v, x, next]);
                }
                Node::Since(x, y) | Node::Trigger(x, y) => {
                    let weak = matches!(node, Node::Trigger(..));
                    let (x, y) = (b.val(x, pos, copy), b.val(y, pos, copy));
                    let p = past_step(b, id, pos, copy, weak)?;
                    if weak {
                        b.clause(&[-v, y]);
                        b.clause(&[-v, x, p]);
                    } else {
                        b.clause(&[-v, y, x]);
                        b.clause(&[-v, y, p]);
                    }
                }
            }
        }
    }

    if let Node::Until(_, y) = node {
        // The last copy repeats forever: Until there needs its right
        // argument at some loop position.
        let mut acc = -t;
        for pos in 0..=k {
            let e = b.var(VarLabel::Eventuality { node: id, pos })?;
            let hit = b.val(y, pos, last);
            let inside = b.in_loop[pos];
            b.clause(&[-e, acc, inside]);
            b.clause(&[-e, acc, hit]);
            acc = e;
        }
        let at_k = b.val(id, k, last);
        b.clause(&[-at_k, acc]);
    }
    Ok(())
}

/// Literal for "the node holds at the successor of (pos, copy)".
fn successor(
    b: &mut Builder,
    id: usize,
    pos: usize,
    copy: usize,
    last: usize,
) -> Result<i32, EncodeError> {
    if pos < b.k {
        return Ok(b.val(id, pos + 1, copy));
    }
    let s = b.var(VarLabel::Seam { node: id, copy })?;
    seam_successor(b, s, id, (copy + 1).min(last));
    Ok(s)
}

/// `s` implies `target` holds at the loop entry of unrolling `copy`.
fn seam_successor(b: &mut Builder, s: i32, target: usize, copy: usize) {
    for j in 0..=b.k {
        let at = b.val(target, j, copy);
        let sel = b.sel[j];
        b.clause(&[-s, -sel, at]);
    }
}

/// Adds clauses making `v` imply that `target` held at the predecessor of
/// (pos, copy), with `copy >= 1`. At the loop entry the predecessor is
/// position k of the previous unrolling. Positions before the entry are
/// never visited in later unrollings, so position 0 off the entry is left
/// false (strong) or unconstrained (weak).
fn past_link(b: &mut Builder, v: i32, target: usize, pos: usize, copy: usize, weak: bool) {
    let sel = b.sel[pos];
    let from_seam = b.val(target, b.k, copy - 1);
    b.clause(&[-v, -sel, from_seam]);
    if pos > 0 {
        let inside = b.val(target, pos - 1, copy);
        b.clause(&[-v, sel, inside]);
    } else if !weak {
        b.clause(&[-v, sel]);
    }
}

/// Literal for the previous value of a Since/Trigger node itself.
fn past_step(
    b: &mut Builder,
    id: usize,
    pos: usize,
    copy: usize,
    weak: bool,
) -> Result<i32, EncodeError> {
    if copy == 0 {
        return Ok(match pos {
            0 if weak => b.truth,
            0 => -b.truth,
            _ => b.val(id, pos - 1, 0),
        });
    }
    let p = b.var(VarLabel::Pred { node: id, pos, copy })?;
    past_link(b, p, id, pos, copy, weak);
    Ok(p)
}
