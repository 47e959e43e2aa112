use std::collections::BTreeSet;
use std::fmt;

use crate::ltl::LassoTrace;

/// What a CNF variable stands for. Every variable has exactly one label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VarLabel {
    /// The constant true.
    Const,
    /// Proposition `name` at position `pos`.
    Prop { name: String, pos: usize },
    /// Loop selector: the successor of position k is position `j`.
    Loop(usize),
    /// Position `pos` lies inside the loop.
    InLoop(usize),
    /// Formula node `node` at position `pos` of loop unrolling `copy`.
    Node { node: usize, pos: usize, copy: usize },
    /// Successor value of an X/U/R node across the seam at position k.
    Seam { node: usize, copy: usize },
    /// Predecessor value of a Y/S/T node at a possible loop entry.
    Pred { node: usize, pos: usize, copy: usize },
    /// Eventuality accumulator of an Until node up to position `pos`.
    Eventuality { node: usize, pos: usize },
    /// A variable with no recorded meaning (e.g. after import).
    Unknown,
}

impl fmt::Display for VarLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarLabel::Const => write!(f, "const"),
            VarLabel::Prop { name, pos } => write!(f, "prop {name} {pos}"),
            VarLabel::Loop(j) => write!(f, "loop {j}"),
            VarLabel::InLoop(i) => write!(f, "inloop {i}"),
            VarLabel::Node { node, pos, copy } => write!(f, "node {node} {pos} {copy}"),
            VarLabel::Seam { node, copy } => write!(f, "seam {node} {copy}"),
            VarLabel::Pred { node, pos, copy } => write!(f, "pred {node} {pos} {copy}"),
            VarLabel::Eventuality { node, pos } => write!(f, "ev {node} {pos}"),
            VarLabel::Unknown => write!(f, "unknown"),
        }
    }
}

impl VarLabel {
    /// Inverse of `Display`; anything unrecognised is `None`.
    pub fn parse(text: &str) -> Option<VarLabel> {
        let parts: Vec<&str> = text.split_whitespace().collect();
        let n = |i: usize| parts.get(i).and_then(|s| s.parse::<usize>().ok());
        Some(match parts.first()? {
            &"const" if parts.len() == 1 => VarLabel::Const,
            &"prop" if parts.len() == 3 => VarLabel::Prop {
                name: parts[1].to_string(),
                pos: n(2)?,
            },
            &"loop" if parts.len() == 2 => VarLabel::Loop(n(1)?),
            &"inloop" if parts.len() == 2 => VarLabel::InLoop(n(1)?),
            &"node" if parts.len() == 4 => VarLabel::Node {
                node: n(1)?,
                pos: n(2)?,
                copy: n(3)?,
            },
            &"seam" if parts.len() == 3 => VarLabel::Seam {
                node: n(1)?,
                copy: n(2)?,
            },
            &"pred" if parts.len() == 4 => VarLabel::Pred {
                node: n(1)?,
                pos: n(2)?,
                copy: n(3)?,
            },
            &"ev" if parts.len() == 3 => VarLabel::Eventuality {
                node: n(1)?,
                pos: n(2)?,
            },
            &"unknown" if parts.len() == 1 => VarLabel::Unknown,
            _ => return None,
        })
    }
}

/// A propositional instance in DIMACS literal convention, with the map
/// needed to read a lasso back out of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    pub(crate) clauses: Vec<Vec<i32>>,
    /// `labels[v - 1]` describes variable `v`.
    pub(crate) labels: Vec<VarLabel>,
    /// Human-readable definition of each formula node.
    pub(crate) nodes: Vec<String>,
    pub(crate) k: Option<usize>,
}

impl CnfInstance {
    /// An instance without decode information.
    pub fn from_clauses(num_vars: usize, clauses: Vec<Vec<i32>>) -> Self {
        CnfInstance {
            clauses,
            labels: vec![VarLabel::Unknown; num_vars],
            nodes: Vec::new(),
            k: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.labels.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn labels(&self) -> &[VarLabel] {
        &self.labels
    }

    pub fn label(&self, var: usize) -> Option<&VarLabel> {
        var.checked_sub(1).and_then(|i| self.labels.get(i))
    }

    pub fn node_definitions(&self) -> &[String] {
        &self.nodes
    }

    /// The bound the instance was built for, if known.
    pub fn bound(&self) -> Option<usize> {
        self.k
    }

    /// Reads the lasso selected by a model (indexed by variable − 1).
    /// `None` when the labels do not describe exactly one chosen loop.
    pub fn decode(&self, model: &[bool]) -> Option<LassoTrace> {
        let k = self.k?;
        let mut loop_at = None;
        let mut rows: Vec<BTreeSet<String>> = vec![BTreeSet::new(); k + 1];
        for (i, label) in self.labels.iter().enumerate() {
            let value = *model.get(i)?;
            match label {
                VarLabel::Loop(j) if value => {
                    if loop_at.replace(*j).is_some() {
                        return None;
                    }
                }
                VarLabel::Prop { name, pos } if value => {
                    rows.get_mut(*pos)?.insert(name.clone());
                }
                _ => {}
            }
        }
        let j = loop_at?;
        if j > k {
            return None;
        }
        let cycle = rows.split_off(j);
        LassoTrace::new(rows, cycle).ok()
    }
}
