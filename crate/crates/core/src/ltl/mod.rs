//! Linear temporal logic with past operators.
//!
//! [`LtlFormula`] is the surface representation shared by the compiler,
//! the property files and the bounded engine. [`evaluate`] is the reference
//! semantics over ultimately periodic traces and serves as the judge for
//! every witness the engine produces.

mod eval;
mod nnf;
mod parse;
mod print;
mod trace;

use std::collections::BTreeSet;

pub use eval::{evaluate, evaluate_all, Valuation};
pub use nnf::{to_nnf, Nnf};
pub use parse::{parse_formula, FormulaParseError};
pub use trace::{LassoTrace, TraceError};

/// A formula tree over atomic propositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LtlFormula {
    Prop(String),
    True,
    False,
    Not(Box<LtlFormula>),
    And(Box<LtlFormula>, Box<LtlFormula>),
    Or(Box<LtlFormula>, Box<LtlFormula>),
    Implies(Box<LtlFormula>, Box<LtlFormula>),
    Iff(Box<LtlFormula>, Box<LtlFormula>),
    Next(Box<LtlFormula>),
    Prev(Box<LtlFormula>),
    Until(Box<LtlFormula>, Box<LtlFormula>),
    Since(Box<LtlFormula>, Box<LtlFormula>),
    Release(Box<LtlFormula>, Box<LtlFormula>),
    Trigger(Box<LtlFormula>, Box<LtlFormula>),
    Eventually(Box<LtlFormula>),
    Globally(Box<LtlFormula>),
}

/// Names reserved by the formula syntax; they cannot be used as propositions.
pub const RESERVED_WORDS: &[&str] = &["X", "Y", "U", "S", "R", "T", "F", "G", "true", "false"];

impl LtlFormula {
    pub fn prop(name: impl Into<String>) -> Self {
        LtlFormula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: LtlFormula) -> Self {
        LtlFormula::Not(Box::new(f))
    }

    pub fn and(l: LtlFormula, r: LtlFormula) -> Self {
        LtlFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: LtlFormula, r: LtlFormula) -> Self {
        LtlFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: LtlFormula, r: LtlFormula) -> Self {
        LtlFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: LtlFormula, r: LtlFormula) -> Self {
        LtlFormula::Iff(Box::new(l), Box::new(r))
    }

    pub fn next(f: LtlFormula) -> Self {
        LtlFormula::Next(Box::new(f))
    }

    pub fn prev(f: LtlFormula) -> Self {
        LtlFormula::Prev(Box::new(f))
    }

    pub fn until(l: LtlFormula, r: LtlFormula) -> Self {
        LtlFormula::Until(Box::new(l), Box::new(r))
    }

    pub fn since(l: LtlFormula, r: LtlFormula) -> Self {
        LtlFormula::Since(Box::new(l), Box::new(r))
    }

    pub fn release(l: LtlFormula, r: LtlFormula) -> Self {
        LtlFormula::Release(Box::new(l), Box::new(r))
    }

    pub fn trigger(l: LtlFormula, r: LtlFormula) -> Self {
        LtlFormula::Trigger(Box::new(l), Box::new(r))
    }

    pub fn eventually(f: LtlFormula) -> Self {
        LtlFormula::Eventually(Box::new(f))
    }

    pub fn globally(f: LtlFormula) -> Self {
        LtlFormula::Globally(Box::new(f))
    }

    /// Left-nested conjunction; the empty conjunction is `true`.
    pub fn conj(items: impl IntoIterator<Item = LtlFormula>) -> Self {
        items
            .into_iter()
            .reduce(LtlFormula::and)
            .unwrap_or(LtlFormula::True)
    }

    /// Left-nested disjunction; the empty disjunction is `false`.
    pub fn disj(items: impl IntoIterator<Item = LtlFormula>) -> Self {
        items
            .into_iter()
            .reduce(LtlFormula::or)
            .unwrap_or(LtlFormula::False)
    }

    /// The proposition names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            LtlFormula::Prop(p) => {
                out.insert(p.clone());
            }
            LtlFormula::True | LtlFormula::False => {}
            LtlFormula::Not(f)
            | LtlFormula::Next(f)
            | LtlFormula::Prev(f)
            | LtlFormula::Eventually(f)
            | LtlFormula::Globally(f) => f.collect_atoms(out),
            LtlFormula::And(l, r)
            | LtlFormula::Or(l, r)
            | LtlFormula::Implies(l, r)
            | LtlFormula::Iff(l, r)
            | LtlFormula::Until(l, r)
            | LtlFormula::Since(l, r)
            | LtlFormula::Release(l, r)
            | LtlFormula::Trigger(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Height of the syntax tree; propositions and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            LtlFormula::Prop(_) | LtlFormula::True | LtlFormula::False => 0,
            LtlFormula::Not(f)
            | LtlFormula::Next(f)
            | LtlFormula::Prev(f)
            | LtlFormula::Eventually(f)
            | LtlFormula::Globally(f) => 1 + f.depth(),
            LtlFormula::And(l, r)
            | LtlFormula::Or(l, r)
            | LtlFormula::Implies(l, r)
            | LtlFormula::Iff(l, r)
            | LtlFormula::Until(l, r)
            | LtlFormula::Since(l, r)
            | LtlFormula::Release(l, r)
            | LtlFormula::Trigger(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            LtlFormula::Prop(_) | LtlFormula::True | LtlFormula::False => 1,
            LtlFormula::Not(f)
            | LtlFormula::Next(f)
            | LtlFormula::Prev(f)
            | LtlFormula::Eventually(f)
            | LtlFormula::Globally(f) => 1 + f.size(),
            LtlFormula::And(l, r)
            | LtlFormula::Or(l, r)
            | LtlFormula::Implies(l, r)
            | LtlFormula::Iff(l, r)
            | LtlFormula::Until(l, r)
            | LtlFormula::Since(l, r)
            | LtlFormula::Release(l, r)
            | LtlFormula::Trigger(l, r) => 1 + l.size() + r.size(),
        }
    }
}
