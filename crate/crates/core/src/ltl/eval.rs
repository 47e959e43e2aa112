//! Reference interpreter over lasso traces.
//!
//! Each subformula is evaluated to a [`Valuation`]: its truth value at every
//! position, stored as an ultimately periodic bit string whose period is the
//! trace's loop length. Future operators keep the prefix length of their
//! arguments; past operators may lengthen it because their value on the
//! loop can take a few loop passes to settle.

use super::{LassoTrace, LtlFormula};

/// Truth values of one formula at every position of a lasso.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    prefix_len: usize,
    loop_len: usize,
    bits: Vec<bool>,
}

impl Valuation {
    fn constant(value: bool, loop_len: usize) -> Self {
        Valuation {
            prefix_len: 0,
            loop_len,
            bits: vec![value; loop_len],
        }
    }

    /// Value at an arbitrary position of the infinite word.
    pub fn get(&self, i: usize) -> bool {
        if i < self.prefix_len {
            self.bits[i]
        } else {
            self.bits[self.prefix_len + (i - self.prefix_len) % self.loop_len]
        }
    }

    /// Positions before which the value is not yet known to be periodic.
    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    /// Re-expresses the valuation with a longer prefix.
    fn widen(&self, prefix_len: usize) -> Valuation {
        debug_assert!(prefix_len >= self.prefix_len);
        Valuation {
            prefix_len,
            loop_len: self.loop_len,
            bits: (0..prefix_len + self.loop_len).map(|i| self.get(i)).collect(),
        }
    }

    fn pointwise(a: &Valuation, b: &Valuation, op: impl Fn(bool, bool) -> bool) -> Valuation {
        let p = a.prefix_len.max(b.prefix_len);
        let (a, b) = (a.widen(p), b.widen(p));
        Valuation {
            prefix_len: p,
            loop_len: a.loop_len,
            bits: a.bits.iter().zip(&b.bits).map(|(&x, &y)| op(x, y)).collect(),
        }
    }

    fn map(&self, op: impl Fn(bool) -> bool) -> Valuation {
        Valuation {
            prefix_len: self.prefix_len,
            loop_len: self.loop_len,
            bits: self.bits.iter().map(|&b| op(b)).collect(),
        }
    }
}

/// `π, i ⊨ φ` on the infinite word denoted by `trace`.
pub fn evaluate(formula: &LtlFormula, trace: &LassoTrace, i: usize) -> bool {
    evaluate_all(formula, trace).get(i)
}

/// The truth value of `formula` at every position of `trace`.
pub fn evaluate_all(formula: &LtlFormula, trace: &LassoTrace) -> Valuation {
    let loop_len = trace.loop_len();
    match formula {
        LtlFormula::Prop(p) => Valuation {
            prefix_len: trace.prefix_len(),
            loop_len,
            bits: (0..trace.total_len()).map(|i| trace.holds(p, i)).collect(),
        },
        LtlFormula::True => Valuation::constant(true, loop_len),
        LtlFormula::False => Valuation::constant(false, loop_len),
        LtlFormula::Not(f) => evaluate_all(f, trace).map(|b| !b),
        LtlFormula::And(l, r) => {
            Valuation::pointwise(&evaluate_all(l, trace), &evaluate_all(r, trace), |a, b| a && b)
        }
        LtlFormula::Or(l, r) => {
            Valuation::pointwise(&evaluate_all(l, trace), &evaluate_all(r, trace), |a, b| a || b)
        }
        LtlFormula::Implies(l, r) => {
            Valuation::pointwise(&evaluate_all(l, trace), &evaluate_all(r, trace), |a, b| !a || b)
        }
        LtlFormula::Iff(l, r) => {
            Valuation::pointwise(&evaluate_all(l, trace), &evaluate_all(r, trace), |a, b| a == b)
        }
        LtlFormula::Next(f) => next(&evaluate_all(f, trace)),
        LtlFormula::Prev(f) => prev(&evaluate_all(f, trace)),
        LtlFormula::Until(l, r) => future_fixpoint(
            &evaluate_all(l, trace),
            &evaluate_all(r, trace),
            Fixpoint::Until,
        ),
        LtlFormula::Release(l, r) => future_fixpoint(
            &evaluate_all(l, trace),
            &evaluate_all(r, trace),
            Fixpoint::Release,
        ),
        LtlFormula::Eventually(f) => future_fixpoint(
            &Valuation::constant(true, loop_len),
            &evaluate_all(f, trace),
            Fixpoint::Until,
        ),
        LtlFormula::Globally(f) => future_fixpoint(
            &Valuation::constant(false, loop_len),
            &evaluate_all(f, trace),
            Fixpoint::Release,
        ),
        LtlFormula::Since(l, r) => past_fixpoint(
            &evaluate_all(l, trace),
            &evaluate_all(r, trace),
            Fixpoint::Until,
        ),
        LtlFormula::Trigger(l, r) => past_fixpoint(
            &evaluate_all(l, trace),
            &evaluate_all(r, trace),
            Fixpoint::Release,
        ),
    }
}

#[derive(Clone, Copy)]
enum Fixpoint {
    /// `ψ ∨ (φ ∧ ∘)`, least fixpoint.
    Until,
    /// `ψ ∧ (φ ∨ ∘)`, greatest fixpoint.
    Release,
}

impl Fixpoint {
    fn step(self, lhs: bool, rhs: bool, carried: bool) -> bool {
        match self {
            Fixpoint::Until => rhs || (lhs && carried),
            Fixpoint::Release => rhs && (lhs || carried),
        }
    }

    fn seed(self) -> bool {
        matches!(self, Fixpoint::Release)
    }
}

fn next(child: &Valuation) -> Valuation {
    let p = child.prefix_len;
    Valuation {
        prefix_len: p,
        loop_len: child.loop_len,
        bits: (0..p + child.loop_len).map(|i| child.get(i + 1)).collect(),
    }
}

fn prev(child: &Valuation) -> Valuation {
    // Y φ at i is φ at i-1, so periodicity starts one position later.
    let p = child.prefix_len + 1;
    Valuation {
        prefix_len: p,
        loop_len: child.loop_len,
        bits: (0..p + child.loop_len)
            .map(|i| i > 0 && child.get(i - 1))
            .collect(),
    }
}

fn future_fixpoint(lhs: &Valuation, rhs: &Valuation, kind: Fixpoint) -> Valuation {
    let p = lhs.prefix_len.max(rhs.prefix_len);
    let l = lhs.loop_len;
    let (lhs, rhs) = (lhs.widen(p), rhs.widen(p));
    let mut bits = vec![kind.seed(); p + l];
    // Iterate backwards around the loop from the extremal seed until stable;
    // monotonicity bounds this by a couple of passes.
    loop {
        let mut changed = false;
        let mut carried = bits[p];
        for i in (p..p + l).rev() {
            let v = kind.step(lhs.bits[i], rhs.bits[i], carried);
            changed |= v != bits[i];
            bits[i] = v;
            carried = v;
        }
        if !changed {
            break;
        }
    }
    for i in (0..p).rev() {
        bits[i] = kind.step(lhs.bits[i], rhs.bits[i], bits[i + 1]);
    }
    Valuation {
        prefix_len: p,
        loop_len: l,
        bits,
    }
}

fn past_fixpoint(lhs: &Valuation, rhs: &Valuation, kind: Fixpoint) -> Valuation {
    let p = lhs.prefix_len.max(rhs.prefix_len);
    let l = lhs.loop_len;
    // Before position 0 a Since is false and a Trigger is true.
    let mut carried = kind.seed();
    let mut bits = Vec::with_capacity(p + 2 * l);
    for i in 0..p {
        carried = kind.step(lhs.get(i), rhs.get(i), carried);
        bits.push(carried);
    }
    // Unroll whole loop passes until the value entering a pass repeats; from
    // then on every pass is identical. The step is monotone in the carried
    // bit, so the entry value settles after at most two passes.
    let mut pass = 0;
    loop {
        let entry = carried;
        let start = bits.len();
        for i in start..start + l {
            carried = kind.step(lhs.get(i), rhs.get(i), carried);
            bits.push(carried);
        }
        if carried == entry {
            return Valuation {
                prefix_len: p + pass * l,
                loop_len: l,
                bits,
            };
        }
        pass += 1;
        assert!(pass <= 2, "past operator failed to stabilize on the loop");
    }
}
