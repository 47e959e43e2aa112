//! Negation normal form.
//!
//! Negations are pushed onto propositions using the usual dualities. The
//! negation of `Y φ` needs the weak previous operator `Z`, true at
//! position 0; it exists only here and has no surface syntax.

use std::fmt;

use super::LtlFormula;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nnf {
    True,
    False,
    Lit { name: String, positive: bool },
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Next(Box<Nnf>),
    Prev(Box<Nnf>),
    /// `Z φ ≡ ¬Y¬φ`.
    WeakPrev(Box<Nnf>),
    Until(Box<Nnf>, Box<Nnf>),
    Since(Box<Nnf>, Box<Nnf>),
    Release(Box<Nnf>, Box<Nnf>),
    Trigger(Box<Nnf>, Box<Nnf>),
}

pub fn to_nnf(formula: &LtlFormula) -> Nnf {
    push(formula, true)
}

fn b(n: Nnf) -> Box<Nnf> {
    Box::new(n)
}

fn push(f: &LtlFormula, positive: bool) -> Nnf {
    use LtlFormula as L;
    match f {
        L::Prop(name) => Nnf::Lit {
            name: name.clone(),
            positive,
        },
        L::True => {
            if positive {
                Nnf::True
            } else {
                Nnf::False
            }
        }
        L::False => {
            if positive {
                Nnf::False
            } else {
                Nnf::True
            }
        }
        L::Not(x) => push(x, !positive),
        L::And(l, r) => {
            let (l, r) = (push(l, positive), push(r, positive));
            if positive {
                Nnf::And(b(l), b(r))
            } else {
                Nnf::Or(b(l), b(r))
            }
        }
        L::Or(l, r) => {
            let (l, r) = (push(l, positive), push(r, positive));
            if positive {
                Nnf::Or(b(l), b(r))
            } else {
                Nnf::And(b(l), b(r))
            }
        }
        L::Implies(l, r) => {
            if positive {
                Nnf::Or(b(push(l, false)), b(push(r, true)))
            } else {
                Nnf::And(b(push(l, true)), b(push(r, false)))
            }
        }
        L::Iff(l, r) => {
            let (lp, ln, rp, rn) = (push(l, true), push(l, false), push(r, true), push(r, false));
            if positive {
                Nnf::Or(b(Nnf::And(b(lp), b(rp))), b(Nnf::And(b(ln), b(rn))))
            } else {
                Nnf::Or(b(Nnf::And(b(lp), b(rn))), b(Nnf::And(b(ln), b(rp))))
            }
        }
        L::Next(x) => Nnf::Next(b(push(x, positive))),
        L::Prev(x) => {
            if positive {
                Nnf::Prev(b(push(x, true)))
            } else {
                Nnf::WeakPrev(b(push(x, false)))
            }
        }
        L::Until(l, r) => {
            let (l, r) = (push(l, positive), push(r, positive));
            if positive {
                Nnf::Until(b(l), b(r))
            } else {
                Nnf::Release(b(l), b(r))
            }
        }
        L::Release(l, r) => {
            let (l, r) = (push(l, positive), push(r, positive));
            if positive {
                Nnf::Release(b(l), b(r))
            } else {
                Nnf::Until(b(l), b(r))
            }
        }
        L::Since(l, r) => {
            let (l, r) = (push(l, positive), push(r, positive));
            if positive {
                Nnf::Since(b(l), b(r))
            } else {
                Nnf::Trigger(b(l), b(r))
            }
        }
        L::Trigger(l, r) => {
            let (l, r) = (push(l, positive), push(r, positive));
            if positive {
                Nnf::Trigger(b(l), b(r))
            } else {
                Nnf::Since(b(l), b(r))
            }
        }
        L::Eventually(x) => {
            if positive {
                Nnf::Until(b(Nnf::True), b(push(x, true)))
            } else {
                Nnf::Release(b(Nnf::False), b(push(x, false)))
            }
        }
        L::Globally(x) => {
            if positive {
                Nnf::Release(b(Nnf::False), b(push(x, true)))
            } else {
                Nnf::Until(b(Nnf::True), b(push(x, false)))
            }
        }
    }
}

impl Nnf {
    /// Back to the surface representation, with `Z φ` spelled `!Y !φ`.
    pub fn to_formula(&self) -> LtlFormula {
        use LtlFormula as L;
        match self {
            Nnf::True => L::True,
            Nnf::False => L::False,
            Nnf::Lit { name, positive } => {
                if *positive {
                    L::prop(name.clone())
                } else {
                    L::not(L::prop(name.clone()))
                }
            }
            Nnf::And(l, r) => L::and(l.to_formula(), r.to_formula()),
            Nnf::Or(l, r) => L::or(l.to_formula(), r.to_formula()),
            Nnf::Next(x) => L::next(x.to_formula()),
            Nnf::Prev(x) => L::prev(x.to_formula()),
            Nnf::WeakPrev(x) => L::not(L::prev(L::not(x.to_formula()))),
            Nnf::Until(l, r) => L::until(l.to_formula(), r.to_formula()),
            Nnf::Since(l, r) => L::since(l.to_formula(), r.to_formula()),
            Nnf::Release(l, r) => L::release(l.to_formula(), r.to_formula()),
            Nnf::Trigger(l, r) => L::trigger(l.to_formula(), r.to_formula()),
        }
    }

    /// Maximum nesting of past operators (`Y`, `Z`, `S`, `T`).
    pub fn past_depth(&self) -> usize {
        match self {
            Nnf::True | Nnf::False | Nnf::Lit { .. } => 0,
            Nnf::Next(x) => x.past_depth(),
            Nnf::Prev(x) | Nnf::WeakPrev(x) => 1 + x.past_depth(),
            Nnf::And(l, r) | Nnf::Or(l, r) | Nnf::Until(l, r) | Nnf::Release(l, r) => {
                l.past_depth().max(r.past_depth())
            }
            Nnf::Since(l, r) | Nnf::Trigger(l, r) => 1 + l.past_depth().max(r.past_depth()),
        }
    }
}

impl fmt::Display for Nnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_formula;

    fn nnf(s: &str) -> Nnf {
        to_nnf(&parse_formula(s).unwrap())
    }

    fn lit(n: &str, positive: bool) -> Box<Nnf> {
        Box::new(Nnf::Lit {
            name: n.into(),
            positive,
        })
    }

    #[test]
    fn negated_until_becomes_release() {
        assert_eq!(nnf("!(p U q)"), Nnf::Release(lit("p", false), lit("q", false)));
    }

    #[test]
    fn negated_globally_becomes_eventually() {
        assert_eq!(nnf("!G p"), nnf("F !p"));
        assert_eq!(nnf("!G p"), Nnf::Until(Box::new(Nnf::True), lit("p", false)));
    }

    #[test]
    fn negated_previous_is_weak() {
        assert_eq!(nnf("!Y p"), Nnf::WeakPrev(lit("p", false)));
        assert_eq!(nnf("!(p S q)"), Nnf::Trigger(lit("p", false), lit("q", false)));
    }

    #[test]
    fn past_depth_counts_nesting() {
        assert_eq!(nnf("X F p").past_depth(), 0);
        assert_eq!(nnf("Y p & (a S b)").past_depth(), 1);
        assert_eq!(nnf("G (a S Y b)").past_depth(), 2);
    }
}
