//! Translation of a workflow into LTL axioms.
//!
//! Places and transitions alternate strictly: an activity lasts until one of
//! its outgoing transitions fires, a transition holds for exactly one
//! position between its source and its target, and gateways are punctual.
//! Exceptions are modelled as propositions constrained by their duration,
//! their throwers, their catchers and the activities probing them.
//!
//! The model formula is `initial ∧ G(axiom₁ ∧ … ∧ axiomₙ)`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::ltl::LtlFormula;
use crate::workflow::{
    validate, ExceptionDuration, ExceptionOrigin, ExceptionRole, Place, PlaceKind,
    StructuralViolation, Transition, Workflow,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// A place lasts until an outgoing transition fires, and that transition
    /// follows the place immediately.
    ActOut,
    /// A place has lasted since an ingoing transition fired, and that
    /// transition precedes the place immediately.
    ActIn,
    CondExcl,
    CondPunct,
    SplitSync,
    JoinSync,
    GatewayPunct,
    EndStable,
    ExcPunctual,
    ExcPermanentCatch,
    ProbeAbort,
    LoopNecPunct,
    LoopNecPerm,
    ThrowInternal,
    ThrowExternal,
    Initial,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::ActOut => "ActOut",
            Rule::ActIn => "ActIn",
            Rule::CondExcl => "CondExcl",
            Rule::CondPunct => "CondPunct",
            Rule::SplitSync => "SplitSync",
            Rule::JoinSync => "JoinSync",
            Rule::GatewayPunct => "GatewayPunct",
            Rule::EndStable => "EndStable",
            Rule::ExcPunctual => "ExcPunctual",
            Rule::ExcPermanentCatch => "ExcPermanentCatch",
            Rule::ProbeAbort => "ProbeAbort",
            Rule::LoopNecPunct => "LoopNecPunct",
            Rule::LoopNecPerm => "LoopNecPerm",
            Rule::ThrowInternal => "ThrowInternal",
            Rule::ThrowExternal => "ThrowExternal",
            Rule::Initial => "Initial",
        }
    }
}

/// Which rule produced an axiom, and for which place or exception.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Provenance {
    pub rule: Rule,
    pub subject: String,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.rule.tag(), self.subject)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub formula: LtlFormula,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilationUnit {
    /// Constraint on position 0 only.
    pub initial: Axiom,
    /// Conjuncts that hold at every position.
    pub axioms: Vec<Axiom>,
    pub alphabet: BTreeSet<String>,
    /// Place names with their kinds, in declaration order.
    pub places: Vec<(String, PlaceKind)>,
    pub transitions: Vec<String>,
    pub exceptions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("workflow is not structurally valid ({} violation(s)): {}", .0.len(), .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<StructuralViolation>),
}

fn p(name: &str) -> LtlFormula {
    LtlFormula::prop(name)
}

fn not(f: LtlFormula) -> LtlFormula {
    LtlFormula::not(f)
}

fn any_of(ts: &[&Transition]) -> LtlFormula {
    LtlFormula::disj(ts.iter().map(|t| p(t.id.as_str())))
}

struct Emitter {
    axioms: Vec<Axiom>,
}

impl Emitter {
    fn emit(&mut self, rule: Rule, subject: &str, formula: LtlFormula) {
        self.axioms.push(Axiom {
            formula,
            provenance: Provenance {
                rule,
                subject: subject.to_string(),
            },
        });
    }
}

/// Compiles a structurally valid workflow.
pub fn compile(w: &Workflow) -> Result<CompilationUnit, CompileError> {
    let violations = validate(w);
    if !violations.is_empty() {
        return Err(CompileError::Invalid(violations));
    }
    let mut em = Emitter { axioms: Vec::new() };
    for place in w.places() {
        compile_place(w, place, &mut em);
    }
    em.axioms.extend(compile_exceptions(w));

    let alphabet = w
        .places()
        .iter()
        .map(|p| p.id.to_string())
        .chain(w.transitions().iter().map(|t| t.id.to_string()))
        .chain(w.exceptions().iter().map(|e| e.name.clone()))
        .collect();
    Ok(CompilationUnit {
        initial: initial_condition(w),
        axioms: em.axioms,
        alphabet,
        places: w.places().iter().map(|p| (p.id.to_string(), p.kind)).collect(),
        transitions: w.transitions().iter().map(|t| t.id.to_string()).collect(),
        exceptions: w.exceptions().iter().map(|e| e.name.clone()).collect(),
    })
}

/// Only the start place holds at position 0; every other place and every
/// transition is false there. Exceptions are left to their own axioms.
fn initial_condition(w: &Workflow) -> Axiom {
    let start = w.start().expect("validated workflow has a start place");
    let others = w
        .places()
        .iter()
        .filter(|q| q.id != start.id)
        .map(|q| not(p(q.id.as_str())))
        .chain(w.transitions().iter().map(|t| not(p(t.id.as_str()))));
    Axiom {
        formula: LtlFormula::conj(std::iter::once(p(start.id.as_str())).chain(others)),
        provenance: Provenance {
            rule: Rule::Initial,
            subject: start.id.to_string(),
        },
    }
}

fn compile_place(w: &Workflow, place: &Place, em: &mut Emitter) {
    let name = place.id.as_str();
    let a = p(name);
    let ins = w.in_set(name).expect("place of w");
    let outs = w.out_set(name).expect("place of w");

    if !ins.is_empty() {
        let t_in = any_of(&ins);
        em.emit(
            Rule::ActIn,
            name,
            LtlFormula::implies(
                a.clone(),
                LtlFormula::since(LtlFormula::and(a.clone(), not(t_in.clone())), t_in),
            ),
        );
        for t in &ins {
            em.emit(
                Rule::ActIn,
                name,
                LtlFormula::implies(
                    p(t.id.as_str()),
                    LtlFormula::and(LtlFormula::next(a.clone()), not(a.clone())),
                ),
            );
        }
    }

    if place.kind == PlaceKind::Start {
        // Start has no ingoing transition; it holds on an initial segment
        // and is never entered again.
        em.emit(
            Rule::ActIn,
            name,
            LtlFormula::implies(a.clone(), not(LtlFormula::prev(not(a.clone())))),
        );
    }

    if !outs.is_empty() {
        let t_out = any_of(&outs);
        let progress = LtlFormula::until(LtlFormula::and(a.clone(), not(t_out.clone())), t_out);
        // Start carries no exceptions, so it can never be blocked.
        let body = if place.kind == PlaceKind::Start {
            progress
        } else {
            LtlFormula::or(progress, LtlFormula::globally(a.clone()))
        };
        em.emit(Rule::ActOut, name, LtlFormula::implies(a.clone(), body));
        for t in &outs {
            em.emit(
                Rule::ActOut,
                name,
                LtlFormula::implies(
                    p(t.id.as_str()),
                    LtlFormula::and(LtlFormula::prev(a.clone()), not(a.clone())),
                ),
            );
        }
    }

    let punctual = || {
        LtlFormula::implies(
            a.clone(),
            LtlFormula::and(
                not(LtlFormula::prev(a.clone())),
                not(LtlFormula::next(a.clone())),
            ),
        )
    };
    match place.kind {
        PlaceKind::Conditional => {
            if outs.len() == 2 {
                em.emit(
                    Rule::CondExcl,
                    name,
                    LtlFormula::implies(p(outs[0].id.as_str()), not(p(outs[1].id.as_str()))),
                );
            }
            em.emit(Rule::CondPunct, name, punctual());
        }
        PlaceKind::SplitJoin => {
            let (rule, group) = if ins.len() == 1 {
                (Rule::SplitSync, &outs)
            } else {
                (Rule::JoinSync, &ins)
            };
            for (i, ti) in group.iter().enumerate() {
                for tj in &group[i + 1..] {
                    em.emit(
                        rule,
                        name,
                        LtlFormula::iff(p(ti.id.as_str()), p(tj.id.as_str())),
                    );
                }
            }
            em.emit(Rule::GatewayPunct, name, punctual());
        }
        PlaceKind::End => {
            em.emit(
                Rule::EndStable,
                name,
                LtlFormula::implies(a.clone(), LtlFormula::globally(a.clone())),
            );
        }
        PlaceKind::Activity | PlaceKind::Start => {}
    }
}

/// `e ∧ ¬B₁ ∧ … ∧ ¬Bₙ` over the activities `Bᵢ` catching `e`.
fn unhandled(w: &Workflow, exception: &str) -> LtlFormula {
    let catchers = w.places_with_role(ExceptionRole::Catch, exception);
    LtlFormula::conj(
        std::iter::once(p(exception)).chain(catchers.iter().map(|b| not(p(b.id.as_str())))),
    )
}

/// The exception axioms alone, in emission order.
pub fn compile_exceptions(w: &Workflow) -> Vec<Axiom> {
    let mut em = Emitter { axioms: Vec::new() };
    let activities: Vec<&Place> = w.activities().collect();

    for e in w.exceptions() {
        let name = e.name.as_str();
        let x = p(name);
        match e.duration {
            ExceptionDuration::Punctual => em.emit(
                Rule::ExcPunctual,
                name,
                LtlFormula::implies(x.clone(), not(LtlFormula::next(x.clone()))),
            ),
            ExceptionDuration::Permanent => {
                let restored = LtlFormula::disj(
                    w.places_with_role(ExceptionRole::Catch, name)
                        .iter()
                        .map(|a| LtlFormula::until(x.clone(), p(a.id.as_str()))),
                );
                em.emit(
                    Rule::ExcPermanentCatch,
                    name,
                    LtlFormula::implies(
                        x.clone(),
                        LtlFormula::iff(not(LtlFormula::globally(x.clone())), restored),
                    ),
                );
            }
        }

        let (rule, raisers): (Rule, Vec<&Place>) = match w.origin(name) {
            ExceptionOrigin::Internal => (
                Rule::ThrowInternal,
                w.places_with_role(ExceptionRole::Throw, name),
            ),
            ExceptionOrigin::External => (Rule::ThrowExternal, activities.clone()),
        };
        let some_raiser = LtlFormula::disj(raisers.iter().map(|a| p(a.id.as_str())));
        let axiom = match e.duration {
            ExceptionDuration::Punctual => LtlFormula::implies(x.clone(), some_raiser),
            ExceptionDuration::Permanent => LtlFormula::implies(
                x.clone(),
                LtlFormula::since(x.clone(), LtlFormula::and(x.clone(), some_raiser)),
            ),
        };
        em.emit(rule, name, axiom);
    }

    for a in &activities {
        let name = a.id.as_str();
        for e in w.probe_set(name) {
            let catchers = w.places_with_role(ExceptionRole::Catch, e);
            let trigger = LtlFormula::conj(
                [p(name), p(e)]
                    .into_iter()
                    .chain(catchers.iter().map(|b| not(p(b.id.as_str())))),
            );
            em.emit(
                Rule::ProbeAbort,
                name,
                LtlFormula::implies(trigger, LtlFormula::globally(p(name))),
            );
        }
    }

    for a in &activities {
        let name = a.id.as_str();
        let forever = LtlFormula::globally(p(name));

        // Some activity C entered an error state: it has lasted since a
        // position where a probed exception occurred with no catcher active.
        let faulty_since = LtlFormula::disj(activities.iter().filter_map(|c| {
            let probes = w.probe_set(c.id.as_str());
            if probes.is_empty() {
                return None;
            }
            let c_prop = p(c.id.as_str());
            let fault = LtlFormula::disj(probes.iter().map(|e| unhandled(w, e)));
            Some(LtlFormula::since(
                c_prop.clone(),
                LtlFormula::and(c_prop, fault),
            ))
        }));
        em.emit(
            Rule::LoopNecPunct,
            name,
            LtlFormula::implies(forever.clone(), LtlFormula::eventually(faulty_since)),
        );

        // Some activity C is stuck forever with a permanent exception it probes.
        let stuck_forever = LtlFormula::disj(activities.iter().flat_map(|c| {
            w.probe_set(c.id.as_str())
                .iter()
                .filter(|e| {
                    w.exception(e)
                        .is_some_and(|d| d.duration == ExceptionDuration::Permanent)
                })
                .map(|e| {
                    LtlFormula::globally(LtlFormula::and(p(c.id.as_str()), unhandled(w, e)))
                })
                .collect::<Vec<_>>()
        }));
        em.emit(
            Rule::LoopNecPerm,
            name,
            LtlFormula::implies(forever, LtlFormula::eventually(stuck_forever)),
        );
    }
    em.axioms
}

impl CompilationUnit {
    /// `initial ∧ G(∧ axioms)`.
    pub fn model_formula(&self) -> LtlFormula {
        LtlFormula::and(
            self.initial.formula.clone(),
            LtlFormula::globally(LtlFormula::conj(
                self.axioms.iter().map(|a| a.formula.clone()),
            )),
        )
    }

    pub fn axioms_with(&self, rule: Rule) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter().filter(move |a| a.provenance.rule == rule)
    }

    /// The axiom listing: each formula preceded by a `#` line naming its rule
    /// and subject. The initial condition comes first and, unlike the other
    /// lines, constrains position 0 only.
    pub fn to_listing(&self) -> String {
        let mut out = String::new();
        out.push_str("# model := <Initial> & G(<conjunction of the axioms below>)\n");
        for a in std::iter::once(&self.initial).chain(&self.axioms) {
            out.push_str(&format!("# {}\n{}\n", a.provenance, a.formula));
        }
        out
    }
}

/// Convenience wrapper for [`CompilationUnit::model_formula`].
pub fn model_formula(cu: &CompilationUnit) -> LtlFormula {
    cu.model_formula()
}
