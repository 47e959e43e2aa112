use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use super::{ExceptionRole, PlaceId, PlaceKind, TransitionId, Workflow};

/// One broken structural rule, naming the offending element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructuralViolation {
    MissingStart,
    MultipleStarts(Vec<PlaceId>),
    MissingEnd,
    StartHasIncoming(PlaceId),
    EndHasOutgoing(PlaceId),
    NoOutgoing(PlaceId),
    NoIncoming(PlaceId),
    SelfLoop(TransitionId),
    ParallelTransitions(TransitionId, TransitionId),
    ConditionalShape { place: PlaceId, ins: usize, outs: usize },
    SplitJoinShape { place: PlaceId, ins: usize, outs: usize },
    Unreachable(Vec<PlaceId>),
    NoPathToEnd,
    RoleOnNonActivity { place: PlaceId, role: ExceptionRole },
}

impl fmt::Display for StructuralViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use StructuralViolation::*;
        let list = |v: &[PlaceId]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            MissingStart => write!(f, "workflow has no start place"),
            MultipleStarts(v) => write!(f, "workflow has more than one start place: {}", list(v)),
            MissingEnd => write!(f, "workflow has no end place"),
            StartHasIncoming(p) => write!(f, "start must have in-degree 0: `{p}`"),
            EndHasOutgoing(p) => write!(f, "end must have out-degree 0: `{p}`"),
            NoOutgoing(p) => write!(f, "place `{p}` has no outgoing transition"),
            NoIncoming(p) => write!(f, "place `{p}` has no ingoing transition"),
            SelfLoop(t) => write!(f, "transition `{t}` is a self-loop"),
            ParallelTransitions(a, b) => {
                write!(f, "transitions `{a}` and `{b}` connect the same pair of places")
            }
            ConditionalShape { place, ins, outs } => write!(
                f,
                "conditional `{place}` must be 1-in/2-out or 2-in/1-out, found {ins}-in/{outs}-out"
            ),
            SplitJoinShape { place, ins, outs } => write!(
                f,
                "split-join `{place}` must be 1-in/n-out or n-in/1-out with n >= 2, found {ins}-in/{outs}-out"
            ),
            Unreachable(v) => write!(f, "unreachable from start: {}", list(v)),
            NoPathToEnd => write!(f, "no path from start to an end place"),
            RoleOnNonActivity { place, role } => write!(
                f,
                "`{place}` is not an activity and cannot have a {} set",
                role.keyword()
            ),
        }
    }
}

/// Every structural rule the workflow breaks; empty when it is sound.
pub fn validate(w: &Workflow) -> Vec<StructuralViolation> {
    use StructuralViolation as V;
    let mut out = Vec::new();

    let starts: Vec<PlaceId> = w.places_of(PlaceKind::Start).map(|p| p.id.clone()).collect();
    match starts.len() {
        0 => out.push(V::MissingStart),
        1 => {}
        _ => out.push(V::MultipleStarts(starts.clone())),
    }
    if w.places_of(PlaceKind::End).next().is_none() {
        out.push(V::MissingEnd);
    }

    let mut ins: HashMap<&str, usize> = HashMap::new();
    let mut outs: HashMap<&str, usize> = HashMap::new();
    let mut pairs: HashMap<(&str, &str), &TransitionId> = HashMap::new();
    for t in w.transitions() {
        *outs.entry(t.source.as_str()).or_default() += 1;
        *ins.entry(t.target.as_str()).or_default() += 1;
        if t.source == t.target {
            out.push(V::SelfLoop(t.id.clone()));
        }
        if let Some(prev) = pairs.insert((t.source.as_str(), t.target.as_str()), &t.id) {
            out.push(V::ParallelTransitions(prev.clone(), t.id.clone()));
        }
    }

    for p in w.places() {
        let n_in = ins.get(p.id.as_str()).copied().unwrap_or(0);
        let n_out = outs.get(p.id.as_str()).copied().unwrap_or(0);
        match p.kind {
            PlaceKind::Start if n_in > 0 => out.push(V::StartHasIncoming(p.id.clone())),
            PlaceKind::End if n_out > 0 => out.push(V::EndHasOutgoing(p.id.clone())),
            _ => {}
        }
        if p.kind != PlaceKind::End && n_out == 0 {
            out.push(V::NoOutgoing(p.id.clone()));
        }
        if p.kind != PlaceKind::Start && n_in == 0 {
            out.push(V::NoIncoming(p.id.clone()));
        }
        match p.kind {
            PlaceKind::Conditional if !matches!((n_in, n_out), (1, 2) | (2, 1)) => {
                out.push(V::ConditionalShape {
                    place: p.id.clone(),
                    ins: n_in,
                    outs: n_out,
                })
            }
            PlaceKind::SplitJoin
                if !((n_in == 1 && n_out >= 2) || (n_in >= 2 && n_out == 1)) =>
            {
                out.push(V::SplitJoinShape {
                    place: p.id.clone(),
                    ins: n_in,
                    outs: n_out,
                })
            }
            _ => {}
        }
    }

    if let Some(start) = starts.first() {
        let reached = reachable_from(w, start);
        let unreachable: Vec<PlaceId> = w
            .places()
            .iter()
            .filter(|p| !reached.contains(p.id.as_str()))
            .map(|p| p.id.clone())
            .collect();
        if !unreachable.is_empty() {
            out.push(V::Unreachable(unreachable));
        }
        let ends_reached = w
            .places_of(PlaceKind::End)
            .any(|p| reached.contains(p.id.as_str()));
        if !ends_reached {
            out.push(V::NoPathToEnd);
        }
    }

    for (role, place, _) in w.role_entries() {
        let is_activity = w
            .place(place.as_str())
            .is_some_and(|p| p.kind == PlaceKind::Activity);
        if !is_activity {
            out.push(V::RoleOnNonActivity {
                place: place.clone(),
                role,
            });
        }
    }
    out
}

fn reachable_from<'a>(w: &'a Workflow, start: &PlaceId) -> BTreeSet<&'a str> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    if let Some(p) = w.place(start.as_str()) {
        seen.insert(p.id.as_str());
        queue.push_back(p.id.as_str());
    }
    while let Some(p) = queue.pop_front() {
        for t in w.transitions().iter().filter(|t| t.source.as_str() == p) {
            if seen.insert(t.target.as_str()) {
                queue.push_back(t.target.as_str());
            }
        }
    }
    seen
}
