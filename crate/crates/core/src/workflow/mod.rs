//! Workflow graphs with exception declarations.
//!
//! A workflow is a directed graph of places (activities, gateways, one
//! start, one or more ends) connected by named transitions. Every place,
//! transition and exception name becomes an atomic proposition of the
//! compiled model, so all three share one namespace.

mod dsl;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::ltl::RESERVED_WORDS;

pub use dsl::{parse_workflow, WorkflowParseError};
pub use validate::{validate, StructuralViolation};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaceId(String);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionId(String);

macro_rules! name_newtype {
    ($t:ident) => {
        impl $t {
            pub fn new(name: impl Into<String>) -> Self {
                $t(name.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                $t(s.to_string())
            }
        }
    };
}

name_newtype!(PlaceId);
name_newtype!(TransitionId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    Activity,
    Conditional,
    SplitJoin,
    Start,
    End,
}

impl PlaceKind {
    pub fn keyword(self) -> &'static str {
        match self {
            PlaceKind::Activity => "activity",
            PlaceKind::Conditional => "cond",
            PlaceKind::SplitJoin => "splitjoin",
            PlaceKind::Start => "start",
            PlaceKind::End => "end",
        }
    }

    pub fn is_gateway(self) -> bool {
        matches!(self, PlaceKind::Conditional | PlaceKind::SplitJoin)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Place {
    pub id: PlaceId,
    pub kind: PlaceKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub id: TransitionId,
    pub source: PlaceId,
    pub target: PlaceId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExceptionDuration {
    Punctual,
    Permanent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExceptionOrigin {
    /// Thrown by some activity of the workflow.
    Internal,
    /// Raised by the environment.
    External,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionDecl {
    pub name: String,
    pub duration: ExceptionDuration,
}

/// The three per-activity exception roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExceptionRole {
    /// May raise the exception.
    Throw,
    /// Can handle the exception.
    Catch,
    /// Is endangered by the exception when nobody handles it.
    Probe,
}

impl ExceptionRole {
    pub const ALL: [ExceptionRole; 3] = [ExceptionRole::Throw, ExceptionRole::Catch, ExceptionRole::Probe];

    pub fn keyword(self) -> &'static str {
        match self {
            ExceptionRole::Throw => "throw",
            ExceptionRole::Catch => "catch",
            ExceptionRole::Probe => "probe",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("`{0}` is reserved by the formula syntax")]
    ReservedName(String),
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("unknown exception `{0}`")]
    UnknownException(String),
}

/// An immutable, name-checked workflow. Structural soundness is checked
/// separately by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workflow {
    places: Vec<Place>,
    transitions: Vec<Transition>,
    exceptions: Vec<ExceptionDecl>,
    roles: BTreeMap<(ExceptionRole, PlaceId), BTreeSet<String>>,
    place_index: HashMap<PlaceId, usize>,
}

#[derive(Debug, Default, Clone)]
pub struct WorkflowBuilder {
    places: Vec<Place>,
    transitions: Vec<Transition>,
    exceptions: Vec<ExceptionDecl>,
    roles: BTreeMap<(ExceptionRole, PlaceId), BTreeSet<String>>,
}

impl WorkflowBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn place(mut self, name: &str, kind: PlaceKind) -> Self {
        self.places.push(Place {
            id: PlaceId::new(name),
            kind,
        });
        self
    }

    pub fn transition(mut self, name: &str, source: &str, target: &str) -> Self {
        self.transitions.push(Transition {
            id: TransitionId::new(name),
            source: PlaceId::new(source),
            target: PlaceId::new(target),
        });
        self
    }

    pub fn exception(mut self, name: &str, duration: ExceptionDuration) -> Self {
        self.exceptions.push(ExceptionDecl {
            name: name.to_string(),
            duration,
        });
        self
    }

    /// Adds exceptions to a role set; repeated calls accumulate.
    pub fn role(mut self, role: ExceptionRole, activity: &str, names: &[&str]) -> Self {
        self.roles
            .entry((role, PlaceId::new(activity)))
            .or_default()
            .extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn build(self) -> Result<Workflow, ModelError> {
        let mut seen = BTreeSet::new();
        let names = self
            .places
            .iter()
            .map(|p| p.id.as_str())
            .chain(self.transitions.iter().map(|t| t.id.as_str()))
            .chain(self.exceptions.iter().map(|e| e.name.as_str()));
        for name in names {
            if RESERVED_WORDS.contains(&name) {
                return Err(ModelError::ReservedName(name.to_string()));
            }
            if !seen.insert(name) {
                return Err(ModelError::DuplicateName(name.to_string()));
            }
        }
        let place_index: HashMap<PlaceId, usize> = self
            .places
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.clone(), i))
            .collect();
        for t in &self.transitions {
            for end in [&t.source, &t.target] {
                if !place_index.contains_key(end) {
                    return Err(ModelError::UnknownPlace(end.to_string()));
                }
            }
        }
        let exc: BTreeSet<&str> = self.exceptions.iter().map(|e| e.name.as_str()).collect();
        for ((_, place), set) in &self.roles {
            if !place_index.contains_key(place) {
                return Err(ModelError::UnknownPlace(place.to_string()));
            }
            if let Some(bad) = set.iter().find(|e| !exc.contains(e.as_str())) {
                return Err(ModelError::UnknownException(bad.clone()));
            }
        }
        let mut roles = self.roles;
        roles.retain(|_, set| !set.is_empty());
        Ok(Workflow {
            places: self.places,
            transitions: self.transitions,
            exceptions: self.exceptions,
            roles,
            place_index,
        })
    }
}

static EMPTY: BTreeSet<String> = BTreeSet::new();

impl Workflow {
    pub fn builder() -> WorkflowBuilder {
        WorkflowBuilder::new()
    }

    /// Places in declaration order.
    pub fn places(&self) -> &[Place] {
        &self.places
    }

    /// Transitions in declaration order.
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn exceptions(&self) -> &[ExceptionDecl] {
        &self.exceptions
    }

    pub fn place(&self, name: &str) -> Option<&Place> {
        self.place_index
            .get(&PlaceId::new(name))
            .map(|&i| &self.places[i])
    }

    pub fn exception(&self, name: &str) -> Option<&ExceptionDecl> {
        self.exceptions.iter().find(|e| e.name == name)
    }

    pub fn places_of(&self, kind: PlaceKind) -> impl Iterator<Item = &Place> {
        self.places.iter().filter(move |p| p.kind == kind)
    }

    /// The activity places, excluding gateways, start and end.
    pub fn activities(&self) -> impl Iterator<Item = &Place> {
        self.places_of(PlaceKind::Activity)
    }

    pub fn start(&self) -> Option<&Place> {
        self.places_of(PlaceKind::Start).next()
    }

    /// Transitions leaving `place`, in declaration order.
    pub fn out_set(&self, place: &str) -> Result<Vec<&Transition>, ModelError> {
        self.check_place(place)?;
        Ok(self
            .transitions
            .iter()
            .filter(|t| t.source.as_str() == place)
            .collect())
    }

    /// Transitions entering `place`, in declaration order.
    pub fn in_set(&self, place: &str) -> Result<Vec<&Transition>, ModelError> {
        self.check_place(place)?;
        Ok(self
            .transitions
            .iter()
            .filter(|t| t.target.as_str() == place)
            .collect())
    }

    fn check_place(&self, place: &str) -> Result<(), ModelError> {
        match self.place(place) {
            Some(_) => Ok(()),
            None => Err(ModelError::UnknownPlace(place.to_string())),
        }
    }

    /// The exceptions `place` plays `role` for; empty when none were declared.
    pub fn role_set(&self, role: ExceptionRole, place: &str) -> &BTreeSet<String> {
        self.roles
            .get(&(role, PlaceId::new(place)))
            .unwrap_or(&EMPTY)
    }

    pub fn throw_set(&self, place: &str) -> &BTreeSet<String> {
        self.role_set(ExceptionRole::Throw, place)
    }

    pub fn catch_set(&self, place: &str) -> &BTreeSet<String> {
        self.role_set(ExceptionRole::Catch, place)
    }

    pub fn probe_set(&self, place: &str) -> &BTreeSet<String> {
        self.role_set(ExceptionRole::Probe, place)
    }

    /// Every non-empty role declaration.
    pub fn role_entries(&self) -> impl Iterator<Item = (ExceptionRole, &PlaceId, &BTreeSet<String>)> {
        self.roles.iter().map(|((r, p), s)| (*r, p, s))
    }

    /// Places that list `exception` under `role`, in place declaration order.
    pub fn places_with_role(&self, role: ExceptionRole, exception: &str) -> Vec<&Place> {
        self.places
            .iter()
            .filter(|p| self.role_set(role, p.id.as_str()).contains(exception))
            .collect()
    }

    pub fn origin(&self, exception: &str) -> ExceptionOrigin {
        if self.places_with_role(ExceptionRole::Throw, exception).is_empty() {
            ExceptionOrigin::External
        } else {
            ExceptionOrigin::Internal
        }
    }
}
