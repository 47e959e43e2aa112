use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("lasso loop must contain at least one position")]
    EmptyLoop,
    #[error("malformed witness JSON: {0}")]
    Json(String),
}

/// A finite prefix followed by a loop repeated forever.
///
/// Position `i` of the denoted infinite word is `prefix[i]` when
/// `i < prefix.len()`, otherwise `loop[(i - prefix.len()) % loop.len()]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLasso", into = "RawLasso")]
pub struct LassoTrace {
    prefix: Vec<BTreeSet<String>>,
    cycle: Vec<BTreeSet<String>>,
}

#[derive(Serialize, Deserialize)]
struct RawLasso {
    prefix: Vec<BTreeSet<String>>,
    #[serde(rename = "loop")]
    cycle: Vec<BTreeSet<String>>,
}

impl TryFrom<RawLasso> for LassoTrace {
    type Error = TraceError;

    fn try_from(raw: RawLasso) -> Result<Self, Self::Error> {
        LassoTrace::new(raw.prefix, raw.cycle)
    }
}

impl From<LassoTrace> for RawLasso {
    fn from(t: LassoTrace) -> Self {
        RawLasso {
            prefix: t.prefix,
            cycle: t.cycle,
        }
    }
}

impl LassoTrace {
    pub fn new(
        prefix: Vec<BTreeSet<String>>,
        cycle: Vec<BTreeSet<String>>,
    ) -> Result<Self, TraceError> {
        if cycle.is_empty() {
            return Err(TraceError::EmptyLoop);
        }
        Ok(LassoTrace { prefix, cycle })
    }

    /// Convenience constructor from string slices, mostly for tests.
    pub fn from_names(prefix: &[&[&str]], cycle: &[&[&str]]) -> Result<Self, TraceError> {
        let conv = |rows: &[&[&str]]| -> Vec<BTreeSet<String>> {
            rows.iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect()
        };
        LassoTrace::new(conv(prefix), conv(cycle))
    }

    pub fn prefix(&self) -> &[BTreeSet<String>] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[BTreeSet<String>] {
        &self.cycle
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn loop_len(&self) -> usize {
        self.cycle.len()
    }

    /// `|prefix| + |loop|`.
    pub fn total_len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Folds an arbitrary position of the infinite word onto its stored index.
    pub fn fold(&self, i: usize) -> usize {
        let p = self.prefix.len();
        if i < p {
            i
        } else {
            p + (i - p) % self.cycle.len()
        }
    }

    /// The set of propositions true at position `i` of the infinite word.
    pub fn at(&self, i: usize) -> &BTreeSet<String> {
        let j = self.fold(i);
        if j < self.prefix.len() {
            &self.prefix[j]
        } else {
            &self.cycle[j - self.prefix.len()]
        }
    }

    pub fn holds(&self, prop: &str, i: usize) -> bool {
        self.at(i).contains(prop)
    }

    /// Every proposition that appears somewhere in the trace.
    pub fn propositions(&self) -> BTreeSet<String> {
        self.prefix
            .iter()
            .chain(self.cycle.iter())
            .flat_map(|s| s.iter().cloned())
            .collect()
    }

    /// Drops every proposition not in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> LassoTrace {
        let filt = |rows: &[BTreeSet<String>]| -> Vec<BTreeSet<String>> {
            rows.iter()
                .map(|s| s.intersection(keep).cloned().collect())
                .collect()
        };
        LassoTrace {
            prefix: filt(&self.prefix),
            cycle: filt(&self.cycle),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lasso serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, TraceError> {
        serde_json::from_str(text).map_err(|e| TraceError::Json(e.to_string()))
    }
}
