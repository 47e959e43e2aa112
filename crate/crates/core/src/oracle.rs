//! Brute-force lasso enumeration and witness explanation.
//!
//! Enumeration order: prefix length ascending, then loop length ascending,
//! then the labelling as a binary counter. Bit `pos * |alphabet| + a` of the
//! counter says whether the `a`-th proposition of the sorted alphabet holds
//! at position `pos`, so position 0 changes fastest.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::compiler::CompilationUnit;
use crate::ltl::{evaluate, LassoTrace, LtlFormula};
use crate::workflow::PlaceKind;

pub const MAX_ALPHABET: usize = 8;
pub const MAX_TOTAL: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("alphabet has {0} propositions, at most {MAX_ALPHABET} are allowed")]
    AlphabetTooLarge(usize),
    #[error("max_total must be between 1 and {MAX_TOTAL}, got {0}")]
    TotalOutOfRange(usize),
    #[error("formula mentions propositions outside the alphabet: {}", .0.join(", "))]
    UnknownAtoms(Vec<String>),
    #[error("witness does not satisfy the model formula")]
    InvalidWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationSpec {
    alphabet: Vec<String>,
    max_total: usize,
}

impl EnumerationSpec {
    pub fn new(
        alphabet: impl IntoIterator<Item = impl Into<String>>,
        max_total: usize,
    ) -> Result<Self, OracleError> {
        let alphabet: BTreeSet<String> = alphabet.into_iter().map(Into::into).collect();
        if alphabet.len() > MAX_ALPHABET {
            return Err(OracleError::AlphabetTooLarge(alphabet.len()));
        }
        if max_total == 0 || max_total > MAX_TOTAL {
            return Err(OracleError::TotalOutOfRange(max_total));
        }
        Ok(EnumerationSpec {
            alphabet: alphabet.into_iter().collect(),
            max_total,
        })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn max_total(&self) -> usize {
        self.max_total
    }
}

/// First lasso in canonical order satisfying `formula` at position 0.
pub fn enumerate_sat(
    formula: &LtlFormula,
    spec: &EnumerationSpec,
) -> Result<Option<LassoTrace>, OracleError> {
    let missing: Vec<String> = formula
        .atoms()
        .into_iter()
        .filter(|a| !spec.alphabet.contains(a))
        .collect();
    if !missing.is_empty() {
        return Err(OracleError::UnknownAtoms(missing));
    }
    let width = spec.alphabet.len();
    for prefix_len in 0..spec.max_total {
        for loop_len in 1..=spec.max_total - prefix_len {
            let total = prefix_len + loop_len;
            let bits = width * total;
            for counter in 0u64..1u64 << bits {
                let mut rows: Vec<BTreeSet<String>> = (0..total)
                    .map(|pos| {
                        (0..width)
                            .filter(|a| counter >> (pos * width + a) & 1 == 1)
                            .map(|a| spec.alphabet[a].clone())
                            .collect()
                    })
                    .collect();
                let cycle = rows.split_off(prefix_len);
                let trace = LassoTrace::new(rows, cycle).expect("loop length is at least 1");
                if evaluate(formula, &trace, 0) {
                    return Ok(Some(trace));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExplainRow {
    pub position: usize,
    pub in_loop: bool,
    pub places: Vec<String>,
    pub transitions: Vec<String>,
    pub exceptions: Vec<String>,
}

/// Timeline of a model witness, one row per trace position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub trace: LassoTrace,
    pub rows: Vec<ExplainRow>,
    /// Non-end places holding at every loop position.
    pub divergent: Vec<String>,
}

pub fn explain(witness: &LassoTrace, cu: &CompilationUnit) -> Result<Explanation, OracleError> {
    if !evaluate(&cu.model_formula(), witness, 0) {
        return Err(OracleError::InvalidWitness);
    }
    let pick = |set: &BTreeSet<String>, names: &mut dyn Iterator<Item = &String>| -> Vec<String> {
        names.filter(|n| set.contains(*n)).cloned().collect()
    };
    let rows = (0..witness.total_len())
        .map(|i| {
            let set = witness.at(i);
            ExplainRow {
                position: i,
                in_loop: i >= witness.prefix_len(),
                places: pick(set, &mut cu.places.iter().map(|(n, _)| n)),
                transitions: pick(set, &mut cu.transitions.iter()),
                exceptions: pick(set, &mut cu.exceptions.iter()),
            }
        })
        .collect();
    let divergent = cu
        .places
        .iter()
        .filter(|(_, kind)| *kind != PlaceKind::End)
        .filter(|(name, _)| witness.cycle().iter().all(|s| s.contains(name)))
        .map(|(name, _)| name.clone())
        .collect();
    Ok(Explanation {
        trace: witness.clone(),
        rows,
        divergent,
    })
}

#[derive(Serialize)]
struct MachineForm<'a> {
    prefix: &'a [BTreeSet<String>],
    #[serde(rename = "loop")]
    cycle: &'a [BTreeSet<String>],
    divergent: &'a [String],
}

impl Explanation {
    /// The witness JSON with an added `divergent` list.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MachineForm {
            prefix: self.trace.prefix(),
            cycle: self.trace.cycle(),
            divergent: &self.divergent,
        })
        .expect("plain data serializes")
    }
}

impl fmt::Display for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                let mark = if r.position == self.trace.prefix_len() {
                    "->"
                } else if r.in_loop {
                    " |"
                } else {
                    "  "
                };
                [
                    format!("{mark} {}", r.position),
                    r.places.join(" "),
                    r.transitions.join(" "),
                    r.exceptions.join(" "),
                ]
            })
            .collect();
        let head = ["pos", "places", "transitions", "exceptions"];
        let mut widths = head.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |f: &mut fmt::Formatter<'_>, row: [&str; 4]| {
            let text = row
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ");
            writeln!(f, "{}", text.trim_end())
        };
        line(f, head)?;
        for row in &cells {
            line(f, [&row[0], &row[1], &row[2], &row[3]])?;
        }
        writeln!(
            f,
            "loop: positions {}..{} repeat forever",
            self.trace.prefix_len(),
            self.trace.total_len() - 1
        )?;
        if self.divergent.is_empty() {
            writeln!(f, "divergent: none")
        } else {
            writeln!(f, "divergent: {}", self.divergent.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_formula;

    #[test]
    fn first_hit_for_globally() {
        let spec = EnumerationSpec::new(["p"], 2).unwrap();
        let w = enumerate_sat(&parse_formula("G p").unwrap(), &spec).unwrap().unwrap();
        assert_eq!(w, LassoTrace::from_names(&[], &[&["p"]]).unwrap());
    }

    #[test]
    fn contradiction_has_no_lasso() {
        let spec = EnumerationSpec::new(["p"], 3).unwrap();
        assert_eq!(enumerate_sat(&parse_formula("p & !p").unwrap(), &spec), Ok(None));
    }

    #[test]
    fn counter_runs_position_zero_fastest() {
        let spec = EnumerationSpec::new(["a", "b"], 2).unwrap();
        let w = enumerate_sat(&parse_formula("!a & b & X a").unwrap(), &spec)
            .unwrap()
            .unwrap();
        // Prefix length 0 comes before any longer prefix.
        assert_eq!(w, LassoTrace::from_names(&[], &[&["b"], &["a"]]).unwrap());
    }

    #[test]
    fn limits_are_enforced() {
        let nine: Vec<String> = (0..9).map(|i| format!("p{i}")).collect();
        assert_eq!(EnumerationSpec::new(nine, 2), Err(OracleError::AlphabetTooLarge(9)));
        assert_eq!(EnumerationSpec::new(["p"], 9), Err(OracleError::TotalOutOfRange(9)));
        assert_eq!(EnumerationSpec::new(["p"], 0), Err(OracleError::TotalOutOfRange(0)));
        let spec = EnumerationSpec::new(["p"], 2).unwrap();
        assert_eq!(
            enumerate_sat(&parse_formula("q").unwrap(), &spec),
            Err(OracleError::UnknownAtoms(vec!["q".into()]))
        );
    }
}
