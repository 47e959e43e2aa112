//! Bounded satisfiability checking over lasso traces.

mod cnf;
mod encode;
mod export;
mod sat;

use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::ltl::{evaluate, LassoTrace, LtlFormula};

pub use cnf::{CnfInstance, VarLabel};
pub use encode::{encode, EncodeError, MAX_BOUND};
pub use export::{export_dimacs, export_smtlib, export_smtlib_cnf, parse_dimacs, parse_smtlib, ImportError};
pub use sat::{solve_clauses, Lit, SatResult, Solver, SolverStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    Embedded,
    /// Build the instance only; `check` refuses to decide it.
    ExportOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    /// Positions run over `0..=k`.
    pub k: usize,
    pub solver: SolverChoice,
    pub seed: u64,
}

impl CheckConfig {
    pub fn new(k: usize) -> Self {
        CheckConfig {
            k,
            solver: SolverChoice::Embedded,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Outcome of a bounded check. `UnsatUpTo(k)` only says that no lasso with
/// at most `k + 1` positions satisfies the formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(LassoTrace),
    UnsatUpTo(usize),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn witness(&self) -> Option<&LassoTrace> {
        match self {
            Verdict::Sat(t) => Some(t),
            Verdict::UnsatUpTo(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("the export-only configuration has no solver")]
    NoSolver,
    #[error("internal error: solver model could not be decoded into a lasso")]
    Undecodable,
    #[error("internal error: decoded witness does not satisfy the formula: {}", .0.to_json())]
    InvalidWitness(LassoTrace),
}

/// Verdict plus the size of the instance and the solver's effort.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub num_vars: usize,
    pub num_clauses: usize,
    pub stats: SolverStats,
}

static GATE_TRIPS: AtomicU64 = AtomicU64::new(0);

/// Number of decoded witnesses that failed semantic validation in this
/// process.
pub fn gate_trips() -> u64 {
    GATE_TRIPS.load(Ordering::Relaxed)
}

pub fn check(formula: &LtlFormula, cfg: CheckConfig) -> Result<Verdict, CheckError> {
    check_with_report(formula, cfg).map(|r| r.verdict)
}

pub fn check_with_report(formula: &LtlFormula, cfg: CheckConfig) -> Result<CheckReport, CheckError> {
    let instance = encode(formula, cfg.k)?;
    if cfg.solver == SolverChoice::ExportOnly {
        return Err(CheckError::NoSolver);
    }
    let mut solver = Solver::new(cfg.seed);
    solver.ensure_vars(instance.num_vars());
    let mut consistent = true;
    for c in instance.clauses() {
        let lits: Vec<Lit> = c.iter().map(|&x| Lit::from_dimacs(x)).collect();
        if !solver.add_clause(&lits) {
            consistent = false;
            break;
        }
    }
    let result = if consistent { solver.solve() } else { SatResult::Unsat };
    let verdict = match result {
        SatResult::Unsat => Verdict::UnsatUpTo(cfg.k),
        SatResult::Sat(model) => {
            let trace = instance.decode(&model).ok_or(CheckError::Undecodable)?;
            let trace = trace.restrict(&formula.atoms());
            if !evaluate(formula, &trace, 0) {
                GATE_TRIPS.fetch_add(1, Ordering::Relaxed);
                return Err(CheckError::InvalidWitness(trace));
            }
            Verdict::Sat(trace)
        }
    };
    Ok(CheckReport {
        verdict,
        num_vars: instance.num_vars(),
        num_clauses: instance.num_clauses(),
        stats: solver.stats(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_formula;

    fn run(src: &str, k: usize) -> Verdict {
        check(&parse_formula(src).unwrap(), CheckConfig::new(k)).unwrap()
    }

    #[test]
    fn contradiction_is_unsat() {
        assert_eq!(run("p & !p", 1), Verdict::UnsatUpTo(1));
        assert_eq!(run("F p & G !p", 5), Verdict::UnsatUpTo(5));
    }

    #[test]
    fn true_has_a_one_position_model() {
        let v = run("true", 1);
        assert!(v.witness().unwrap().total_len() <= 2);
    }

    #[test]
    fn infinitely_often_puts_p_in_the_loop() {
        let v = run("G F p", 3);
        let w = v.witness().unwrap();
        assert!(w.cycle().iter().any(|s| s.contains("p")));
    }

    #[test]
    fn whole_trace_loop_is_reachable() {
        // Needs a loop of length 3 starting at position 0 when k = 2.
        let f = "p & X !p & X X !p & G(p -> X !p & X X !p) & G(!p & X !p -> X X p)";
        assert!(run(f, 2).is_sat());
        assert!(!run(f, 1).is_sat());
    }

    #[test]
    fn past_needs_the_second_unrolling() {
        // q holds only at position 0; "q held once" is true forever after.
        assert!(run("q & G X !q & G F(!(true S q))", 4) == Verdict::UnsatUpTo(4));
        assert!(run("q & X G !q & G(Y true -> Y(true S q))", 3).is_sat());
    }

    #[test]
    fn export_only_refuses_to_decide() {
        let cfg = CheckConfig {
            solver: SolverChoice::ExportOnly,
            ..CheckConfig::new(2)
        };
        assert_eq!(check(&LtlFormula::True, cfg), Err(CheckError::NoSolver));
    }

    #[test]
    fn zero_bound_is_rejected() {
        assert_eq!(
            check(&LtlFormula::True, CheckConfig::new(0)),
            Err(CheckError::Encode(EncodeError::ZeroBound))
        );
    }
}
