mod common;

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wfltl::bsc::{
    check, encode, export_dimacs, export_smtlib, export_smtlib_cnf, gate_trips, parse_dimacs,
    parse_smtlib, solve_clauses, CheckConfig, EncodeError, SatResult, Verdict, MAX_BOUND,
};
use wfltl::compiler::compile;
use wfltl::ltl::{evaluate, parse_formula, LtlFormula};
use wfltl::oracle::{enumerate_sat, EnumerationSpec};
use wfltl::workflow::parse_workflow;

fn verdict(src: &str, k: usize) -> Verdict {
    check(&parse_formula(src).unwrap(), CheckConfig::new(k)).unwrap()
}

#[test]
fn trivial_verdicts() {
    assert_eq!(verdict("p & !p", 1), Verdict::UnsatUpTo(1));
    assert_eq!(verdict("F p & G !p", 5), Verdict::UnsatUpTo(5));
    let w = verdict("true", 1);
    assert!(w.witness().unwrap().loop_len() >= 1);
    let inst = encode(&parse_formula("p & !p").unwrap(), 1).unwrap();
    assert_eq!(solve_clauses(inst.num_vars(), inst.clauses(), 0), SatResult::Unsat);
}

#[test]
fn infinitely_often_agrees_with_enumeration() {
    let f = parse_formula("G F p").unwrap();
    let w = check(&f, CheckConfig::new(3)).unwrap();
    let t = w.witness().expect("satisfiable");
    assert!(evaluate(&f, t, 0));
    assert!(t.cycle().iter().any(|s| s.contains("p")));
    let spec = EnumerationSpec::new(["p"], 4).unwrap();
    assert!(enumerate_sat(&f, &spec).unwrap().is_some());
}

#[test]
fn bound_errors() {
    let f = LtlFormula::True;
    assert_eq!(encode(&f, 0).unwrap_err(), EncodeError::ZeroBound);
    assert_eq!(encode(&f, MAX_BOUND + 1).unwrap_err(), EncodeError::BoundTooLarge(MAX_BOUND + 1));
}

#[test]
fn witnesses_fit_the_bound_and_satisfy_the_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let ps = common::props(3);
    for _ in 0..200 {
        let f = common::random_formula(&mut rng, &ps, 4);
        let k = rng.gen_range(1..=8);
        if let Verdict::Sat(t) = check(&f, CheckConfig::new(k)).unwrap() {
            assert!(t.total_len() <= k + 1 && t.loop_len() >= 1);
            assert!(evaluate(&f, &t, 0));
        }
    }
    assert_eq!(gate_trips(), 0);
}

#[test]
fn larger_bounds_keep_satisfiable_formulas_satisfiable() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let ps = common::props(2);
    for _ in 0..150 {
        let f = common::random_formula(&mut rng, &ps, 4);
        let mut was_sat = false;
        for k in 1..=7 {
            let sat = check(&f, CheckConfig::new(k)).unwrap().is_sat();
            assert!(sat || !was_sat, "{f} satisfiable below k = {k} but not at it");
            was_sat = sat;
        }
    }
}

#[test]
fn seeds_change_search_but_not_verdicts() {
    let f = parse_formula("G F p & G F q & G(p -> !q) & F G(r -> X !r)").unwrap();
    let base = check(&f, CheckConfig::new(6)).unwrap();
    assert_eq!(base, check(&f, CheckConfig::new(6)).unwrap());
    for seed in 1..10 {
        let v = check(&f, CheckConfig::new(6).with_seed(seed)).unwrap();
        assert!(evaluate(&f, v.witness().unwrap(), 0));
    }
}

/// `(positive mask, negative mask)` per clause over at most 32 variables.
fn masks(clauses: &[Vec<i32>]) -> Vec<(u32, u32)> {
    clauses
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(p, n), &l| {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 {
                    (p | bit, n)
                } else {
                    (p, n | bit)
                }
            })
        })
        .collect()
}

fn brute_force_sat(n: u32, clauses: &[Vec<i32>]) -> bool {
    let m = masks(clauses);
    (0u32..1 << n).any(|a| m.iter().all(|&(p, q)| a & p != 0 || !a & q != 0))
}

#[test]
fn random_3cnf_matches_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (n, m) = (20u32, 80usize);
    let mut sat_count = 0;
    for _ in 0..100 {
        let clauses: Vec<Vec<i32>> = (0..m)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        let v = rng.gen_range(1..=n as i32);
                        if rng.gen_bool(0.5) {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        let expected = brute_force_sat(n, &clauses);
        let got = solve_clauses(n as usize, &clauses, 0);
        match &got {
            SatResult::Sat(model) => {
                assert!(expected);
                let a = model.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (b as u32) << i);
                assert!(masks(&clauses).iter().all(|&(p, q)| a & p != 0 || !a & q != 0));
                sat_count += 1;
            }
            SatResult::Unsat => assert!(!expected),
        }
    }
    // Ratio 4.0 sits near the threshold: both outcomes must show up.
    assert!(sat_count > 0 && sat_count < 100, "{sat_count}");
}

#[test]
fn exports_reimport_to_the_same_verdict() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let ps = common::props(3);
    for _ in 0..50 {
        let f = common::random_formula(&mut rng, &ps, 4);
        let k = rng.gen_range(1..=5);
        let inst = encode(&f, k).unwrap();
        let direct = check(&f, CheckConfig::new(k)).unwrap().is_sat();

        let from_dimacs = parse_dimacs(&export_dimacs(&inst)).unwrap();
        assert_eq!(from_dimacs, inst);
        let smt = export_smtlib(&f, k).unwrap();
        let from_smt = parse_smtlib(&smt).unwrap();
        assert_eq!(from_smt.clauses(), inst.clauses());
        for c in [&from_dimacs, &from_smt] {
            match solve_clauses(c.num_vars(), c.clauses(), 0) {
                SatResult::Sat(model) => {
                    assert!(direct);
                    assert!(evaluate(&f, &c.decode(&model).unwrap(), 0));
                }
                SatResult::Unsat => assert!(!direct),
            }
        }
    }
}

#[test]
fn contradiction_exports_as_unsat_script() {
    let text = export_smtlib(&parse_formula("p & !p").unwrap(), 1).unwrap();
    assert!(text.contains("(check-sat)") && text.contains("(get-model)"));
    let c = parse_smtlib(&text).unwrap();
    assert_eq!(solve_clauses(c.num_vars(), c.clauses(), 0), SatResult::Unsat);
}

/// Runs z3 on the Property 11 export when z3 is installed.
#[test]
fn external_solver_agrees_when_available() {
    if Command::new("z3").arg("--version").output().is_err() {
        eprintln!("z3 not found on PATH; external cross-check skipped");
        return;
    }
    let w = parse_workflow(include_str!("../data/order.wf")).unwrap();
    let model = compile(&w).unwrap().model_formula();
    let p = parse_formula(include_str!("../data/properties/p11.ltl")).unwrap();
    let text = export_smtlib_cnf(&encode(&LtlFormula::and(model, LtlFormula::not(p)), 35).unwrap());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p11.smt2");
    std::fs::write(&path, text).unwrap();
    let out = Command::new("z3").arg(&path).output().unwrap();
    let answer = String::from_utf8_lossy(&out.stdout);
    assert_eq!(answer.lines().next(), Some("unsat"));
}
