use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const MINIMAL: &str = "start start\nactivity A\nend end\ntrans t : start -> A\ntrans u : A -> end\n";

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn wfltl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wfltl"))
        .args(args)
        .env_remove("WFLTL_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = wfltl(&["validate", data("order.wf").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(ok.stdout.is_empty());

    let bad = write(dir.path(), "bad.wf", &format!("{MINIMAL}trans v : end -> A\n"));
    let o = wfltl(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().count(), 1);

    let missing = dir.path().join("missing.wf");
    assert_eq!(wfltl(&["validate", missing.to_str().unwrap()]).status.code(), Some(2));
    let garbled = write(dir.path(), "garbled.wf", "start\n");
    assert_eq!(wfltl(&["validate", &garbled]).status.code(), Some(2));
}

#[test]
fn compile_targets() {
    let dir = tempfile::tempdir().unwrap();
    let order = data("order.wf");
    let ltl = wfltl(&["compile", order.to_str().unwrap()]);
    assert_eq!(ltl.status.code(), Some(0));
    assert!(stdout(&ltl).lines().any(|l| l.ends_with("tf -> !(X tf)")));

    let minimal = write(dir.path(), "min.wf", MINIMAL);
    let cnf = wfltl(&["compile", &minimal, "--emit", "dimacs", "-k", "5"]);
    assert_eq!(cnf.status.code(), Some(0));
    let text = stdout(&cnf);
    let header = text.lines().find(|l| !l.starts_with('c')).unwrap();
    let fields: Vec<&str> = header.split_whitespace().collect();
    assert_eq!(&fields[..2], ["p", "cnf"]);
    let clauses: usize = fields[3].parse().unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with(['c', 'p'])).count(), clauses);

    let smt = wfltl(&["compile", &minimal, "--emit", "smt2", "-k", "3"]);
    assert!(stdout(&smt).contains("(check-sat)"));
    assert_eq!(wfltl(&["compile", &minimal, "--emit", "dimacs"]).status.code(), Some(2));

    let out = dir.path().join("min.cnf");
    let o = wfltl(&["compile", &minimal, "--emit", "dimacs", "-k", "5", "--out", out.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(out).unwrap(), text);
}

#[test]
fn case_study_verdicts() {
    let order = data("order.wf");
    for (p, code, verdict) in [
        ("p11.ltl", 0, "HOLDS (bounded, k=35)"),
        ("p12.ltl", 1, "VIOLATED (k=35)"),
        ("p13.ltl", 0, "HOLDS (bounded, k=35)"),
        ("p14.ltl", 1, "VIOLATED (k=35)"),
    ] {
        let prop = data(&format!("properties/{p}"));
        let o = wfltl(&["verify", order.to_str().unwrap(), prop.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(code), "{p}");
        assert_eq!(stdout(&o).lines().next(), Some(verdict), "{p}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("verify:"));
    }
}

#[test]
fn violation_witness_is_written_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("p12.json");
    let o = wfltl(&[
        "verify",
        data("order.wf").to_str().unwrap(),
        data("properties/p12.ltl").to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness written to"));
    let w = wfltl::ltl::LassoTrace::from_json(&std::fs::read_to_string(trace).unwrap()).unwrap();
    assert!(w.cycle().iter().all(|s| s.contains("Bill") && s.contains("Ship")));
}

#[test]
fn unknown_property_names_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let prop = write(dir.path(), "p.ltl", "F Shipping");
    assert_eq!(wfltl(&["verify", data("order.wf").to_str().unwrap(), &prop]).status.code(), Some(2));
}

#[test]
fn check_model_exit_codes() {
    let order = data("order.wf");
    let order = order.to_str().unwrap();
    let sat = wfltl(&["check-model", order]);
    assert_eq!(sat.status.code(), Some(0));
    assert!(stdout(&sat).starts_with("SAT (k=35)"));
    let unsat = wfltl(&["check-model", order, "--assume", "G !end & G !Bill & F Arch"]);
    assert_eq!(unsat.status.code(), Some(1));
    assert!(stdout(&unsat).contains("contradictory"));
    assert_eq!(wfltl(&["check-model", order, "-k", "0"]).status.code(), Some(2));
    assert_eq!(wfltl(&["check-model", order, "--assume", "F ("]).status.code(), Some(2));
}

#[test]
fn oracle_command() {
    let dir = tempfile::tempdir().unwrap();
    let gf = write(dir.path(), "gf.ltl", "G F p");
    let o = wfltl(&["oracle", &gf]);
    assert_eq!(o.status.code(), Some(0));
    let w = wfltl::ltl::LassoTrace::from_json(&stdout(&o)).unwrap();
    assert_eq!(w, wfltl::ltl::LassoTrace::from_names(&[], &[&["p"]]).unwrap());
    let contra = write(dir.path(), "c.ltl", "p & !p");
    let o = wfltl(&["oracle", &contra, "--max-total", "3"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "none"));
    assert_eq!(wfltl(&["oracle", &gf, "--max-total", "9"]).status.code(), Some(2));
    assert_eq!(wfltl(&["oracle", &gf, "--alphabet", "a,b,c,d,e,f,g,h,p"]).status.code(), Some(2));
    assert_eq!(wfltl(&["oracle", &gf, "--alphabet", "q"]).status.code(), Some(2));
}

#[test]
fn stdout_is_reproducible() {
    let args = ["check-model", data("order.wf").to_str().unwrap(), "-k", "20"].map(String::from);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(stdout(&wfltl(&args)), stdout(&wfltl(&args)));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(wfltl(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(wfltl(&[]).status.code(), Some(2));
}
