//! The `wfltl` command line.
//!
//! Exit codes: 0 for success or a property that holds, 1 for a violated
//! property, a structurally invalid workflow or a contradictory model, 2 for
//! usage and I/O errors. Verdicts and artifacts go to stdout; timing and
//! memory go to stderr so that stdout is reproducible.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bsc::{check, encode, export_dimacs, export_smtlib_cnf, CheckConfig, Verdict};
use crate::compiler::{compile, CompilationUnit};
use crate::ltl::{parse_formula, LassoTrace, LtlFormula};
use crate::oracle::{enumerate_sat, explain, EnumerationSpec};
use crate::workflow::{parse_workflow, validate, Workflow};

pub const DEFAULT_BOUND: usize = 35;
pub const SEED_VAR: &str = "WFLTL_SEED";

#[derive(Debug, Parser)]
#[command(name = "wfltl", version, about = "Workflow-to-LTL compiler and bounded satisfiability checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Ltl,
    Dimacs,
    Smt2,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the structural rules of a workflow.
    Validate { workflow: PathBuf },
    /// Translate a workflow into its LTL model or a solver input.
    Compile {
        workflow: PathBuf,
        #[arg(long, value_enum, default_value = "ltl")]
        emit: Emit,
        /// Bound for the dimacs and smt2 targets.
        #[arg(short = 'k', long = "bound", value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a property against the workflow model within a bound.
    Verify {
        workflow: PathBuf,
        property: PathBuf,
        #[arg(short = 'k', long = "bound", default_value_t = DEFAULT_BOUND as u64, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Write the counterexample as JSON here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Look for any execution of the workflow model.
    CheckModel {
        workflow: PathBuf,
        #[arg(short = 'k', long = "bound", default_value_t = DEFAULT_BOUND as u64, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Conjoin an extra formula with the model.
        #[arg(long)]
        assume: Option<String>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Search all small lassos for a model of a formula.
    Oracle {
        formula: PathBuf,
        /// Comma-separated propositions; defaults to the formula's atoms.
        #[arg(long, value_delimiter = ',')]
        alphabet: Option<Vec<String>>,
        #[arg(long, default_value_t = 4)]
        max_total: usize,
    },
}

/// What a run did, for the stderr summary line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub verdict: String,
    pub seconds: f64,
    /// Peak resident set size in megabytes, when the platform reports it.
    pub peak_mb: Option<f64>,
    pub witness: Option<PathBuf>,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} in {:.3} s", self.command, self.verdict, self.seconds)?;
        if let Some(mb) = self.peak_mb {
            write!(f, ", peak memory {mb:.1} MB")?;
        }
        if let Some(p) = &self.witness {
            write!(f, ", witness {}", p.display())?;
        }
        Ok(())
    }
}

/// Peak resident set size from `/proc/self/status`.
pub fn peak_memory_mb() -> Option<f64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: f64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024.0)
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn load_workflow(path: &Path) -> Result<Workflow, Failure> {
    parse_workflow(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_unit(path: &Path, out: &mut dyn Write) -> Result<CompilationUnit, Failure> {
    let w = load_workflow(path)?;
    let violations = validate(&w);
    if !violations.is_empty() {
        for v in &violations {
            let _ = writeln!(out, "{v}");
        }
        return Err(Failure {
            code: 1,
            message: format!("{}: workflow is not structurally valid", path.display()),
        });
    }
    Ok(compile(&w).expect("validated workflow compiles"))
}

fn load_formula(path: &Path) -> Result<LtlFormula, Failure> {
    parse_formula(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn seed() -> Result<u64, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("{SEED_VAR} must be an unsigned integer, got `{s}`"))),
        Err(_) => Ok(0),
    }
}

fn run_check(formula: &LtlFormula, k: usize) -> Result<Verdict, Failure> {
    let cfg = CheckConfig::new(k).with_seed(seed()?);
    check(formula, cfg).map_err(|e| usage(e.to_string()))
}

fn show_witness(
    w: &LassoTrace,
    cu: &CompilationUnit,
    trace: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    match explain(w, cu) {
        Ok(e) => {
            let _ = write!(out, "{e}");
        }
        Err(e) => return Err(usage(format!("internal error: {e}"))),
    }
    if let Some(p) = trace {
        write_file(p, &format!("{}\n", w.to_json()))?;
        let _ = writeln!(out, "witness written to {}", p.display());
    }
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let started = Instant::now();
    let result = dispatch(cli.command, out);
    match result {
        Ok((code, mut report)) => {
            report.seconds = started.elapsed().as_secs_f64();
            report.peak_mb = peak_memory_mb();
            let _ = writeln!(err, "{report}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn report(command: &str, verdict: impl Into<String>, witness: Option<PathBuf>) -> RunReport {
    RunReport {
        command: command.to_string(),
        verdict: verdict.into(),
        seconds: 0.0,
        peak_mb: None,
        witness,
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(i32, RunReport), Failure> {
    match cmd {
        Command::Validate { workflow } => {
            let w = load_workflow(&workflow)?;
            let violations = validate(&w);
            for v in &violations {
                let _ = writeln!(out, "{v}");
            }
            let code = i32::from(!violations.is_empty());
            let verdict = format!("{} violation(s)", violations.len());
            Ok((code, report("validate", verdict, None)))
        }
        Command::Compile { workflow, emit, k, out: target } => {
            let cu = load_unit(&workflow, out)?;
            let text = match emit {
                Emit::Ltl => cu.to_listing(),
                Emit::Dimacs | Emit::Smt2 => {
                    let k = k.ok_or_else(|| usage("--emit dimacs and --emit smt2 need -k"))?;
                    let inst = encode(&cu.model_formula(), k as usize)
                        .map_err(|e| usage(e.to_string()))?;
                    if emit == Emit::Dimacs {
                        export_dimacs(&inst)
                    } else {
                        export_smtlib_cnf(&inst)
                    }
                }
            };
            match &target {
                Some(p) => write_file(p, &text)?,
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
            Ok((0, report("compile", "emitted", target)))
        }
        Command::Verify { workflow, property, k, trace } => {
            let cu = load_unit(&workflow, out)?;
            let p = load_formula(&property)?;
            let k = k as usize;
            let unknown: Vec<String> = p.atoms().difference(&cu.alphabet).cloned().collect();
            if !unknown.is_empty() {
                return Err(usage(format!(
                    "property mentions names not in the workflow: {}",
                    unknown.join(", ")
                )));
            }
            let f = LtlFormula::and(cu.model_formula(), LtlFormula::not(p));
            match run_check(&f, k)? {
                Verdict::UnsatUpTo(_) => {
                    let _ = writeln!(out, "HOLDS (bounded, k={k})");
                    Ok((0, report("verify", "HOLDS", None)))
                }
                Verdict::Sat(w) => {
                    let _ = writeln!(out, "VIOLATED (k={k})");
                    show_witness(&w, &cu, trace.as_deref(), out)?;
                    Ok((1, report("verify", "VIOLATED", trace)))
                }
            }
        }
        Command::CheckModel { workflow, k, assume, trace } => {
            let cu = load_unit(&workflow, out)?;
            let k = k as usize;
            let mut f = cu.model_formula();
            if let Some(src) = assume {
                let extra = parse_formula(&src).map_err(|e| usage(format!("--assume: {e}")))?;
                f = LtlFormula::and(f, extra);
            }
            match run_check(&f, k)? {
                Verdict::Sat(w) => {
                    let _ = writeln!(out, "SAT (k={k})");
                    show_witness(&w, &cu, trace.as_deref(), out)?;
                    Ok((0, report("check-model", "SAT", trace)))
                }
                Verdict::UnsatUpTo(_) => {
                    let _ = writeln!(
                        out,
                        "UNSAT (bounded, k={k}): the model admits no execution and is contradictory"
                    );
                    Ok((1, report("check-model", "UNSAT", None)))
                }
            }
        }
        Command::Oracle { formula, alphabet, max_total } => {
            let f = load_formula(&formula)?;
            let alphabet = alphabet.unwrap_or_else(|| f.atoms().into_iter().collect());
            let spec = EnumerationSpec::new(alphabet, max_total).map_err(|e| usage(e.to_string()))?;
            match enumerate_sat(&f, &spec).map_err(|e| usage(e.to_string()))? {
                Some(w) => {
                    let _ = writeln!(out, "{}", w.to_json());
                    Ok((0, report("oracle", "found", None)))
                }
                None => {
                    let _ = writeln!(out, "none");
                    Ok((1, report("oracle", "none", None)))
                }
            }
        }
    }
}
