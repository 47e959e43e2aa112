//! DIMACS and SMT-LIB 2 renderings of an instance, and readers for both.
//!
//! Variable labels travel in comments (`c var <n> <label>` and
//! `; v<n> <label>`) so that a re-imported instance still decodes.

use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use super::cnf::{CnfInstance, VarLabel};
use super::encode::{encode, EncodeError};
use crate::ltl::LtlFormula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ImportError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ImportError {
    ImportError {
        line,
        message: message.into(),
    }
}

pub fn export_dimacs(c: &CnfInstance) -> String {
    let mut out = String::new();
    if let Some(k) = c.bound() {
        writeln!(out, "c bound {k}").unwrap();
    }
    for (i, def) in c.node_definitions().iter().enumerate() {
        writeln!(out, "c node {i} = {def}").unwrap();
    }
    for (i, label) in c.labels().iter().enumerate() {
        if *label != VarLabel::Unknown {
            writeln!(out, "c var {} {label}", i + 1).unwrap();
        }
    }
    writeln!(out, "p cnf {} {}", c.num_vars(), c.num_clauses()).unwrap();
    for clause in c.clauses() {
        for lit in clause {
            write!(out, "{lit} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<CnfInstance, ImportError> {
    let mut header: Option<(usize, usize)> = None;
    let mut bound = None;
    let mut nodes = Vec::new();
    let mut labels: Vec<(usize, VarLabel)> = Vec::new();
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line == "%" {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            let rest = rest.trim();
            if let Some(k) = rest.strip_prefix("bound ") {
                bound = k.trim().parse().ok();
            } else if let Some(def) = rest.strip_prefix("node ") {
                if let Some((_, d)) = def.split_once(" = ") {
                    nodes.push(d.to_string());
                }
            } else if let Some(var) = rest.strip_prefix("var ") {
                if let Some((n, label)) = var.split_once(' ') {
                    if let (Ok(n), Some(l)) = (n.parse::<usize>(), VarLabel::parse(label)) {
                        labels.push((n, l));
                    }
                }
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if header.is_some() {
                return Err(err(line_no, "duplicate problem line"));
            }
            match parts.as_slice() {
                ["cnf", v, c] => {
                    let v = v.parse().map_err(|_| err(line_no, "bad variable count"))?;
                    let c = c.parse().map_err(|_| err(line_no, "bad clause count"))?;
                    header = Some((v, c));
                }
                _ => return Err(err(line_no, "expected `p cnf <vars> <clauses>`")),
            }
            continue;
        }
        let (nv, _) = header.ok_or_else(|| err(line_no, "clause before problem line"))?;
        for tok in line.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| err(line_no, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > nv {
                return Err(err(line_no, format!("literal {lit} exceeds variable count {nv}")));
            } else {
                current.push(lit);
            }
        }
    }
    let (nv, nc) = header.ok_or_else(|| err(text.lines().count(), "missing problem line"))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != nc {
        return Err(err(
            text.lines().count(),
            format!("header announces {nc} clauses, found {}", clauses.len()),
        ));
    }
    Ok(assemble(nv, clauses, labels, nodes, bound))
}

fn assemble(
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
    labels: Vec<(usize, VarLabel)>,
    nodes: Vec<String>,
    bound: Option<usize>,
) -> CnfInstance {
    let mut c = CnfInstance::from_clauses(num_vars, clauses);
    for (n, l) in labels {
        if (1..=num_vars).contains(&n) {
            c.labels[n - 1] = l;
        }
    }
    c.nodes = nodes;
    c.k = bound;
    c
}

/// Quantifier-free boolean SMT-LIB 2 script with the same clauses.
pub fn export_smtlib_cnf(c: &CnfInstance) -> String {
    let mut out = String::new();
    if let Some(k) = c.bound() {
        writeln!(out, "; bound {k}").unwrap();
    }
    for (i, label) in c.labels().iter().enumerate() {
        if *label != VarLabel::Unknown {
            writeln!(out, "; v{} {label}", i + 1).unwrap();
        }
    }
    out.push_str("(set-logic QF_UF)\n");
    for v in 1..=c.num_vars() {
        writeln!(out, "(declare-const v{v} Bool)").unwrap();
    }
    let lit = |x: i32| {
        if x > 0 {
            format!("v{x}")
        } else {
            format!("(not v{})", -x)
        }
    };
    for clause in c.clauses() {
        match clause.as_slice() {
            [] => out.push_str("(assert false)\n"),
            [x] => writeln!(out, "(assert {})", lit(*x)).unwrap(),
            xs => {
                let body: Vec<String> = xs.iter().map(|&x| lit(x)).collect();
                writeln!(out, "(assert (or {}))", body.join(" ")).unwrap();
            }
        }
    }
    out.push_str("(check-sat)\n(get-model)\n");
    out
}

pub fn export_smtlib(formula: &LtlFormula, k: usize) -> Result<String, EncodeError> {
    Ok(export_smtlib_cnf(&encode(formula, k)?))
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn line(&self) -> usize {
        match self {
            Sexp::Atom(_, l) | Sexp::List(_, l) => *l,
        }
    }
}

fn tokenize(text: &str) -> Result<(Vec<Sexp>, Vec<(usize, String)>), ImportError> {
    let mut comments = Vec::new();
    let mut stack: Vec<(Vec<Sexp>, usize)> = vec![(Vec::new(), 0)];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (code, comment) = match raw.find(';') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            comments.push((line_no, c.trim().to_string()));
        }
        let spaced = code.replace('(', " ( ").replace(')', " ) ");
        for tok in spaced.split_whitespace() {
            match tok {
                "(" => stack.push((Vec::new(), line_no)),
                ")" => {
                    let (items, start) = stack.pop().unwrap();
                    let parent = stack.last_mut().ok_or_else(|| err(line_no, "unbalanced `)`"))?;
                    parent.0.push(Sexp::List(items, start));
                }
                atom => stack.last_mut().unwrap().0.push(Sexp::Atom(atom.to_string(), line_no)),
            }
        }
    }
    if stack.len() != 1 {
        return Err(err(text.lines().count(), "unbalanced `(`"));
    }
    Ok((stack.pop().unwrap().0, comments))
}

/// Reads back scripts in the shape produced by [`export_smtlib_cnf`]:
/// boolean constants, and assertions that are literals or disjunctions of
/// literals.
pub fn parse_smtlib(text: &str) -> Result<CnfInstance, ImportError> {
    let (forms, comments) = tokenize(text)?;
    let mut vars: HashMap<String, i32> = HashMap::new();
    let mut clauses = Vec::new();
    for form in &forms {
        let line = form.line();
        let Sexp::List(items, _) = form else {
            return Err(err(line, "expected a command"));
        };
        let head = match items.first() {
            Some(Sexp::Atom(h, _)) => h.as_str(),
            _ => return Err(err(line, "expected a command name")),
        };
        match head {
            "set-logic" | "set-option" | "set-info" | "check-sat" | "get-model" | "exit" => {}
            "declare-const" => match items.as_slice() {
                [_, Sexp::Atom(name, _), Sexp::Atom(sort, _)] if sort == "Bool" => {
                    let next = vars.len() as i32 + 1;
                    if vars.insert(name.clone(), next).is_some() {
                        return Err(err(line, format!("`{name}` declared twice")));
                    }
                }
                _ => return Err(err(line, "only `(declare-const <name> Bool)` is supported")),
            },
            "assert" => {
                let [_, body] = items.as_slice() else {
                    return Err(err(line, "assert takes one term"));
                };
                clauses.push(clause_of(body, &vars)?);
            }
            other => return Err(err(line, format!("unsupported command `{other}`"))),
        }
    }
    let mut labels = Vec::new();
    let mut bound = None;
    for (_, c) in comments {
        if let Some(k) = c.strip_prefix("bound ") {
            bound = k.trim().parse().ok();
        } else if let Some((name, label)) = c.split_once(' ') {
            if let (Some(&v), Some(l)) = (vars.get(name), VarLabel::parse(label)) {
                labels.push((v as usize, l));
            }
        }
    }
    let mut clauses: Vec<Vec<i32>> = clauses.into_iter().flatten().collect();
    clauses.shrink_to_fit();
    Ok(assemble(vars.len(), clauses, labels, Vec::new(), bound))
}

/// `None` inside the result means the assertion is trivially true.
fn clause_of(term: &Sexp, vars: &HashMap<String, i32>) -> Result<Option<Vec<i32>>, ImportError> {
    let literal = |t: &Sexp| -> Result<Option<i32>, ImportError> {
        match t {
            Sexp::Atom(a, _) if a == "true" => Ok(None),
            Sexp::Atom(a, _) if a == "false" => Ok(Some(0)),
            Sexp::Atom(a, l) => vars
                .get(a)
                .copied()
                .map(Some)
                .ok_or_else(|| err(*l, format!("undeclared `{a}`"))),
            Sexp::List(xs, l) => match xs.as_slice() {
                [Sexp::Atom(n, _), Sexp::Atom(a, _)] if n == "not" => match vars.get(a) {
                    Some(&v) => Ok(Some(-v)),
                    None if a == "true" => Ok(Some(0)),
                    None if a == "false" => Ok(None),
                    None => Err(err(*l, format!("undeclared `{a}`"))),
                },
                _ => Err(err(*l, "expected a literal")),
            },
        }
    };
    let items: Vec<&Sexp> = match term {
        Sexp::List(xs, _) if matches!(xs.first(), Some(Sexp::Atom(h, _)) if h == "or") => {
            xs[1..].iter().collect()
        }
        t => vec![t],
    };
    let mut clause = Vec::new();
    for it in items {
        match literal(it)? {
            None => return Ok(None),
            Some(0) => {}
            Some(x) => clause.push(x),
        }
    }
    Ok(Some(clause))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_clause_dimacs() {
        let c = CnfInstance::from_clauses(1, vec![vec![1]]);
        assert_eq!(export_dimacs(&c), "p cnf 1 1\n1 0\n");
        assert_eq!(parse_dimacs("p cnf 1 1\n1 0\n").unwrap(), c);
    }

    #[test]
    fn dimacs_errors() {
        assert!(parse_dimacs("1 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
    }

    #[test]
    fn smtlib_roundtrip_keeps_clauses() {
        let c = CnfInstance::from_clauses(3, vec![vec![1, -2], vec![3], vec![], vec![-1, 2, -3]]);
        let text = export_smtlib_cnf(&c);
        assert!(text.contains("(assert (or v1 (not v2)))"));
        assert!(text.contains("(assert false)"));
        assert_eq!(parse_smtlib(&text).unwrap(), c);
    }

    #[test]
    fn labels_survive_reimport() {
        let f = crate::ltl::parse_formula("G F p").unwrap();
        let c = encode(&f, 3).unwrap();
        assert_eq!(parse_dimacs(&export_dimacs(&c)).unwrap().labels(), c.labels());
        assert_eq!(parse_smtlib(&export_smtlib_cnf(&c)).unwrap().labels(), c.labels());
    }
}
