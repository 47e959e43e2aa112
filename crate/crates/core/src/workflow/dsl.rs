//! Line-oriented workflow description language.
//!
//! ```text
//! start start
//! activity A        # comments run to end of line
//! end end
//! trans t0 : start -> A
//! trans t1 : A -> end
//! exception boom punctual
//! throw A { boom }
//! ```
//!
//! Declarations may appear in any order; references are resolved after the
//! whole file has been read.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{ExceptionDuration, ExceptionRole, PlaceKind, Workflow};
use crate::ltl::RESERVED_WORDS;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkflowParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: duplicate name `{name}`")]
    Duplicate {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("line {line}, column {column}: undeclared {what} `{name}`")]
    Undeclared {
        line: usize,
        column: usize,
        what: &'static str,
        name: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    Comma,
    Colon,
    Arrow,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

#[derive(Debug, Clone)]
struct Name {
    text: String,
    line: usize,
    column: usize,
}

enum Decl {
    Place(PlaceKind, Name),
    Trans(Name, Name, Name),
    Exception(Name, ExceptionDuration),
    Role(ExceptionRole, Name, Vec<Name>),
}

fn lex(src: &str) -> Result<Vec<Spanned>, WorkflowParseError> {
    let mut out = Vec::new();
    for (ln, text) in src.lines().enumerate() {
        let line = ln + 1;
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let (tok, width) = match c {
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                ',' => (Tok::Comma, 1),
                ':' => (Tok::Colon, 1),
                '-' if chars.get(i + 1) == Some(&'>') => (Tok::Arrow, 2),
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    (Tok::Ident(chars[i..j].iter().collect()), j - i)
                }
                other => {
                    return Err(WorkflowParseError::Syntax {
                        line,
                        column,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            };
            out.push(Spanned { tok, line, column });
            i += width;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn syntax(&self, message: impl Into<String>) -> WorkflowParseError {
        let (line, column) = self
            .toks
            .get(self.pos)
            .map(|t| (t.line, t.column))
            .unwrap_or(self.eof);
        WorkflowParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn ident(&mut self, what: &str) -> Result<Name, WorkflowParseError> {
        match self.toks.get(self.pos) {
            Some(Spanned {
                tok: Tok::Ident(s),
                line,
                column,
            }) => {
                let name = Name {
                    text: s.clone(),
                    line: *line,
                    column: *column,
                };
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.syntax(format!("expected {what}"))),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), WorkflowParseError> {
        if self.toks.get(self.pos).map(|t| &t.tok) == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    fn decl(&mut self) -> Result<Decl, WorkflowParseError> {
        let kw = self.ident("a declaration keyword")?;
        let kind = match kw.text.as_str() {
            "activity" => Some(PlaceKind::Activity),
            "cond" => Some(PlaceKind::Conditional),
            "splitjoin" => Some(PlaceKind::SplitJoin),
            "start" => Some(PlaceKind::Start),
            "end" => Some(PlaceKind::End),
            _ => None,
        };
        if let Some(kind) = kind {
            return Ok(Decl::Place(kind, self.ident("a place name")?));
        }
        let role = match kw.text.as_str() {
            "throw" => Some(ExceptionRole::Throw),
            "catch" => Some(ExceptionRole::Catch),
            "probe" => Some(ExceptionRole::Probe),
            _ => None,
        };
        if let Some(role) = role {
            let place = self.ident("an activity name")?;
            self.expect(Tok::LBrace, "`{`")?;
            let mut names = vec![self.ident("an exception name")?];
            while self.toks.get(self.pos).map(|t| &t.tok) == Some(&Tok::Comma) {
                self.pos += 1;
                names.push(self.ident("an exception name")?);
            }
            self.expect(Tok::RBrace, "`}` or `,`")?;
            return Ok(Decl::Role(role, place, names));
        }
        match kw.text.as_str() {
            "trans" => {
                let name = self.ident("a transition name")?;
                self.expect(Tok::Colon, "`:`")?;
                let source = self.ident("a source place")?;
                self.expect(Tok::Arrow, "`->`")?;
                let target = self.ident("a target place")?;
                Ok(Decl::Trans(name, source, target))
            }
            "exception" => {
                let name = self.ident("an exception name")?;
                let dur = self.ident("`punctual` or `permanent`")?;
                let duration = match dur.text.as_str() {
                    "punctual" => ExceptionDuration::Punctual,
                    "permanent" => ExceptionDuration::Permanent,
                    _ => {
                        self.pos -= 1;
                        return Err(self.syntax("expected `punctual` or `permanent`"));
                    }
                };
                Ok(Decl::Exception(name, duration))
            }
            _ => {
                self.pos -= 1;
                Err(self.syntax(format!("unknown declaration `{}`", kw.text)))
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum NameKind {
    Place,
    Transition,
    Exception,
}

/// Parses the workflow language. Structural soundness is not checked here;
/// run [`validate`](super::validate) on the result.
pub fn parse_workflow(src: &str) -> Result<Workflow, WorkflowParseError> {
    let toks = lex(src)?;
    let eof = (
        src.lines().count().max(1),
        src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1),
    );
    let mut parser = Parser { toks, pos: 0, eof };
    let mut decls = Vec::new();
    while parser.pos < parser.toks.len() {
        decls.push(parser.decl()?);
    }

    let mut names: HashMap<String, NameKind> = HashMap::new();
    let mut declare = |n: &Name, kind: NameKind| -> Result<(), WorkflowParseError> {
        if RESERVED_WORDS.contains(&n.text.as_str()) {
            return Err(WorkflowParseError::Syntax {
                line: n.line,
                column: n.column,
                message: format!("`{}` is reserved by the formula syntax", n.text),
            });
        }
        if names.insert(n.text.clone(), kind).is_some() {
            return Err(WorkflowParseError::Duplicate {
                line: n.line,
                column: n.column,
                name: n.text.clone(),
            });
        }
        Ok(())
    };
    for d in &decls {
        match d {
            Decl::Place(_, n) => declare(n, NameKind::Place)?,
            Decl::Trans(n, ..) => declare(n, NameKind::Transition)?,
            Decl::Exception(n, _) => declare(n, NameKind::Exception)?,
            Decl::Role(..) => {}
        }
    }
    let resolve = |n: &Name, kind: NameKind, what: &'static str| {
        if names.get(&n.text) == Some(&kind) {
            Ok(())
        } else {
            Err(WorkflowParseError::Undeclared {
                line: n.line,
                column: n.column,
                what,
                name: n.text.clone(),
            })
        }
    };

    let mut b = Workflow::builder();
    for d in &decls {
        b = match d {
            Decl::Place(kind, n) => b.place(&n.text, *kind),
            Decl::Trans(n, s, t) => {
                resolve(s, NameKind::Place, "place")?;
                resolve(t, NameKind::Place, "place")?;
                b.transition(&n.text, &s.text, &t.text)
            }
            Decl::Exception(n, dur) => b.exception(&n.text, *dur),
            Decl::Role(role, place, excs) => {
                resolve(place, NameKind::Place, "place")?;
                for e in excs {
                    resolve(e, NameKind::Exception, "exception")?;
                }
                let ex: Vec<&str> = excs.iter().map(|e| e.text.as_str()).collect();
                b.role(*role, &place.text, &ex)
            }
        };
    }
    Ok(b.build().expect("names were resolved above"))
}

impl fmt::Display for Workflow {
    /// Canonical text: places, exceptions, transitions, then role sets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.places() {
            writeln!(f, "{} {}", p.kind.keyword(), p.id)?;
        }
        for e in self.exceptions() {
            let dur = match e.duration {
                ExceptionDuration::Punctual => "punctual",
                ExceptionDuration::Permanent => "permanent",
            };
            writeln!(f, "exception {} {}", e.name, dur)?;
        }
        for t in self.transitions() {
            writeln!(f, "trans {} : {} -> {}", t.id, t.source, t.target)?;
        }
        for (role, place, set) in self.role_entries() {
            let items: Vec<&str> = set.iter().map(String::as_str).collect();
            writeln!(f, "{} {} {{ {} }}", role.keyword(), place, items.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "start start\nactivity A\nend end\ntrans t_start_A : start -> A\ntrans t_A_end : A -> end\n";

    #[test]
    fn minimal_workflow() {
        let w = parse_workflow(MINIMAL).unwrap();
        assert_eq!(w.places().len(), 3);
        assert_eq!(w.transitions().len(), 2);
        assert_eq!(parse_workflow(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn transition_reusing_a_place_name_is_a_duplicate() {
        let src = format!("{MINIMAL}trans A : start -> end\n");
        let err = parse_workflow(&src).unwrap_err();
        assert_eq!(
            err,
            WorkflowParseError::Duplicate {
                line: 6,
                column: 7,
                name: "A".into()
            }
        );
    }

    #[test]
    fn undeclared_references() {
        let err = parse_workflow("start s\ntrans t : s -> nowhere\n").unwrap_err();
        assert!(matches!(err, WorkflowParseError::Undeclared { what: "place", line: 2, column: 16, .. }));
        let err = parse_workflow("activity A\nthrow A { boom }\n").unwrap_err();
        assert!(matches!(err, WorkflowParseError::Undeclared { what: "exception", .. }));
        // A transition name is not a place.
        let err = parse_workflow("start s\nactivity A\ntrans t : s -> A\ntrans u : t -> A\n").unwrap_err();
        assert!(matches!(err, WorkflowParseError::Undeclared { what: "place", .. }));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_workflow("start s\ntrans t s -> A\n").unwrap_err();
        assert_eq!(
            err,
            WorkflowParseError::Syntax {
                line: 2,
                column: 9,
                message: "expected `:`".into()
            }
        );
        assert!(matches!(
            parse_workflow("exception e sometimes").unwrap_err(),
            WorkflowParseError::Syntax { column: 13, .. }
        ));
        assert!(matches!(
            parse_workflow("throw A { }").unwrap_err(),
            WorkflowParseError::Syntax { .. }
        ));
        assert!(matches!(
            parse_workflow("activity G").unwrap_err(),
            WorkflowParseError::Syntax { .. }
        ));
    }

    #[test]
    fn role_sets_accumulate() {
        let w = parse_workflow(
            "activity A\nexception e punctual\nexception f permanent\nprobe A { e }\nprobe A { f, e }\n",
        )
        .unwrap();
        assert_eq!(w.probe_set("A").len(), 2);
    }
}
