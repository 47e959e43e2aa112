//! Parser for the formula surface syntax.
//!
//! Precedence from loosest to tightest: `<->`, `->` (right), `|`, `&`,
//! the binary temporal operators `U S R T` (right), then the prefix
//! operators `! X Y F G`. `&`, `|` and `<->` associate to the left.

use thiserror::Error;

use super::LtlFormula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula syntax error at line {line}, column {column}: {message}")]
pub struct FormulaParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Unary(char),
    Binary(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Unary(c) | Tok::Binary(c) => format!("`{c}`"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, FormulaParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| FormulaParseError {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, width) = match c {
            '!' => (Tok::Not, 1),
            '&' => (Tok::And, 1),
            '|' => (Tok::Or, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '-' if chars.get(i + 1) == Some(&'>') => (Tok::Implies, 2),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                (Tok::Iff, 3)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "X" | "Y" | "F" | "G" => Tok::Unary(word.chars().next().unwrap()),
                    "U" | "S" | "R" | "T" => Tok::Binary(word.chars().next().unwrap()),
                    _ => Tok::Ident(word),
                };
                (tok, j - start)
            }
            other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned {
            tok,
            line: tl,
            column: tc,
        });
        i += width;
        col += width;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn error_here(&self, message: impl Into<String>) -> FormulaParseError {
        let (line, column) = self
            .toks
            .get(self.pos)
            .map(|s| (s.line, s.column))
            .unwrap_or(self.end);
        FormulaParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn parse_iff(&mut self) -> Result<LtlFormula, FormulaParseError> {
        let mut lhs = self.parse_implies()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            let rhs = self.parse_implies()?;
            lhs = LtlFormula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_implies(&mut self) -> Result<LtlFormula, FormulaParseError> {
        let lhs = self.parse_or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.parse_implies()?;
            return Ok(LtlFormula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn parse_or(&mut self) -> Result<LtlFormula, FormulaParseError> {
        let mut lhs = self.parse_and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.parse_and()?;
            lhs = LtlFormula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<LtlFormula, FormulaParseError> {
        let mut lhs = self.parse_temporal()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let rhs = self.parse_temporal()?;
            lhs = LtlFormula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_temporal(&mut self) -> Result<LtlFormula, FormulaParseError> {
        let lhs = self.parse_unary()?;
        if let Some(Tok::Binary(op)) = self.peek() {
            let op = *op;
            self.pos += 1;
            let rhs = self.parse_temporal()?;
            return Ok(match op {
                'U' => LtlFormula::until(lhs, rhs),
                'S' => LtlFormula::since(lhs, rhs),
                'R' => LtlFormula::release(lhs, rhs),
                _ => LtlFormula::trigger(lhs, rhs),
            });
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<LtlFormula, FormulaParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(LtlFormula::not(self.parse_unary()?))
            }
            Some(Tok::Unary(op)) => {
                let op = *op;
                self.pos += 1;
                let inner = self.parse_unary()?;
                Ok(match op {
                    'X' => LtlFormula::next(inner),
                    'Y' => LtlFormula::prev(inner),
                    'F' => LtlFormula::eventually(inner),
                    _ => LtlFormula::globally(inner),
                })
            }
            _ => self.parse_atom(),
        }
    }

    fn parse_atom(&mut self) -> Result<LtlFormula, FormulaParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error_here("unexpected end of formula"));
        };
        match tok {
            Tok::Ident(name) => {
                self.pos += 1;
                Ok(LtlFormula::Prop(name))
            }
            Tok::True => {
                self.pos += 1;
                Ok(LtlFormula::True)
            }
            Tok::False => {
                self.pos += 1;
                Ok(LtlFormula::False)
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.parse_iff()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error_here("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(self.error_here(format!("unexpected {}", other.describe()))),
        }
    }
}

/// Parses one formula; `#` starts a comment running to the end of the line.
pub fn parse_formula(src: &str) -> Result<LtlFormula, FormulaParseError> {
    let toks = lex(src)?;
    let end = src
        .lines()
        .enumerate()
        .last()
        .map(|(i, l)| (i + 1, l.chars().count() + 1))
        .unwrap_or((1, 1));
    let mut parser = Parser { toks, pos: 0, end };
    let f = parser.parse_iff()?;
    if let Some(t) = parser.peek() {
        let msg = format!("unexpected {} after complete formula", t.describe());
        return Err(parser.error_here(msg));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LtlFormula {
        LtlFormula::prop(s)
    }

    #[test]
    fn property_one_tree() {
        let got = parse_formula("G(!tf & !hf & !sf) -> F(end)").unwrap();
        let want = LtlFormula::implies(
            LtlFormula::globally(LtlFormula::and(
                LtlFormula::and(LtlFormula::not(p("tf")), LtlFormula::not(p("hf"))),
                LtlFormula::not(p("sf")),
            )),
            LtlFormula::eventually(p("end")),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_formula("!p U q & r").unwrap(),
            LtlFormula::and(LtlFormula::until(LtlFormula::not(p("p")), p("q")), p("r"))
        );
        assert_eq!(
            parse_formula("a U b S c").unwrap(),
            LtlFormula::until(p("a"), LtlFormula::since(p("b"), p("c")))
        );
        assert_eq!(
            parse_formula("a -> b -> c").unwrap(),
            LtlFormula::implies(p("a"), LtlFormula::implies(p("b"), p("c")))
        );
        assert_eq!(
            parse_formula("a | b & c <-> d").unwrap(),
            LtlFormula::iff(LtlFormula::or(p("a"), LtlFormula::and(p("b"), p("c"))), p("d"))
        );
        assert_eq!(
            parse_formula("F G Bill <-> F G Ship").unwrap(),
            LtlFormula::iff(
                LtlFormula::eventually(LtlFormula::globally(p("Bill"))),
                LtlFormula::eventually(LtlFormula::globally(p("Ship")))
            )
        );
    }

    #[test]
    fn dangling_binary_operator_is_an_error() {
        let e = parse_formula("p U").unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        assert!(parse_formula("(p & q").is_err());
        assert!(parse_formula("p q").is_err());
        assert!(parse_formula("p $ q").is_err());
        assert!(parse_formula("").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(parse_formula("# header\np # trailing\n").unwrap(), p("p"));
    }
}
