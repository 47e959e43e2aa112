//! Canonical text form. Parsing the output yields the same tree.

use std::fmt;

use super::LtlFormula;

// Binding strength, loosest first.
const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const TEMPORAL: u8 = 5;
const UNARY: u8 = 6;
const ATOM: u8 = 7;

enum Assoc {
    Left,
    Right,
}

fn level(f: &LtlFormula) -> u8 {
    match f {
        LtlFormula::Prop(_) | LtlFormula::True | LtlFormula::False => ATOM,
        LtlFormula::Not(_)
        | LtlFormula::Next(_)
        | LtlFormula::Prev(_)
        | LtlFormula::Eventually(_)
        | LtlFormula::Globally(_) => UNARY,
        LtlFormula::Until(..)
        | LtlFormula::Since(..)
        | LtlFormula::Release(..)
        | LtlFormula::Trigger(..) => TEMPORAL,
        LtlFormula::And(..) => AND,
        LtlFormula::Or(..) => OR,
        LtlFormula::Implies(..) => IMPLIES,
        LtlFormula::Iff(..) => IFF,
    }
}

fn write_prefix(f: &mut fmt::Formatter<'_>, op: &str, inner: &LtlFormula) -> fmt::Result {
    if level(inner) == ATOM {
        if op == "!" {
            write!(f, "!{inner}")
        } else {
            write!(f, "{op} {inner}")
        }
    } else {
        write!(f, "{op}({inner})")
    }
}

fn write_infix(
    f: &mut fmt::Formatter<'_>,
    op: &str,
    own: u8,
    assoc: Assoc,
    l: &LtlFormula,
    r: &LtlFormula,
) -> fmt::Result {
    let (wrap_l, wrap_r) = match assoc {
        Assoc::Left => (level(l) < own, level(r) <= own),
        Assoc::Right => (level(l) <= own, level(r) < own),
    };
    if wrap_l {
        write!(f, "({l})")?;
    } else {
        write!(f, "{l}")?;
    }
    write!(f, " {op} ")?;
    if wrap_r {
        write!(f, "({r})")
    } else {
        write!(f, "{r}")
    }
}

impl fmt::Display for LtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LtlFormula::Prop(p) => f.write_str(p),
            LtlFormula::True => f.write_str("true"),
            LtlFormula::False => f.write_str("false"),
            LtlFormula::Not(x) => write_prefix(f, "!", x),
            LtlFormula::Next(x) => write_prefix(f, "X", x),
            LtlFormula::Prev(x) => write_prefix(f, "Y", x),
            LtlFormula::Eventually(x) => write_prefix(f, "F", x),
            LtlFormula::Globally(x) => write_prefix(f, "G", x),
            LtlFormula::And(l, r) => write_infix(f, "&", AND, Assoc::Left, l, r),
            LtlFormula::Or(l, r) => write_infix(f, "|", OR, Assoc::Left, l, r),
            LtlFormula::Iff(l, r) => write_infix(f, "<->", IFF, Assoc::Left, l, r),
            LtlFormula::Implies(l, r) => write_infix(f, "->", IMPLIES, Assoc::Right, l, r),
            LtlFormula::Until(l, r) => write_infix(f, "U", TEMPORAL, Assoc::Right, l, r),
            LtlFormula::Since(l, r) => write_infix(f, "S", TEMPORAL, Assoc::Right, l, r),
            LtlFormula::Release(l, r) => write_infix(f, "R", TEMPORAL, Assoc::Right, l, r),
            LtlFormula::Trigger(l, r) => write_infix(f, "T", TEMPORAL, Assoc::Right, l, r),
        }
    }
}
