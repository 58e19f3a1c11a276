use std::fmt;

use super::{Constraint, Formula, FormulaKind, Rel};

// Binding strength, loosest first.
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNTIL: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;

fn level(f: &Formula) -> u8 {
    use FormulaKind::*;
    match f.kind {
        Implies(..) => IMPLIES,
        Or(..) => OR,
        And(..) => AND,
        Until(..) => UNTIL,
        Not(_) | Next(_) | Finally(_) | Globally(_) | Coalition(..) => UNARY,
        Bool(_) | Prop(_) | Constraint(_) => ATOM,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(f) < min {
        out.write_str("(")?;
        write_node(f, out)?;
        out.write_str(")")
    } else {
        write_node(f, out)
    }
}

fn write_node(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    use FormulaKind::*;
    match &f.kind {
        Bool(b) => write!(out, "{b}"),
        Prop(p) => out.write_str(p),
        Constraint(c) => write!(out, "{c}"),
        Not(a) => {
            out.write_str("!")?;
            write_at(a, UNARY, out)
        }
        Next(a) | Finally(a) | Globally(a) => {
            let op = match &f.kind {
                Next(_) => "X ",
                Finally(_) => "F ",
                _ => "G ",
            };
            out.write_str(op)?;
            write_at(a, UNARY, out)
        }
        Coalition(agents, a) => {
            out.write_str("<<")?;
            for (i, ag) in agents.iter().enumerate() {
                if i > 0 {
                    out.write_str(",")?;
                }
                out.write_str(ag)?;
            }
            out.write_str(">> ")?;
            write_at(a, UNARY, out)
        }
        Or(a, b) => {
            write_at(a, OR, out)?;
            out.write_str(" | ")?;
            write_at(b, OR + 1, out)
        }
        And(a, b) => {
            write_at(a, AND, out)?;
            out.write_str(" & ")?;
            write_at(b, AND + 1, out)
        }
        Implies(a, b) => {
            write_at(a, IMPLIES + 1, out)?;
            out.write_str(" -> ")?;
            write_at(b, IMPLIES, out)
        }
        Until(a, b) => {
            write_at(a, UNTIL + 1, out)?;
            out.write_str(" U ")?;
            write_at(b, UNTIL, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(self, f)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rel, self.modulus) {
            (Rel::Mod, Some(k)) => write!(f, "r mod {k} = {}", self.constant),
            (rel, _) => write!(f, "r {} {}", rel.symbol(), self.constant),
        }
    }
}
