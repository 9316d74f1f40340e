//! Propositional formulas over a declared atom set.
//!
//! Connective precedence, tightest first: `~`, `&`, `|`, `->`, `<->`.
//! Implication is right-associative; the other binary connectives associate
//! to the left. The printer emits the minimal parenthesization that re-parses
//! to a structurally identical tree.

mod parse;

pub use parse::{parse_formula, ParseError};

use std::fmt;

/// Formula syntax tree. Atoms are stored by name; well-formedness against a
/// particular world space is established at parse or evaluation time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    // constructor, deliberately alongside `and`/`or` rather than ops::Not
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Atom names mentioned anywhere in the tree.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(name) => {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
            Formula::Not(inner) => inner.collect_atoms(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    // Binding strength; used by the printer to decide parenthesization.
    fn precedence(&self) -> u8 {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 5,
            Formula::Not(_) => 4,
            Formula::And(..) => 3,
            Formula::Or(..) => 2,
            Formula::Implies(..) => 1,
            Formula::Iff(..) => 0,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8, right_of_same: bool) -> fmt::Result {
        let prec = self.precedence();
        let needs_parens = prec < parent || (prec == parent && right_of_same);
        if needs_parens {
            write!(f, "(")?;
        }
        match self {
            Formula::True => write!(f, "true")?,
            Formula::False => write!(f, "false")?,
            Formula::Atom(name) => write!(f, "{}", name)?,
            Formula::Not(inner) => {
                write!(f, "~")?;
                inner.fmt_prec(f, 4, false)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 3, false)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 3, true)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 2, false)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 2, true)?;
            }
            Formula::Implies(a, b) => {
                // right-associative: the left child needs parens at equal precedence
                a.fmt_prec(f, 1, true)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 1, false)?;
            }
            Formula::Iff(a, b) => {
                a.fmt_prec(f, 0, false)?;
                write!(f, " <-> ")?;
                b.fmt_prec(f, 0, true)?;
            }
        }
        if needs_parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printer_minimal_parens() {
        let f = Formula::and(Formula::atom("a"), Formula::not(Formula::atom("b")));
        assert_eq!(f.to_string(), "a & ~b");

        let chain = Formula::implies(
            Formula::atom("a"),
            Formula::implies(Formula::atom("b"), Formula::atom("c")),
        );
        assert_eq!(chain.to_string(), "a -> b -> c");

        let left = Formula::implies(
            Formula::implies(Formula::atom("a"), Formula::atom("b")),
            Formula::atom("c"),
        );
        assert_eq!(left.to_string(), "(a -> b) -> c");

        let and_assoc = Formula::and(
            Formula::atom("a"),
            Formula::and(Formula::atom("b"), Formula::atom("c")),
        );
        assert_eq!(and_assoc.to_string(), "a & (b & c)");

        let mixed = Formula::or(
            Formula::and(Formula::atom("a"), Formula::atom("b")),
            Formula::atom("c"),
        );
        assert_eq!(mixed.to_string(), "a & b | c");

        let neg = Formula::not(Formula::or(Formula::atom("a"), Formula::atom("b")));
        assert_eq!(neg.to_string(), "~(a | b)");
    }
}
