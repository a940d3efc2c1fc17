//! LTL syntax over named atomic propositions, with the rewriting pipeline that
//! separates present obligations from future ones.

mod normal;
mod parse;
pub mod sat;
mod simplify;

use std::collections::BTreeSet;
use std::fmt;

pub use normal::{distrib, is_dnf, neg_f, nf, rwt, to_dnf};
pub use parse::{parse_formula, parse_formula_over};
pub use simplify::simplify;

/// Name of an atomic proposition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Self {
        Atom(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom(s.to_owned())
    }
}

/// An LTL formula. Conjunction and disjunction are binary; chains are
/// left-associated by the parser and by [`simplify`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Globally(Box<Formula>),
    Eventually(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }

    pub fn until(l: Formula, r: Formula) -> Formula {
        Formula::Until(Box::new(l), Box::new(r))
    }

    pub fn release(l: Formula, r: Formula) -> Formula {
        Formula::Release(Box::new(l), Box::new(r))
    }

    /// Left-associated conjunction of `parts`; `True` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-associated disjunction of `parts`; `False` when empty.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Formula::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Formula::False)
    }

    /// Literal: an atom or a negated atom.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(inner) => matches!(**inner, Formula::Atom(_)),
            _ => false,
        }
    }

    pub fn is_temporal(&self) -> bool {
        matches!(
            self,
            Formula::Next(_)
                | Formula::Globally(_)
                | Formula::Eventually(_)
                | Formula::Until(..)
                | Formula::Release(..)
        )
    }

    /// True when the formula contains no temporal operator at all.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_propositional(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.is_propositional() && r.is_propositional()
            }
            _ => false,
        }
    }

    /// Every temporal operator other than `X` sits below some `X`.
    pub fn temporal_below_next(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Next(_) => true,
            Formula::Globally(_) | Formula::Eventually(_) | Formula::Until(..) | Formula::Release(..) => false,
            Formula::Not(f) => f.temporal_below_next(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.temporal_below_next() && r.temporal_below_next()
            }
        }
    }

    /// Atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::Globally(f)
            | Formula::Eventually(f) => f.collect_atoms(out),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r)
            | Formula::Until(l, r)
            | Formula::Release(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::Globally(f)
            | Formula::Eventually(f) => 1 + f.depth(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r)
            | Formula::Until(l, r)
            | Formula::Release(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Top-level conjuncts of a left- or right-nested conjunction chain.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        flatten(self, &mut out, &|f| match f {
            Formula::And(l, r) => Some((l, r)),
            _ => None,
        });
        out
    }

    /// Top-level disjuncts of a disjunction chain.
    pub fn disjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        flatten(self, &mut out, &|f| match f {
            Formula::Or(l, r) => Some((l, r)),
            _ => None,
        });
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Until(..) | Formula::Release(..) => 5,
            Formula::Not(_) | Formula::Next(_) | Formula::Globally(_) | Formula::Eventually(_) => 6,
            Formula::True | Formula::False | Formula::Atom(_) => 7,
        }
    }
}

fn flatten<'a>(
    f: &'a Formula,
    out: &mut Vec<&'a Formula>,
    split: &dyn Fn(&'a Formula) -> Option<(&'a Formula, &'a Formula)>,
) {
    match split(f) {
        Some((l, r)) => {
            flatten(l, out, split);
            flatten(r, out, split);
        }
        None => out.push(f),
    }
}

/// Atoms occurring in `f`.
pub fn ap_formula(f: &Formula) -> BTreeSet<Atom> {
    f.atoms()
}

/// Canonical text of `f`; [`parse_formula`] reads it back to the same tree.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

#[derive(Clone, Copy, PartialEq)]
enum Assoc {
    Left,
    Right,
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => out.write_str("true"),
            Formula::False => out.write_str("false"),
            Formula::Atom(a) => write!(out, "{a}"),
            Formula::Not(f) => {
                if f.precedence() == 7 {
                    write!(out, "!{f}")
                } else {
                    write!(out, "!({f})")
                }
            }
            Formula::Next(f) => write_prefix(out, "X", f),
            Formula::Globally(f) => write_prefix(out, "G", f),
            Formula::Eventually(f) => write_prefix(out, "F", f),
            Formula::And(l, r) => write_binary(out, self, "&", Assoc::Left, l, r),
            Formula::Or(l, r) => write_binary(out, self, "|", Assoc::Left, l, r),
            Formula::Implies(l, r) => write_binary(out, self, "->", Assoc::Right, l, r),
            Formula::Iff(l, r) => write_binary(out, self, "<->", Assoc::Left, l, r),
            Formula::Until(l, r) => write_binary(out, self, "U", Assoc::Right, l, r),
            Formula::Release(l, r) => write_binary(out, self, "R", Assoc::Right, l, r),
        }
    }
}

fn write_prefix(out: &mut fmt::Formatter<'_>, op: &str, f: &Formula) -> fmt::Result {
    if f.precedence() == 7 || f.is_literal() {
        write!(out, "{op} {f}")
    } else {
        write!(out, "{op} ({f})")
    }
}

fn write_binary(
    out: &mut fmt::Formatter<'_>,
    parent: &Formula,
    op: &str,
    assoc: Assoc,
    l: &Formula,
    r: &Formula,
) -> fmt::Result {
    let p = parent.precedence();
    let wrap_l = l.precedence() < p || (l.precedence() == p && assoc == Assoc::Right);
    let wrap_r = r.precedence() < p || (r.precedence() == p && assoc == Assoc::Left);
    write_operand(out, l, wrap_l)?;
    write!(out, " {op} ")?;
    write_operand(out, r, wrap_r)
}

fn write_operand(out: &mut fmt::Formatter<'_>, f: &Formula, wrap: bool) -> fmt::Result {
    if wrap {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}
