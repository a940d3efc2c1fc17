//! Expansion of temporal operators and the normal-form pipeline.

use super::Formula;

/// Unfolds every temporal operator one step with the expansion laws, so that
/// every remaining temporal operator other than `X` is guarded by an `X`.
pub fn rwt(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(g) => Formula::not(rwt(g)),
        And(l, r) => Formula::and(rwt(l), rwt(r)),
        Or(l, r) => Formula::or(rwt(l), rwt(r)),
        Implies(l, r) => Formula::implies(rwt(l), rwt(r)),
        Iff(l, r) => Formula::iff(rwt(l), rwt(r)),
        Next(_) => f.clone(),
        // φ U ψ = ψ ∨ (φ ∧ X(φ U ψ))
        Until(l, r) => Formula::or(rwt(r), Formula::and(rwt(l), Formula::next(f.clone()))),
        // φ R ψ = ψ ∧ (φ ∨ X(φ R ψ))
        Release(l, r) => Formula::and(rwt(r), Formula::or(rwt(l), Formula::next(f.clone()))),
        Globally(g) => Formula::and(rwt(g), Formula::next(f.clone())),
        Eventually(g) => Formula::or(rwt(g), Formula::next(f.clone())),
    }
}

/// A formula equivalent to `¬f`, with the negation pushed through the top
/// operator and temporal operators dualized.
pub fn neg_f(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True => False,
        False => True,
        Atom(_) => Formula::not(f.clone()),
        Not(g) => (**g).clone(),
        Implies(l, r) => Formula::and((**l).clone(), neg_f(r)),
        Iff(l, r) => Formula::or(
            Formula::and(neg_f(l), (**r).clone()),
            Formula::and((**l).clone(), neg_f(r)),
        ),
        Or(l, r) => Formula::and(neg_f(l), neg_f(r)),
        And(l, r) => Formula::or(neg_f(l), neg_f(r)),
        Release(l, r) => Formula::until(neg_f(l), neg_f(r)),
        Until(l, r) => Formula::release(neg_f(l), neg_f(r)),
        Globally(g) => Formula::eventually(neg_f(g)),
        Eventually(g) => Formula::globally(neg_f(g)),
        Next(g) => Formula::next(neg_f(g)),
    }
}

/// Normal form: no `→`/`↔`, and negation outside temporal scopes only on atoms.
pub fn nf(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(g) => match &**g {
            Atom(_) => f.clone(),
            other => nf(&neg_f(other)),
        },
        Implies(l, r) => Formula::or(nf(&Formula::not((**l).clone())), nf(r)),
        Iff(l, r) => Formula::or(
            Formula::and(nf(l), nf(r)),
            Formula::and(
                nf(&Formula::not((**l).clone())),
                nf(&Formula::not((**r).clone())),
            ),
        ),
        Or(l, r) => Formula::or(nf(l), nf(r)),
        And(l, r) => Formula::and(nf(l), nf(r)),
        Until(..) | Release(..) | Globally(_) | Eventually(_) | Next(_) => f.clone(),
    }
}

/// Whether `f` is in disjunctive normal form. `in_monomial` is set while
/// scanning below a conjunction.
pub fn is_dnf(f: &Formula, in_monomial: bool) -> bool {
    use Formula::*;
    match f {
        Or(l, r) => !in_monomial && is_dnf(l, false) && is_dnf(r, false),
        And(l, r) => is_dnf(l, true) && is_dnf(r, true),
        Not(g) => matches!(**g, Atom(_)),
        Implies(..) | Iff(..) => false,
        // Temporal operators are opaque monomial members.
        True | False | Atom(_) | Next(_) | Globally(_) | Eventually(_) | Until(..) | Release(..) => {
            true
        }
    }
}

/// One pass of distribution of `∧` over `∨`. Operand order is kept, so
/// monomials come out in source order.
pub fn distrib(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        And(l, r) => match (&**l, &**r) {
            (_, Or(a, b)) => Formula::or(
                distrib(&Formula::and((**l).clone(), (**a).clone())),
                distrib(&Formula::and((**l).clone(), (**b).clone())),
            ),
            (Or(a, b), _) => Formula::or(
                distrib(&Formula::and((**a).clone(), (**r).clone())),
                distrib(&Formula::and((**b).clone(), (**r).clone())),
            ),
            _ => Formula::and(distrib(l), distrib(r)),
        },
        Or(l, r) => Formula::or(distrib(l), distrib(r)),
        _ => f.clone(),
    }
}

/// `nf` followed by `distrib` until the result is in DNF.
pub fn to_dnf(f: &Formula) -> Formula {
    let mut cur = nf(f);
    while !is_dnf(&cur, false) {
        let next = distrib(&cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_formula, simplify};

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    /// Structural equality modulo ∧/∨ bracketing and constant units.
    fn same(actual: &Formula, expected: &str) {
        assert_eq!(
            simplify(actual),
            simplify(&p(expected)),
            "got {actual}, expected {expected}"
        );
    }

    #[test]
    fn rwt_running_example() {
        let f = p("!(G a | F b)");
        let out = rwt(&f);
        assert_eq!(out, p("!(a & X (G a) | (b | X (F b)))"));
        same(&out, "!(a & X (G a) | b | X (F b))");
    }

    #[test]
    fn rwt_until_and_atoms() {
        assert_eq!(rwt(&p("a U b")), p("b | a & X (a U b)"));
        assert_eq!(rwt(&p("p")), p("p"));
        assert_eq!(rwt(&p("X (G a)")), p("X (G a)"));
    }

    #[test]
    fn rwt_traffic_lights() {
        let phi = p("G((g1 & g3 & !(g2 | g4)) | (!(g1 | g3) & g2 & g4))");
        let expected = Formula::and(
            p("g1 & g3 & !(g2 | g4) | !(g1 | g3) & g2 & g4"),
            Formula::next(phi.clone()),
        );
        assert_eq!(rwt(&phi), expected);
    }

    #[test]
    fn neg_f_examples() {
        assert_eq!(neg_f(&p("p1 | p2")), p("!p1 & !p2"));
        assert_eq!(neg_f(&p("G p1 & F p2")), p("F !p1 | G !p2"));
        assert_eq!(neg_f(&p("!(a U b)")), p("a U b"));
        assert_eq!(neg_f(&Formula::True), Formula::False);
        assert_eq!(neg_f(&p("a U b")), p("!a R !b"));
        assert_eq!(neg_f(&p("X a")), p("X !a"));
    }

    #[test]
    fn nf_running_example() {
        let f = p("!(a & X (G a) | b | X (F b))");
        same(&nf(&f), "(!a | X (F !a)) & !b & X (G !b)");
        assert_eq!(nf(&p("a")), p("a"));
        assert_eq!(nf(&p("a -> b")), p("!a | b"));
    }

    #[test]
    fn nf_leaves_temporal_scopes() {
        assert_eq!(nf(&p("G (a -> b)")), p("G (a -> b)"));
        assert_eq!(nf(&p("!(X (a -> b))")), p("X (a & !b)"));
    }

    #[test]
    fn is_dnf_examples() {
        assert!(is_dnf(&p("a & b"), false));
        assert!(is_dnf(&p("a | (b & c)"), false));
        assert!(is_dnf(&p("a | (X (G (a | b)) & c)"), false));
        assert!(!is_dnf(&p("(a | b) & c"), false));
        assert!(!is_dnf(&p("!(a & b)"), false));
    }

    #[test]
    fn distrib_examples() {
        assert_eq!(distrib(&p("a & (b | c)")), p("(a & b) | (a & c)"));
        assert_eq!(distrib(&p("(a & b) | c")), p("(a & b) | c"));
        assert_eq!(
            distrib(&p("(a | b) & X (G (a | b))")),
            p("(a & X (G (a | b))) | (b & X (G (a | b)))")
        );
    }

    #[test]
    fn dnf_running_example() {
        let f = rwt(&p("!(G a | F b)"));
        let dnf = to_dnf(&f);
        same(&dnf, "!a & !b & X (G !b) | X (F !a) & !b & X (G !b)");
        assert!(is_dnf(&dnf, false));
    }

    #[test]
    fn dnf_traffic_lights() {
        let phi = p("G((g1 & g3 & !(g2 | g4)) | (!(g1 | g3) & g2 & g4))");
        let dnf = to_dnf(&rwt(&phi));
        let expected = Formula::or(
            Formula::and(p("g1 & g3 & !g2 & !g4"), Formula::next(phi.clone())),
            Formula::and(p("!g1 & !g3 & g2 & g4"), Formula::next(phi.clone())),
        );
        assert_eq!(simplify(&dnf), simplify(&expected));
    }

    #[test]
    fn dnf_of_literal_is_identity() {
        assert_eq!(to_dnf(&p("a")), p("a"));
    }
}
