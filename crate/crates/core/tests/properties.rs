mod common;

use std::collections::BTreeSet;

use enforce_core::encoding::{encode, parse_tcl, update_tcl};
use enforce_core::enforcement::init_state;
use enforce_core::event::{distance, Event, Trace};
use enforce_core::ltl::sat::{is_satisfiable, BottomCheck};
use enforce_core::ltl::{is_dnf, neg_f, nf, parse_formula, rwt, simplify, to_dnf, Atom, Formula};
use enforce_core::oracle::{bad_prefix, eval_lasso, BadPrefixChecker, Lasso, Verdict};
use proptest::prelude::*;

fn arb_atom() -> impl Strategy<Value = Formula> {
    prop::sample::select(common::POOL.to_vec()).prop_map(Formula::atom)
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => arb_atom(),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::globally),
            inner.clone().prop_map(Formula::eventually),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::release(a, b)),
        ]
    })
}

fn arb_event() -> impl Strategy<Value = Event> {
    prop::sample::subsequence(common::POOL.to_vec(), 0..=common::POOL.len())
        .prop_map(Event::from_names)
}

fn arb_trace(min: usize, max: usize) -> impl Strategy<Value = Trace> {
    prop::collection::vec(arb_event(), min..=max).prop_map(Trace::new)
}

fn arb_lasso() -> impl Strategy<Value = Lasso> {
    (arb_trace(0, 3), arb_trace(1, 3)).prop_map(|(p, c)| Lasso::new(p, c))
}

/// Direct recursive semantics on the unrolled lasso. From position `i`, every
/// distinct position is met within `|prefix| + |cycle|` steps.
fn naive(f: &Formula, w: &Lasso, i: usize) -> bool {
    let (p, l) = (w.prefix.len(), w.cycle.len());
    let at = |j: usize| {
        if j < p {
            &w.prefix.events()[j]
        } else {
            &w.cycle.events()[(j - p) % l]
        }
    };
    let horizon = i + p + l;
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => at(i).contains(a),
        Formula::Not(g) => !naive(g, w, i),
        Formula::And(a, b) => naive(a, w, i) && naive(b, w, i),
        Formula::Or(a, b) => naive(a, w, i) || naive(b, w, i),
        Formula::Implies(a, b) => !naive(a, w, i) || naive(b, w, i),
        Formula::Iff(a, b) => naive(a, w, i) == naive(b, w, i),
        Formula::Next(g) => naive(g, w, i + 1),
        Formula::Globally(g) => (i..horizon).all(|j| naive(g, w, j)),
        Formula::Eventually(g) => (i..horizon).any(|j| naive(g, w, j)),
        Formula::Until(a, b) => (i..horizon)
            .find(|&j| naive(b, w, j) || !naive(a, w, j))
            .is_some_and(|j| naive(b, w, j)),
        Formula::Release(a, b) => !naive(
            &Formula::until(Formula::not((**a).clone()), Formula::not((**b).clone())),
            w,
            i,
        ),
    }
}

fn pool() -> BTreeSet<Atom> {
    common::pool()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_then_parse_is_identity(f in arb_formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn eval_lasso_matches_naive_semantics(f in arb_formula(), w in arb_lasso()) {
        prop_assert_eq!(eval_lasso(&f, &w), naive(&f, &w, 0));
    }

    #[test]
    fn rewriting_preserves_semantics(f in arb_formula(), w in arb_lasso()) {
        let expect = eval_lasso(&f, &w);
        prop_assert_eq!(eval_lasso(&rwt(&f), &w), expect);
        prop_assert_eq!(eval_lasso(&nf(&f), &w), expect);
        prop_assert_eq!(eval_lasso(&to_dnf(&rwt(&f)), &w), expect);
        prop_assert_eq!(eval_lasso(&simplify(&f), &w), expect);
        prop_assert_eq!(eval_lasso(&neg_f(&f), &w), !expect);
        let tops = encode(&to_dnf(&rwt(&f))).unwrap();
        prop_assert_eq!(eval_lasso(&tops.to_formula(), &w), expect);
    }

    #[test]
    fn tdnf_shape(f in arb_formula()) {
        let r = rwt(&f);
        prop_assert!(r.temporal_below_next());
        let dnf = to_dnf(&r);
        prop_assert!(is_dnf(&dnf, false));
        prop_assert_eq!(to_dnf(&dnf), dnf.clone());
        for top in &encode(&dnf).unwrap() {
            prop_assert!(top.present.is_propositional());
        }
    }

    #[test]
    fn simplify_is_idempotent(f in arb_formula()) {
        let s = simplify(&f);
        prop_assert_eq!(simplify(&s), s);
    }

    #[test]
    fn satisfiability_matches_oracle(f in arb_formula()) {
        let oracle = bad_prefix(&f, &Trace::default(), common::LOOP_BOUND) == Verdict::NotBad;
        prop_assert_eq!(is_satisfiable(&f), oracle, "{}", f);
    }

    #[test]
    fn bad_prefix_is_monotone(f in arb_formula(), u in arb_trace(0, 3), e in arb_event()) {
        let checker = BadPrefixChecker::new(&f, common::LOOP_BOUND);
        let mut longer = u.events().to_vec();
        longer.push(e);
        if checker.is_bad(u.events()) {
            prop_assert!(checker.is_bad(&longer));
        }
    }

    #[test]
    fn distance_is_a_metric(a in arb_event(), b in arb_event(), c in arb_event()) {
        let s = pool();
        prop_assert_eq!(distance(&a, &b, &s), distance(&b, &a, &s));
        prop_assert!(distance(&a, &c, &s) <= distance(&a, &b, &s) + distance(&b, &c, &s));
        prop_assert_eq!(distance(&a, &b, &s) == 0, a == b);
    }

    #[test]
    fn trace_text_round_trip(t in arb_trace(0, 6)) {
        prop_assert_eq!(Trace::parse(&t.to_string(), None).unwrap(), t);
    }

    #[test]
    fn tcl_text_round_trip(f in arb_formula(), sigma in arb_event()) {
        let Ok(t) = init_state(&f, BottomCheck::Syntactic) else { return Ok(()) };
        let t = update_tcl(&t, &sigma, &Event::from_names(["a", "b"]).into_atoms());
        prop_assert_eq!(parse_tcl(&t.to_string()).unwrap(), t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    /// The suites' loop bound gives the same verdicts as a larger one.
    #[test]
    fn oracle_bound_is_stable(f in arb_formula(), u in arb_trace(0, 3)) {
        let small = BadPrefixChecker::new(&f, common::LOOP_BOUND);
        let large = BadPrefixChecker::new(&f, common::LOOP_BOUND + 1);
        prop_assert_eq!(small.verdict(u.events()), large.verdict(u.events()), "{}", f);
    }
}
