use super::Formula;

/// Sound syntactic simplification, applied bottom-up until nothing changes:
///
/// * constant folding for every connective and temporal operator,
/// * `∧`/`∨` chains are flattened, units dropped, duplicates removed (first
///   occurrence wins) and rebuilt left-associated in source order,
/// * a chain holding both `φ` and `¬φ` collapses to `⊥` (for `∧`) or `⊤` (for `∨`),
/// * `¬¬φ → φ`.
///
/// Nothing is rewritten inside temporal operators beyond their own
/// simplified operands.
pub fn simplify(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(g) => negate(simplify(g)),
        And(..) => {
            let mut parts = Vec::new();
            for c in f.conjuncts() {
                parts.extend(simplify(c).conjuncts().into_iter().cloned());
            }
            fold_chain(parts, true)
        }
        Or(..) => {
            let mut parts = Vec::new();
            for d in f.disjuncts() {
                parts.extend(simplify(d).disjuncts().into_iter().cloned());
            }
            fold_chain(parts, false)
        }
        Implies(l, r) => match (simplify(l), simplify(r)) {
            (True, r) => r,
            (False, _) | (_, True) => True,
            (l, False) => negate(l),
            (l, r) if l == r => True,
            (l, r) => Formula::implies(l, r),
        },
        Iff(l, r) => match (simplify(l), simplify(r)) {
            (True, x) | (x, True) => x,
            (False, x) | (x, False) => negate(x),
            (l, r) if l == r => True,
            (l, r) => Formula::iff(l, r),
        },
        Next(g) => match simplify(g) {
            c @ (True | False) => c,
            g => Formula::next(g),
        },
        Globally(g) => match simplify(g) {
            c @ (True | False) => c,
            g => Formula::globally(g),
        },
        Eventually(g) => match simplify(g) {
            c @ (True | False) => c,
            g => Formula::eventually(g),
        },
        Until(l, r) => match (simplify(l), simplify(r)) {
            (_, c @ (True | False)) => c,
            (False, r) => r,
            (True, r) => Formula::eventually(r),
            (l, r) => Formula::until(l, r),
        },
        Release(l, r) => match (simplify(l), simplify(r)) {
            (_, c @ (True | False)) => c,
            (True, r) => r,
            (False, r) => Formula::globally(r),
            (l, r) => Formula::release(l, r),
        },
    }
}

fn negate(f: Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(inner) => *inner,
        other => Formula::not(other),
    }
}

fn complement(f: &Formula) -> Formula {
    match f {
        Formula::Not(inner) => (**inner).clone(),
        other => Formula::not(other.clone()),
    }
}

/// Folds an already-simplified, flattened chain. `conj` selects `∧` (unit ⊤,
/// absorber ⊥) or `∨` (unit ⊥, absorber ⊤).
fn fold_chain(parts: Vec<Formula>, conj: bool) -> Formula {
    let (unit, absorber) = if conj {
        (Formula::True, Formula::False)
    } else {
        (Formula::False, Formula::True)
    };
    let mut kept: Vec<Formula> = Vec::with_capacity(parts.len());
    for p in parts {
        if p == absorber {
            return absorber;
        }
        if p == unit || kept.contains(&p) {
            continue;
        }
        if kept.contains(&complement(&p)) {
            return absorber;
        }
        kept.push(p);
    }
    if conj {
        Formula::conjunction(kept)
    } else {
        Formula::disjunction(kept)
    }
}
