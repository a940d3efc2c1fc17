//! Reference semantics used to cross-check the enforcers.
//!
//! Formulas are evaluated directly on ultimately periodic traces by labelling
//! every position with the truth value of every subformula. Nothing here goes
//! through the rewriting pipeline: the only shared piece is the syntax tree.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::event::{distance, Event, Trace};
use crate::ltl::{Atom, Formula};

/// The infinite trace `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Trace,
    pub cycle: Trace,
}

impl Lasso {
    /// Panics when `cycle` is empty.
    pub fn new(prefix: Trace, cycle: Trace) -> Self {
        assert!(!cycle.is_empty(), "a lasso needs a nonempty cycle");
        Lasso { prefix, cycle }
    }
}

#[derive(Debug, Clone, Copy)]
enum Node {
    True,
    False,
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Next(usize),
    Globally(usize),
    Eventually(usize),
    Until(usize, usize),
    Release(usize, usize),
}

/// Letters are bitmasks over `atoms`.
type Letter = u32;
/// Truth value of every node at one position.
type Label = Box<[bool]>;

/// A formula flattened into children-first order; the root is last.
#[derive(Debug, Clone)]
struct Compiled {
    atoms: Vec<Atom>,
    nodes: Vec<Node>,
}

impl Compiled {
    fn new(f: &Formula) -> Self {
        let atoms: Vec<Atom> = f.atoms().into_iter().collect();
        assert!(atoms.len() < 32, "too many atoms for the reference evaluator");
        let mut c = Compiled {
            atoms,
            nodes: Vec::new(),
        };
        let mut seen = HashMap::new();
        c.add(f, &mut seen);
        c
    }

    fn add(&mut self, f: &Formula, seen: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = seen.get(f) {
            return i;
        }
        let node = match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Atom(a) => Node::Atom(self.atoms.binary_search(a).expect("collected atom")),
            Formula::Not(g) => Node::Not(self.add(g, seen)),
            Formula::Next(g) => Node::Next(self.add(g, seen)),
            Formula::Globally(g) => Node::Globally(self.add(g, seen)),
            Formula::Eventually(g) => Node::Eventually(self.add(g, seen)),
            Formula::And(l, r) => Node::And(self.add(l, seen), self.add(r, seen)),
            Formula::Or(l, r) => Node::Or(self.add(l, seen), self.add(r, seen)),
            Formula::Implies(l, r) => Node::Implies(self.add(l, seen), self.add(r, seen)),
            Formula::Iff(l, r) => Node::Iff(self.add(l, seen), self.add(r, seen)),
            Formula::Until(l, r) => Node::Until(self.add(l, seen), self.add(r, seen)),
            Formula::Release(l, r) => Node::Release(self.add(l, seen), self.add(r, seen)),
        };
        self.nodes.push(node);
        let i = self.nodes.len() - 1;
        seen.insert(f.clone(), i);
        i
    }

    fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    fn letter(&self, e: &Event) -> Letter {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| e.contains(a))
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    fn alphabet_size(&self) -> Letter {
        1 << self.atoms.len()
    }

    /// Label of a position from its letter and the label of the next one.
    fn step(&self, letter: Letter, next: &[bool]) -> Label {
        let mut v = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            v[i] = match *node {
                Node::True => true,
                Node::False => false,
                Node::Atom(k) => letter & (1 << k) != 0,
                Node::Not(a) => !v[a],
                Node::And(a, b) => v[a] && v[b],
                Node::Or(a, b) => v[a] || v[b],
                Node::Implies(a, b) => !v[a] || v[b],
                Node::Iff(a, b) => v[a] == v[b],
                Node::Next(a) => next[a],
                Node::Globally(a) => v[a] && next[i],
                Node::Eventually(a) => v[a] || next[i],
                Node::Until(a, b) => v[b] || (v[a] && next[i]),
                Node::Release(a, b) => v[b] && (v[a] || next[i]),
            };
        }
        v.into_boxed_slice()
    }

    /// Label of the first position of `cycle^ω`. Until-like operators take
    /// the least fixpoint around the cycle, release-like ones the greatest.
    fn cycle_label(&self, cycle: &[Letter]) -> Label {
        let n = cycle.len();
        let mut val: Vec<Vec<bool>> = Vec::with_capacity(self.nodes.len());
        for (i, node) in self.nodes.iter().enumerate() {
            let at = |j: usize| (j + 1) % n;
            let row: Vec<bool> = match *node {
                Node::True => vec![true; n],
                Node::False => vec![false; n],
                Node::Atom(k) => cycle.iter().map(|l| l & (1 << k) != 0).collect(),
                Node::Not(a) => val[a].iter().map(|x| !x).collect(),
                Node::And(a, b) => (0..n).map(|j| val[a][j] && val[b][j]).collect(),
                Node::Or(a, b) => (0..n).map(|j| val[a][j] || val[b][j]).collect(),
                Node::Implies(a, b) => (0..n).map(|j| !val[a][j] || val[b][j]).collect(),
                Node::Iff(a, b) => (0..n).map(|j| val[a][j] == val[b][j]).collect(),
                Node::Next(a) => (0..n).map(|j| val[a][at(j)]).collect(),
                Node::Eventually(b) => fixpoint(n, false, |j, nx| val[b][j] || nx),
                Node::Globally(b) => fixpoint(n, true, |j, nx| val[b][j] && nx),
                Node::Until(a, b) => fixpoint(n, false, |j, nx| val[b][j] || (val[a][j] && nx)),
                Node::Release(a, b) => fixpoint(n, true, |j, nx| val[b][j] && (val[a][j] || nx)),
            };
            debug_assert_eq!(val.len(), i);
            val.push(row);
        }
        val.iter().map(|row| row[0]).collect()
    }

    /// Label of the first position of `prefix · rest`, given the label of `rest`.
    fn walk_back(&self, prefix: &[Letter], rest: &[bool]) -> Label {
        let mut cur: Label = rest.into();
        for &l in prefix.iter().rev() {
            cur = self.step(l, &cur);
        }
        cur
    }

    fn holds_on(&self, prefix: &[Letter], rest: &[bool]) -> bool {
        let root = self.root();
        if prefix.is_empty() {
            return rest[root];
        }
        self.walk_back(prefix, rest)[root]
    }
}

/// Iterates `rule(j, value at j+1)` around a cycle of length `n` from `init`
/// until stable.
fn fixpoint(n: usize, init: bool, rule: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let mut v = vec![init; n];
    loop {
        let mut changed = false;
        for j in (0..n).rev() {
            let x = rule(j, v[(j + 1) % n]);
            if x != v[j] {
                v[j] = x;
                changed = true;
            }
        }
        if !changed {
            return v;
        }
    }
}

/// Standard infinite-trace semantics of `f` on the lasso.
pub fn eval_lasso(f: &Formula, w: &Lasso) -> bool {
    let c = Compiled::new(f);
    let letters = |t: &Trace| t.events().iter().map(|e| c.letter(e)).collect::<Vec<_>>();
    let rest = c.cycle_label(&letters(&w.cycle));
    c.holds_on(&letters(&w.prefix), &rest)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bad,
    NotBad,
}

/// Bad-prefix decisions for one formula. Every extension `v · w^ω` with
/// `|v| < loop_bound` and `1 ≤ |w| ≤ loop_bound` over the formula's atoms is
/// summarised once by the label of its first position; distinct labels are
/// kept, and a prefix is bad when no label makes the formula hold after it.
#[derive(Debug, Clone)]
pub struct BadPrefixChecker {
    compiled: Compiled,
    starts: Vec<Label>,
}

impl BadPrefixChecker {
    pub fn new(f: &Formula, loop_bound: usize) -> Self {
        assert!(loop_bound >= 1, "loop bound must be positive");
        let compiled = Compiled::new(f);
        let sigma = compiled.alphabet_size();
        let mut starts: HashSet<Label> = HashSet::new();
        let mut cycle: Vec<Letter> = Vec::new();
        for len in 1..=loop_bound {
            cycle.clear();
            cycle.resize(len, 0);
            loop {
                starts.insert(compiled.cycle_label(&cycle));
                if !next_word(&mut cycle, sigma) {
                    break;
                }
            }
        }
        let mut frontier: Vec<Label> = starts.iter().cloned().collect();
        for _ in 1..loop_bound {
            let mut grown = HashSet::new();
            for label in &frontier {
                for l in 0..sigma {
                    grown.insert(compiled.step(l, label));
                }
            }
            frontier = grown.into_iter().filter(|l| !starts.contains(l)).collect();
            starts.extend(frontier.iter().cloned());
        }
        let mut starts: Vec<Label> = starts.into_iter().collect();
        starts.sort();
        BadPrefixChecker { compiled, starts }
    }

    /// Atoms the formula constrains.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.compiled.atoms.iter().cloned().collect()
    }

    pub fn verdict(&self, u: &[Event]) -> Verdict {
        let letters: Vec<Letter> = u.iter().map(|e| self.compiled.letter(e)).collect();
        if self.starts.iter().any(|s| self.compiled.holds_on(&letters, s)) {
            Verdict::NotBad
        } else {
            Verdict::Bad
        }
    }

    pub fn is_bad(&self, u: &[Event]) -> bool {
        self.verdict(u) == Verdict::Bad
    }

    /// Closest event to `sigma` that keeps `u` out of the bad prefixes, with
    /// ties broken towards the smallest event. Atoms outside the formula are
    /// copied from `sigma`.
    pub fn closest_safe(&self, u: &[Event], sigma: &Event) -> Option<(Event, usize)> {
        let scope = self.atoms();
        let free = sigma.without(&scope);
        let mut word = u.to_vec();
        word.push(Event::empty());
        let mut best: Option<(usize, Event)> = None;
        for candidate in Event::all_over(&scope) {
            let d = distance(&candidate, sigma, &scope);
            if best.as_ref().is_some_and(|(bd, be)| (d, &candidate) >= (*bd, be)) {
                continue;
            }
            *word.last_mut().expect("pushed above") = candidate.union(&free);
            if !self.is_bad(&word) {
                best = Some((d, candidate));
            }
        }
        best.map(|(d, e)| (e.union(&free), d))
    }
}

/// Advances `word` to the next word over `0..sigma`; false after the last.
fn next_word(word: &mut [Letter], sigma: Letter) -> bool {
    for x in word.iter_mut() {
        *x += 1;
        if *x < sigma {
            return true;
        }
        *x = 0;
    }
    false
}

/// Whether every extension of `u` (within the bound) violates `f`.
pub fn bad_prefix(f: &Formula, u: &Trace, loop_bound: usize) -> Verdict {
    BadPrefixChecker::new(f, loop_bound).verdict(u.events())
}

/// Centralised brute-force enforcer: at each step emits the closest event
/// that keeps the output out of the bad prefixes of `f`.
pub fn reference_enforcer(f: &Formula, trace: &Trace, loop_bound: usize) -> Result<Trace> {
    let checker = BadPrefixChecker::new(f, loop_bound);
    if checker.is_bad(&[]) {
        return Err(Error::UnsatisfiableSpecification);
    }
    let mut out = Trace::default();
    for (t, sigma) in trace.events().iter().enumerate() {
        let (e, _) = checker
            .closest_safe(out.events(), sigma)
            .ok_or_else(|| Error::AtTimestamp {
                timestamp: t + 1,
                source: Box::new(Error::EmptyDomain),
            })?;
        out.push(e);
    }
    Ok(out)
}
