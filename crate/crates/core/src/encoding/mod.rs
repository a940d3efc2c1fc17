//! Temporal obligation pairs and the temporal correction log (TCL), the state
//! each enforcer threads through a round.

mod text;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::event::{distance, Event};
use crate::ltl::sat::BottomCheck;
use crate::ltl::{simplify, Atom, Formula};

/// One TDNF monomial `present ∧ X future`. The future is stored without its `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Top {
    pub present: Formula,
    pub future: Formula,
}

impl Top {
    pub fn new(present: Formula, future: Formula) -> Self {
        Top {
            present: simplify(&present),
            future: simplify(&future),
        }
    }

    /// `present ∧ X future`.
    pub fn to_formula(&self) -> Formula {
        Formula::and(self.present.clone(), Formula::next(self.future.clone()))
    }

    /// The pair `(⊤, ⊤)`: any continuation is acceptable.
    pub fn is_trivial(&self) -> bool {
        self.present.is_true() && self.future.is_true()
    }
}

/// Insertion-ordered set of pairs, read as their disjunction. Empty means
/// no monomial survives.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TopSet(Vec<Top>);

impl TopSet {
    pub fn new() -> Self {
        TopSet(Vec::new())
    }

    /// Inserts unless a structurally equal pair is already present.
    pub fn insert(&mut self, top: Top) -> bool {
        if self.0.contains(&top) {
            false
        } else {
            self.0.push(top);
            true
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Top> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_trivial(&self) -> bool {
        self.0.iter().any(Top::is_trivial)
    }

    /// `⋁ present ∧ X future`.
    pub fn to_formula(&self) -> Formula {
        Formula::disjunction(self.0.iter().map(Top::to_formula))
    }

    /// Disjunction of the futures, simplified: the formula to enforce next
    /// when an event carrying this set is emitted.
    pub fn next_formula(&self) -> Formula {
        simplify(&Formula::disjunction(self.0.iter().map(|t| t.future.clone())))
    }
}

impl FromIterator<Top> for TopSet {
    fn from_iter<I: IntoIterator<Item = Top>>(iter: I) -> Self {
        let mut s = TopSet::new();
        for t in iter {
            s.insert(t);
        }
        s
    }
}

impl<'a> IntoIterator for &'a TopSet {
    type Item = &'a Top;
    type IntoIter = std::slice::Iter<'a, Top>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Image of one TCL entry: surviving pairs and distance to the observed event.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Entry {
    pub tops: TopSet,
    pub distance: usize,
}

/// Partial map from candidate output events to their obligations and
/// distance from the observed event.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tcl {
    entries: BTreeMap<Event, Entry>,
}

impl Tcl {
    pub fn new() -> Self {
        Tcl::default()
    }

    /// `[∅ ↦ (tops, 0)]`.
    pub fn initial(tops: TopSet) -> Self {
        let mut t = Tcl::new();
        t.insert(Event::empty(), tops, 0);
        t
    }

    pub fn singleton(event: Event, entry: Entry) -> Self {
        let mut t = Tcl::new();
        t.entries.insert(event, entry);
        t
    }

    pub fn insert(&mut self, event: Event, tops: TopSet, distance: usize) {
        self.entries.insert(event, Entry { tops, distance });
    }

    pub fn get(&self, event: &Event) -> Option<&Entry> {
        self.entries.get(event)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Event, &Entry)> {
        self.entries.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Event> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Atoms still free in some present obligation.
    pub fn apr(&self) -> BTreeSet<Atom> {
        apr(self)
    }

    /// Entries sorted by `(distance, event)`; the order of the canonical text.
    pub fn sorted_entries(&self) -> Vec<(&Event, &Entry)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_by(|(ea, a), (eb, b)| a.distance.cmp(&b.distance).then_with(|| ea.cmp(eb)));
        v
    }
}

/// Splits a TDNF formula into its obligation pairs.
pub fn encode(f: &Formula) -> Result<TopSet> {
    let mut out = TopSet::new();
    encode_into(f, &mut out)?;
    Ok(out)
}

fn encode_into(f: &Formula, out: &mut TopSet) -> Result<()> {
    match f {
        Formula::Or(l, r) => {
            encode_into(l, out)?;
            encode_into(r, out)
        }
        _ => {
            let (present, future) = encode_monomial(f)?;
            out.insert(Top::new(present, future));
            Ok(())
        }
    }
}

fn encode_monomial(f: &Formula) -> Result<(Formula, Formula)> {
    match f {
        Formula::And(l, r) => {
            let (pl, fl) = encode_monomial(l)?;
            let (pr, fr) = encode_monomial(r)?;
            Ok((
                simplify(&Formula::and(pl, pr)),
                simplify(&Formula::and(fl, fr)),
            ))
        }
        Formula::Atom(_) | Formula::True | Formula::False => Ok((f.clone(), Formula::True)),
        Formula::Not(inner) if matches!(**inner, Formula::Atom(_)) => {
            Ok((f.clone(), Formula::True))
        }
        Formula::Next(g) => Ok((Formula::True, (**g).clone())),
        other => Err(Error::NotTdnf(other.to_string())),
    }
}

/// Replaces atoms of `local_ap` by their value in `obs` and folds constants.
/// Atoms outside `local_ap` are left untouched.
pub fn rw_local(present: &Formula, obs: &Event, local_ap: &BTreeSet<Atom>) -> Formula {
    simplify(&substitute(present, obs, local_ap))
}

fn substitute(f: &Formula, obs: &Event, local_ap: &BTreeSet<Atom>) -> Formula {
    match f {
        Formula::Atom(a) if local_ap.contains(a) => {
            if obs.contains(a) {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(substitute(g, obs, local_ap)),
        Formula::And(l, r) => Formula::and(substitute(l, obs, local_ap), substitute(r, obs, local_ap)),
        Formula::Or(l, r) => Formula::or(substitute(l, obs, local_ap), substitute(r, obs, local_ap)),
        // Present obligations carry no other connective.
        other => other.clone(),
    }
}

/// Union of the atoms of every present obligation in the log.
pub fn apr(t: &Tcl) -> BTreeSet<Atom> {
    t.entries
        .values()
        .flat_map(|e| e.tops.iter())
        .flat_map(|top| top.present.atoms())
        .collect()
}

/// Extends every entry with every local observation over `local_ap ∩ apr(t)`,
/// rewriting the present obligations and accumulating the distance to
/// `sigma_local`. Futures are not touched.
pub fn update_tcl(t: &Tcl, sigma_local: &Event, local_ap: &BTreeSet<Atom>) -> Tcl {
    let scope: BTreeSet<Atom> = local_ap.intersection(&apr(t)).cloned().collect();
    let observations = Event::all_over(&scope);
    let mut out = Tcl::new();
    for (prev, entry) in &t.entries {
        for obs in &observations {
            let tops: TopSet = entry
                .tops
                .iter()
                .map(|top| Top {
                    present: rw_local(&top.present, obs, &scope),
                    future: top.future.clone(),
                })
                .collect();
            let key = prev.union(obs);
            debug_assert!(!out.entries.contains_key(&key));
            out.insert(key, tops, entry.distance + distance(obs, sigma_local, &scope));
        }
    }
    out
}

/// Drops pairs whose present or future is equivalent to `⊥` (as decided by
/// `check`), then drops entries left without pairs.
pub fn reduce(t: &Tcl, check: BottomCheck) -> Tcl {
    let mut out = Tcl::new();
    for (event, entry) in &t.entries {
        let tops: TopSet = entry
            .tops
            .iter()
            .filter(|top| !check.is_bottom(&top.present) && !check.is_bottom(&top.future))
            .cloned()
            .collect();
        if !tops.is_empty() {
            out.insert(event.clone(), tops, entry.distance);
        }
    }
    out
}

pub use text::{parse_tcl, parse_tcl_line, tcl_line};
