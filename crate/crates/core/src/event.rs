//! Events, traces, alphabet partitions and the event distance.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ltl::Atom;

/// The set of atomic propositions that hold at one timestamp. Atoms absent
/// from the set are false.
///
/// Events order lexicographically over their sorted atom names, so `∅`
/// precedes every other event; every deterministic tie-break uses this order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event(BTreeSet<Atom>);

impl Event {
    pub fn empty() -> Self {
        Event(BTreeSet::new())
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        Event(atoms.into_iter().collect())
    }

    pub fn from_names<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        Event(names.into_iter().map(Atom::from).collect())
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.0.contains(atom)
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.0
    }

    pub fn into_atoms(self) -> BTreeSet<Atom> {
        self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn union(&self, other: &Event) -> Event {
        Event(self.0.union(&other.0).cloned().collect())
    }

    /// Restriction of the event to `scope`.
    pub fn restrict(&self, scope: &BTreeSet<Atom>) -> Event {
        Event(self.0.intersection(scope).cloned().collect())
    }

    /// Atoms of the event outside `scope`.
    pub fn without(&self, scope: &BTreeSet<Atom>) -> Event {
        Event(self.0.difference(scope).cloned().collect())
    }

    pub fn is_subset_of(&self, scope: &BTreeSet<Atom>) -> bool {
        self.0.is_subset(scope)
    }

    /// Every event over `scope`, ordered by size and then lexicographically.
    pub fn all_over(scope: &BTreeSet<Atom>) -> Vec<Event> {
        let atoms: Vec<&Atom> = scope.iter().collect();
        assert!(atoms.len() < 32, "alphabet too large to enumerate");
        let mut out: Vec<Event> = (0u32..(1 << atoms.len()))
            .map(|mask| {
                Event(
                    atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, a)| (*a).clone())
                        .collect(),
                )
            })
            .collect();
        out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        out
    }
}

/// Number of atoms of `scope` on which `a` and `b` disagree.
pub fn distance(a: &Event, b: &Event, scope: &BTreeSet<Atom>) -> usize {
    a.0.symmetric_difference(&b.0)
        .filter(|x| scope.contains(x))
        .count()
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for Event {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| format!("expected `{{...}}`, found `{}`", s.trim()))?;
        let mut atoms = BTreeSet::new();
        if inner.trim().is_empty() {
            return Ok(Event(atoms));
        }
        for part in inner.split(',') {
            let name = part.trim();
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(format!("invalid atom name `{name}`"));
            }
            atoms.insert(Atom::new(name));
        }
        Ok(Event(atoms))
    }
}

/// A finite sequence of events.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace(pub Vec<Event>);

impl Trace {
    pub fn new(events: Vec<Event>) -> Self {
        Trace(events)
    }

    pub fn events(&self) -> &[Event] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, e: Event) {
        self.0.push(e);
    }

    /// Local trace of the component observing `scope`.
    pub fn project(&self, scope: &BTreeSet<Atom>) -> Trace {
        Trace(self.0.iter().map(|e| e.restrict(scope)).collect())
    }

    /// Pointwise union of equally long local traces.
    pub fn merge(locals: &[Trace]) -> Trace {
        let len = locals.iter().map(Trace::len).max().unwrap_or(0);
        Trace(
            (0..len)
                .map(|t| {
                    locals
                        .iter()
                        .filter_map(|l| l.0.get(t))
                        .fold(Event::empty(), |acc, e| acc.union(e))
                })
                .collect(),
        )
    }

    /// Parses one event per line; blank lines and `#` comments are skipped.
    /// When `alphabet` is given, atoms outside it are rejected.
    pub fn parse(text: &str, alphabet: Option<&BTreeSet<Atom>>) -> Result<Trace> {
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let event: Event = line.parse().map_err(|msg| Error::Format { line: i + 1, msg })?;
            if let Some(ap) = alphabet {
                if let Some(bad) = event.atoms().iter().find(|a| !ap.contains(*a)) {
                    return Err(Error::Format {
                        line: i + 1,
                        msg: format!("unknown atom `{bad}`"),
                    });
                }
            }
            events.push(event);
        }
        Ok(Trace(events))
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.0 {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Disjoint, nonempty component alphabets `AP_1 .. AP_n`. Components are
/// addressed by their 1-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetPartition {
    components: Vec<BTreeSet<Atom>>,
}

impl AlphabetPartition {
    pub fn new(components: Vec<BTreeSet<Atom>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Partition("no components".into()));
        }
        let mut seen = BTreeSet::new();
        for (i, c) in components.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Partition(format!("component M{} is empty", i + 1)));
            }
            for a in c {
                if !seen.insert(a.clone()) {
                    return Err(Error::Partition(format!(
                        "atom `{a}` appears in more than one component"
                    )));
                }
            }
        }
        Ok(AlphabetPartition { components })
    }

    pub fn from_names(components: &[&[&str]]) -> Result<Self> {
        Self::new(
            components
                .iter()
                .map(|c| c.iter().map(|n| Atom::from(*n)).collect())
                .collect(),
        )
    }

    /// Number of components.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Alphabet of component `k` (1-based).
    pub fn component(&self, k: usize) -> &BTreeSet<Atom> {
        &self.components[k - 1]
    }

    pub fn components(&self) -> &[BTreeSet<Atom>] {
        &self.components
    }

    /// The global alphabet.
    pub fn global(&self) -> BTreeSet<Atom> {
        self.components.iter().flatten().cloned().collect()
    }

    /// Component index (1-based) owning `atom`.
    pub fn owner(&self, atom: &Atom) -> Option<usize> {
        self.components.iter().position(|c| c.contains(atom)).map(|i| i + 1)
    }

    /// Parses lines of the form `M<i>: a, b, c`. Components must be listed
    /// as `M1 .. Mn` in order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut components = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fail = |msg: String| Error::Format { line: i + 1, msg };
            let (label, atoms) = line
                .split_once(':')
                .ok_or_else(|| fail("expected `M<i>: a, b, ...`".into()))?;
            let index: usize = label
                .trim()
                .strip_prefix('M')
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| fail(format!("invalid component label `{}`", label.trim())))?;
            if index != components.len() + 1 {
                return Err(fail(format!(
                    "expected component M{}, found M{index}",
                    components.len() + 1
                )));
            }
            let set: BTreeSet<Atom> = atoms
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(Atom::from)
                .collect();
            components.push(set);
        }
        Self::new(components)
    }
}

impl fmt::Display for AlphabetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            let names: Vec<&str> = c.iter().map(Atom::name).collect();
            writeln!(f, "M{}: {}", i + 1, names.join(", "))?;
        }
        Ok(())
    }
}
