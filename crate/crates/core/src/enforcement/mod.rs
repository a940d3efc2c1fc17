//! Enforcer state machines for the global- and local-exploration protocols.
//!
//! Each round an enforcer receives its local view of the system event, takes
//! part in evaluating the correction log, and ends with its local output and
//! the formula to enforce next.

mod message;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use message::Message;

use crate::encoding::{apr, encode, reduce, update_tcl, Entry, Tcl};
use crate::error::{Error, Result};
use crate::event::{AlphabetPartition, Event};
use crate::ltl::sat::BottomCheck;
use crate::ltl::{rwt, to_dnf, Atom, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    /// Carries the full log through every enforcer; optimal corrections.
    #[default]
    Global,
    /// Keeps a single candidate after each hop; smaller messages.
    Local,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Global => "global",
            Algorithm::Local => "local",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "global" => Ok(Algorithm::Global),
            "local" => Ok(Algorithm::Local),
            other => Err(format!("unknown algorithm `{other}` (expected global or local)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnforcerConfig {
    /// 1-based; enforcer 1 starts every round.
    pub index: usize,
    pub partition: AlphabetPartition,
    pub algorithm: Algorithm,
    pub check: BottomCheck,
}

impl EnforcerConfig {
    pub fn local_ap(&self) -> &BTreeSet<Atom> {
        self.partition.component(self.index)
    }
}

/// `[∅ ↦ (encode(DNF(rwT(φ))), 0)]`; rejects unsatisfiable specifications.
pub fn init_state(phi: &Formula, check: BottomCheck) -> Result<Tcl> {
    if check.is_bottom(phi) {
        return Err(Error::UnsatisfiableSpecification);
    }
    Ok(Tcl::initial(encode(&to_dnf(&rwt(phi)))?))
}

/// Smallest enforcer other than `me` that observes an atom still to be
/// evaluated, or `None` when nothing is left.
pub fn route_next(t: &Tcl, me: usize, partition: &AlphabetPartition) -> Result<Option<usize>> {
    let remaining = apr(t);
    if remaining.is_empty() {
        return Ok(None);
    }
    (1..=partition.len())
        .find(|&k| k != me && !partition.component(k).is_disjoint(&remaining))
        .map(Some)
        .ok_or_else(|| Error::UnreachableAlphabet(Event::from_atoms(remaining)))
}

fn closest(t: &Tcl) -> Result<Vec<(&Event, &Entry)>> {
    let min = t
        .entries()
        .map(|(_, e)| e.distance)
        .min()
        .ok_or(Error::EmptyDomain)?;
    Ok(t.entries().filter(|(_, e)| e.distance == min).collect())
}

fn prefer_trivial(candidates: &mut Vec<(&Event, &Entry)>) {
    if candidates.iter().any(|(_, e)| e.tops.contains_trivial()) {
        candidates.retain(|(_, e)| e.tops.contains_trivial());
    }
}

/// Decision on a fully evaluated log: closest events, those allowing any
/// continuation if there are some, then the smallest event. Returns the event
/// together with the disjunction of its futures.
pub fn global_decision(t: &Tcl) -> Result<(Event, Formula)> {
    let mut candidates = closest(t)?;
    prefer_trivial(&mut candidates);
    // Entries iterate in event order, so the first candidate is the smallest.
    let (event, entry) = candidates[0];
    Ok((event.clone(), entry.tops.next_formula()))
}

/// Decision taken after each local update. When atoms remain to be evaluated
/// downstream, ties prefer the entry with the most pairs.
pub fn local_decision(t: &Tcl, remaining: bool) -> Result<(Event, Entry)> {
    let mut candidates = closest(t)?;
    if remaining {
        let most = candidates.iter().map(|(_, e)| e.tops.len()).max().unwrap_or(0);
        candidates.retain(|(_, e)| e.tops.len() == most);
    } else {
        prefer_trivial(&mut candidates);
    }
    let (event, entry) = candidates[0];
    Ok((event.clone(), entry.clone()))
}

/// Per-round result of one enforcer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalResult {
    pub output: Event,
    pub next_formula: Formula,
    /// Event picked by the decision rule over the evaluated atoms; set by
    /// every enforcer under global exploration, by the decider otherwise.
    pub decision: Option<Event>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    /// Local view of the event emitted by the system.
    Observe(Event),
    Deliver { from: usize, message: Message },
}

/// Effects of processing one input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Step {
    pub sends: Vec<(usize, Message)>,
    /// Log size right after this enforcer's update, when it updated.
    pub domain_size: Option<usize>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Phase {
    Idle,
    Waiting,
    Done(LocalResult),
}

#[derive(Debug, Clone)]
pub struct Enforcer {
    config: EnforcerConfig,
    formula: Formula,
    phase: Phase,
    observed: Event,
    evaluated: BTreeSet<Atom>,
    /// Output fixed by a local decision, awaiting the next formula.
    decided: Option<Event>,
}

impl Enforcer {
    pub fn new(config: EnforcerConfig, formula: Formula) -> Self {
        Enforcer {
            config,
            formula,
            phase: Phase::Idle,
            observed: Event::empty(),
            evaluated: BTreeSet::new(),
            decided: None,
        }
    }

    pub fn config(&self) -> &EnforcerConfig {
        &self.config
    }

    pub fn index(&self) -> usize {
        self.config.index
    }

    /// Formula enforced in the current round.
    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn result(&self) -> Option<&LocalResult> {
        match &self.phase {
            Phase::Done(r) => Some(r),
            _ => None,
        }
    }

    /// Moves to the next timestamp once the round is decided.
    pub fn advance(&mut self) -> Result<()> {
        let Phase::Done(result) = &self.phase else {
            return Err(self.protocol("advancing before the round is decided"));
        };
        self.formula = result.next_formula.clone();
        self.phase = Phase::Idle;
        self.observed = Event::empty();
        self.evaluated.clear();
        self.decided = None;
        Ok(())
    }

    pub fn step(&mut self, input: Input) -> Result<Step> {
        let mut step = Step::default();
        match input {
            Input::Observe(sigma) => {
                if self.phase != Phase::Idle {
                    return Err(self.protocol("observation while a round is in progress"));
                }
                self.observed = sigma.restrict(self.config.local_ap());
                self.phase = Phase::Waiting;
                if self.config.index == 1 {
                    let t = init_state(&self.formula, self.config.check)?;
                    self.hold(t, &mut step)?;
                }
            }
            Input::Deliver { from, message } => {
                if self.phase != Phase::Waiting {
                    return Err(self.protocol(format!(
                        "unexpected {} from enforcer {from}",
                        message.kind()
                    )));
                }
                self.receive(from, message, &mut step)?;
            }
        }
        Ok(step)
    }

    fn receive(&mut self, from: usize, message: Message, step: &mut Step) -> Result<()> {
        match (self.config.algorithm, message) {
            (Algorithm::Global, Message::TclTransfer(t)) => {
                if apr(&t).is_empty() {
                    step.notes.push(format!(
                        "enforcer {}: received a fully evaluated log from {from}; deciding",
                        self.config.index
                    ));
                    self.broadcast(Message::FinalBroadcast(t.clone()), step);
                    self.decide_global(&t)
                } else {
                    self.hold(t, step)
                }
            }
            (Algorithm::Global, Message::FinalBroadcast(t)) => self.decide_global(&t),
            (Algorithm::Local, Message::TclEntry(event, entry)) => {
                self.hold(Tcl::singleton(event, entry), step)
            }
            (Algorithm::Local, Message::NextFormula(next)) => {
                let output = match self.decided.take() {
                    Some(e) => e,
                    None => self.observed.clone(),
                };
                self.finish(output, next, None)
            }
            (algorithm, message) => Err(self.protocol(format!(
                "{} is not part of the {algorithm} protocol",
                message.kind()
            ))),
        }
    }

    /// Evaluates the log this enforcer now holds, then forwards or decides.
    fn hold(&mut self, t: Tcl, step: &mut Step) -> Result<()> {
        let local_ap = self.config.local_ap().clone();
        let scope: BTreeSet<Atom> = local_ap.intersection(&apr(&t)).cloned().collect();
        let t = if scope.is_empty() {
            t
        } else {
            let updated = update_tcl(&t, &self.observed, &local_ap);
            step.domain_size = Some(updated.len());
            self.evaluated.extend(scope);
            updated
        };
        let t = reduce(&t, self.config.check);
        if t.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let me = self.config.index;
        match self.config.algorithm {
            Algorithm::Global => match route_next(&t, me, &self.config.partition)? {
                Some(k) => {
                    step.sends.push((k, Message::TclTransfer(t)));
                    Ok(())
                }
                None => {
                    self.broadcast(Message::FinalBroadcast(t.clone()), step);
                    self.decide_global(&t)
                }
            },
            Algorithm::Local => {
                let remaining = !apr(&t).is_empty();
                let (event, entry) = local_decision(&t, remaining)?;
                let output = self.local_output(&event);
                let kept = Tcl::singleton(event.clone(), entry.clone());
                match route_next(&kept, me, &self.config.partition)? {
                    Some(k) => {
                        self.decided = Some(output);
                        step.sends.push((k, Message::TclEntry(event, entry)));
                        Ok(())
                    }
                    None => {
                        let next = entry.tops.next_formula();
                        self.broadcast(Message::NextFormula(next.clone()), step);
                        self.finish(output, next, Some(event))
                    }
                }
            }
        }
    }

    fn decide_global(&mut self, t: &Tcl) -> Result<()> {
        let (event, next) = global_decision(t)?;
        let output = self.local_output(&event);
        self.finish(output, next, Some(event))
    }

    /// Own atoms of the chosen event, plus observed atoms this enforcer never
    /// had to evaluate.
    fn local_output(&self, chosen: &Event) -> Event {
        chosen
            .restrict(self.config.local_ap())
            .union(&self.observed.without(&self.evaluated))
    }

    fn finish(&mut self, output: Event, next: Formula, decision: Option<Event>) -> Result<()> {
        if self.config.check.is_bottom(&next) {
            return Err(Error::NextFormulaFalse);
        }
        self.phase = Phase::Done(LocalResult {
            output,
            next_formula: next,
            decision,
        });
        Ok(())
    }

    fn broadcast(&self, message: Message, step: &mut Step) {
        for k in 1..=self.config.partition.len() {
            if k != self.config.index {
                step.sends.push((k, message.clone()));
            }
        }
    }

    fn protocol(&self, msg: impl Into<String>) -> Error {
        Error::Protocol {
            enforcer: self.config.index,
            msg: msg.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{Top, TopSet};
    use crate::ltl::{parse_formula, simplify};

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn tops(pairs: &[(&str, &str)]) -> TopSet {
        pairs.iter().map(|(a, b)| Top::new(p(a), p(b))).collect()
    }

    fn ev(names: &[&str]) -> Event {
        Event::from_names(names.iter().copied())
    }

    #[test]
    fn init_rejects_false() {
        assert_eq!(
            init_state(&Formula::False, BottomCheck::Syntactic),
            Err(Error::UnsatisfiableSpecification)
        );
        assert_eq!(
            init_state(&p("G a & F !a"), BottomCheck::Exact),
            Err(Error::UnsatisfiableSpecification)
        );
        let t = init_state(&p("!(G a | F b)"), BottomCheck::Exact).unwrap();
        assert_eq!(
            t.get(&Event::empty()).unwrap().tops,
            tops(&[("!a & !b", "G !b"), ("!b", "F !a & G !b")])
        );
    }

    #[test]
    fn routing() {
        let part = AlphabetPartition::from_names(&[&["a"], &["b"], &["c"]]).unwrap();
        let t = Tcl::initial(tops(&[("b & c", "true")]));
        assert_eq!(route_next(&t, 1, &part), Ok(Some(2)));
        assert_eq!(route_next(&t, 2, &part), Ok(Some(3)));
        assert_eq!(route_next(&Tcl::initial(tops(&[("true", "a")])), 1, &part), Ok(None));
        let orphan = Tcl::initial(tops(&[("z", "true")]));
        assert!(matches!(
            route_next(&orphan, 1, &part),
            Err(Error::UnreachableAlphabet(_))
        ));
    }

    #[test]
    fn global_decision_running_example() {
        let mut t = Tcl::new();
        t.insert(ev(&[]), tops(&[("true", "true"), ("true", "F !a & G !b")]), 1);
        t.insert(ev(&["a"]), tops(&[("true", "F !a & G !b")]), 0);
        let (event, next) = global_decision(&t).unwrap();
        assert_eq!(event, ev(&["a"]));
        assert_eq!(next, simplify(&p("F !a & G !b")));
    }

    #[test]
    fn global_decision_prefers_trivial_then_smallest() {
        let mut t = Tcl::new();
        t.insert(ev(&["a"]), tops(&[("true", "true")]), 1);
        t.insert(ev(&[]), tops(&[("true", "G b")]), 1);
        t.insert(ev(&["b"]), tops(&[("true", "true")]), 1);
        assert_eq!(global_decision(&t).unwrap(), (ev(&["a"]), Formula::True));
        assert_eq!(global_decision(&Tcl::new()), Err(Error::EmptyDomain));
    }

    #[test]
    fn local_decision_prefers_more_pairs_when_forwarding() {
        let mut t = Tcl::new();
        t.insert(ev(&[]), tops(&[("c", "true")]), 1);
        t.insert(ev(&["a"]), tops(&[("c", "G a"), ("d", "true")]), 1);
        t.insert(ev(&["b"]), tops(&[("c", "true")]), 2);
        assert_eq!(local_decision(&t, true).unwrap().0, ev(&["a"]));
        // Deciding finally ignores pair counts.
        let mut t = Tcl::new();
        t.insert(ev(&[]), tops(&[("true", "G a"), ("true", "F a")]), 1);
        t.insert(ev(&["b"]), tops(&[("true", "true")]), 1);
        assert_eq!(local_decision(&t, false).unwrap().0, ev(&["b"]));
    }

    fn config(index: usize, algorithm: Algorithm) -> EnforcerConfig {
        EnforcerConfig {
            index,
            partition: AlphabetPartition::from_names(&[&["a"], &["b"]]).unwrap(),
            algorithm,
            check: BottomCheck::Exact,
        }
    }

    #[test]
    fn protocol_order_violations() {
        let mut m2 = Enforcer::new(config(2, Algorithm::Global), p("a"));
        let early = m2.step(Input::Deliver {
            from: 1,
            message: Message::NextFormula(Formula::True),
        });
        assert!(matches!(early, Err(Error::Protocol { enforcer: 2, .. })));
        m2.step(Input::Observe(ev(&["b"]))).unwrap();
        let wrong = m2.step(Input::Deliver {
            from: 1,
            message: Message::NextFormula(Formula::True),
        });
        assert!(matches!(wrong, Err(Error::Protocol { .. })));
        assert!(m2.advance().is_err());
    }

    #[test]
    fn initiator_decides_alone_without_present_atoms() {
        let mut m1 = Enforcer::new(config(1, Algorithm::Global), p("X b"));
        let step = m1.step(Input::Observe(ev(&["a"]))).unwrap();
        assert_eq!(step.sends.len(), 1);
        assert!(matches!(step.sends[0], (2, Message::FinalBroadcast(_))));
        let r = m1.result().unwrap();
        assert_eq!(r.output, ev(&["a"]));
        assert_eq!(r.next_formula, p("b"));
        m1.advance().unwrap();
        assert_eq!(m1.formula(), &p("b"));
    }
}
