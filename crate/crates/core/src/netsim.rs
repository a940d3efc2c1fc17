//! Deterministic simulated transport and round driver.
//!
//! A single FIFO queue holds every message in flight; the oldest one is
//! delivered first, which also keeps each (sender, receiver) channel in order.

use std::collections::VecDeque;
use std::fmt;

use crate::enforcement::{Algorithm, Enforcer, EnforcerConfig, Input, Message};
use crate::error::{Error, Result};
use crate::event::{distance, AlphabetPartition, Event, Trace};
use crate::ltl::sat::BottomCheck;
use crate::ltl::Formula;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RoundStats {
    pub messages_sent: usize,
    /// Largest number of log entries carried by one message.
    pub max_message_entries: usize,
    /// Largest log held by any enforcer right after an update.
    pub max_domain_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundOutcome {
    pub chosen_event: Event,
    /// Output of enforcer `k` at index `k - 1`.
    pub local_outputs: Vec<Event>,
    pub next_formula: Formula,
    /// Number of atoms changed with respect to the input event.
    pub distance: usize,
    pub stats: RoundStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delivery {
    pub from: usize,
    pub to: usize,
    pub message: Message,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundLog {
    /// 1-based timestamp.
    pub timestamp: usize,
    pub input: Event,
    pub formula: Formula,
    pub deliveries: Vec<Delivery>,
    /// `(enforcer, size)` after each update, in processing order.
    pub domain_sizes: Vec<(usize, usize)>,
    pub notes: Vec<String>,
    pub outcome: RoundOutcome,
}

impl fmt::Display for RoundLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "round {}", self.timestamp)?;
        writeln!(f, "formula {}", self.formula)?;
        writeln!(f, "input {}", self.input)?;
        for d in &self.deliveries {
            writeln!(f, "message M{} -> M{}", d.from, d.to)?;
            write!(f, "{}", d.message)?;
        }
        for (k, size) in &self.domain_sizes {
            writeln!(f, "domain M{k} {size}")?;
        }
        for note in &self.notes {
            writeln!(f, "note {note}")?;
        }
        let o = &self.outcome;
        writeln!(f, "output {}", o.chosen_event)?;
        for (i, e) in o.local_outputs.iter().enumerate() {
            writeln!(f, "local M{} {e}", i + 1)?;
        }
        writeln!(f, "next {}", o.next_formula)?;
        writeln!(
            f,
            "stats messages={} max_entries={} max_domain={} distance={}",
            o.stats.messages_sent, o.stats.max_message_entries, o.stats.max_domain_size, o.distance
        )
    }
}

/// A set of enforcers connected by reliable in-order channels.
#[derive(Debug, Clone)]
pub struct Network {
    enforcers: Vec<Enforcer>,
    partition: AlphabetPartition,
    timestamp: usize,
}

impl Network {
    pub fn new(
        phi: Formula,
        partition: AlphabetPartition,
        algorithm: Algorithm,
        check: BottomCheck,
    ) -> Result<Self> {
        let uncovered: Vec<_> = phi.atoms().difference(&partition.global()).cloned().collect();
        if !uncovered.is_empty() {
            return Err(Error::UnreachableAlphabet(Event::from_atoms(uncovered)));
        }
        if check.is_bottom(&phi) {
            return Err(Error::UnsatisfiableSpecification);
        }
        let enforcers = (1..=partition.len())
            .map(|index| {
                let config = EnforcerConfig {
                    index,
                    partition: partition.clone(),
                    algorithm,
                    check,
                };
                Enforcer::new(config, phi.clone())
            })
            .collect();
        Ok(Network {
            enforcers,
            partition,
            timestamp: 0,
        })
    }

    /// Formula the next round will enforce, as held by the initiator.
    pub fn formula(&self) -> &Formula {
        self.enforcers[0].formula()
    }

    pub fn partition(&self) -> &AlphabetPartition {
        &self.partition
    }

    pub fn enforcers(&self) -> &[Enforcer] {
        &self.enforcers
    }

    /// Runs one timestamp to quiescence.
    pub fn run_round(&mut self, sigma: &Event) -> Result<RoundLog> {
        self.timestamp += 1;
        let n = self.enforcers.len();
        let formula = self.formula().clone();
        let mut queue: VecDeque<Delivery> = VecDeque::new();
        let mut deliveries = Vec::new();
        let mut domain_sizes = Vec::new();
        let mut notes = Vec::new();

        let record = |from: usize,
                          step: crate::enforcement::Step,
                          queue: &mut VecDeque<Delivery>,
                          domain_sizes: &mut Vec<(usize, usize)>,
                          notes: &mut Vec<String>| {
            if let Some(size) = step.domain_size {
                domain_sizes.push((from, size));
            }
            notes.extend(step.notes);
            for (to, message) in step.sends {
                queue.push_back(Delivery { from, to, message });
            }
        };

        for k in 1..=n {
            let local = sigma.restrict(self.partition.component(k));
            let step = self.enforcers[k - 1].step(Input::Observe(local))?;
            record(k, step, &mut queue, &mut domain_sizes, &mut notes);
        }
        // Each enforcer receives at most one evaluation message and one
        // closing message per round.
        let limit = 2 * n;
        while let Some(d) = queue.pop_front() {
            if deliveries.len() >= limit {
                return Err(Error::Protocol {
                    enforcer: d.from,
                    msg: format!("more than {limit} messages in one round"),
                });
            }
            let to = d.to;
            let step = self.enforcers[to - 1].step(Input::Deliver {
                from: d.from,
                message: d.message.clone(),
            })?;
            deliveries.push(d);
            record(to, step, &mut queue, &mut domain_sizes, &mut notes);
        }

        let results: Vec<_> = self
            .enforcers
            .iter()
            .map(|e| e.result().cloned().ok_or(Error::Deadlock))
            .collect::<Result<_>>()?;
        let next_formula = results[0].next_formula.clone();
        let decisions: Vec<&Event> = results.iter().filter_map(|r| r.decision.as_ref()).collect();
        for (k, r) in results.iter().enumerate() {
            let agrees = r.next_formula == next_formula
                && r.decision.as_ref().map_or(true, |d| d == decisions[0]);
            if !agrees {
                return Err(Error::Protocol {
                    enforcer: k + 1,
                    msg: format!("disagrees on the decision: `{}`", r.next_formula),
                });
            }
        }
        let local_outputs: Vec<Event> = results.into_iter().map(|r| r.output).collect();
        let chosen_event = local_outputs
            .iter()
            .fold(Event::empty(), |acc, e| acc.union(e));
        let stats = RoundStats {
            messages_sent: deliveries.len(),
            max_message_entries: deliveries.iter().map(|d| d.message.entries()).max().unwrap_or(0),
            max_domain_size: domain_sizes.iter().map(|(_, s)| *s).max().unwrap_or(0),
        };
        let outcome = RoundOutcome {
            distance: distance(&chosen_event, sigma, &self.partition.global()),
            chosen_event,
            local_outputs,
            next_formula,
            stats,
        };
        for e in &mut self.enforcers {
            e.advance()?;
        }
        Ok(RoundLog {
            timestamp: self.timestamp,
            input: sigma.clone(),
            formula,
            deliveries,
            domain_sizes,
            notes,
            outcome,
        })
    }

    /// Runs every event of `trace` in order; errors carry their timestamp.
    pub fn run_trace(&mut self, trace: &Trace) -> Result<(Trace, Vec<RoundLog>)> {
        let mut out = Trace::default();
        let mut logs = Vec::with_capacity(trace.len());
        for sigma in trace.events() {
            let log = self.run_round(sigma).map_err(|e| Error::AtTimestamp {
                timestamp: self.timestamp,
                source: Box::new(e),
            })?;
            out.push(log.outcome.chosen_event.clone());
            logs.push(log);
        }
        Ok((out, logs))
    }
}
