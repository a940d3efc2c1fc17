use std::fmt::Write;

use enforce_core::enforcement::Algorithm;
use enforce_core::event::{Event, Trace};
use enforce_core::ltl::Formula;
use enforce_core::netsim::RoundLog;
use enforce_core::oracle::BadPrefixChecker;

/// The corrected trace disagrees with the brute-force oracle.
#[derive(Debug)]
pub struct OracleMismatch(pub String);

impl std::fmt::Display for OracleMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "oracle check failed: {}", self.0)
    }
}

impl std::error::Error for OracleMismatch {}

/// Largest number of lassos the oracle may enumerate.
const ORACLE_LIMIT: f64 = (1u64 << 24) as f64;

pub fn table(algorithm: Algorithm, logs: &[RoundLog]) -> String {
    let mut s = format!("algorithm: {algorithm}\n");
    let _ = writeln!(s, "{:>5} {:>8} {:>10} {:>8}  output", "round", "messages", "max-domain", "distance");
    for l in logs {
        let o = &l.outcome;
        let _ = writeln!(
            s,
            "{:>5} {:>8} {:>10} {:>8}  {}",
            l.timestamp, o.stats.messages_sent, o.stats.max_domain_size, o.distance, o.chosen_event
        );
    }
    let total: usize = logs.iter().map(|l| l.outcome.stats.messages_sent).sum();
    let _ = writeln!(s, "total messages: {total}");
    s
}

pub fn key_values(algorithm: Algorithm, logs: &[RoundLog]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "algorithm={algorithm}");
    let _ = writeln!(s, "rounds={}", logs.len());
    let sum = |f: fn(&RoundLog) -> usize| logs.iter().map(f).sum::<usize>();
    let max = |f: fn(&RoundLog) -> usize| logs.iter().map(f).max().unwrap_or(0);
    let _ = writeln!(s, "messages={}", sum(|l| l.outcome.stats.messages_sent));
    let _ = writeln!(s, "max_domain_size={}", max(|l| l.outcome.stats.max_domain_size));
    let _ = writeln!(s, "max_message_entries={}", max(|l| l.outcome.stats.max_message_entries));
    let _ = writeln!(s, "total_distance={}", sum(|l| l.outcome.distance));
    for l in logs {
        let (t, o) = (l.timestamp, &l.outcome);
        let _ = writeln!(s, "round.{t}.messages={}", o.stats.messages_sent);
        let _ = writeln!(s, "round.{t}.max_domain_size={}", o.stats.max_domain_size);
        let _ = writeln!(s, "round.{t}.max_message_entries={}", o.stats.max_message_entries);
        let _ = writeln!(s, "round.{t}.distance={}", o.distance);
    }
    s
}

/// Soundness and transparency at every step, and optimality under global
/// exploration.
pub fn check_oracle(
    formula: &Formula,
    input: &Trace,
    output: &Trace,
    logs: &[RoundLog],
    algorithm: Algorithm,
    loop_bound: usize,
) -> anyhow::Result<()> {
    let letters = 2f64.powi(formula.atoms().len() as i32);
    if letters.powi(loop_bound as i32) > ORACLE_LIMIT {
        anyhow::bail!(
            "--check-oracle: {} atoms with loop bound {loop_bound} is too large to enumerate",
            formula.atoms().len()
        );
    }
    let checker = BadPrefixChecker::new(formula, loop_bound);
    let fail = |t: usize, msg: String| OracleMismatch(format!("step {t}: {msg}"));
    let mut history: Vec<Event> = Vec::new();
    for (i, (sigma, emitted)) in input.events().iter().zip(output.events()).enumerate() {
        let t = i + 1;
        let mut with_sigma = history.clone();
        with_sigma.push(sigma.clone());
        if !checker.is_bad(&with_sigma) && emitted != sigma {
            return Err(fail(t, format!("{sigma} was safe but {emitted} was emitted")).into());
        }
        let best = checker.closest_safe(&history, sigma);
        history.push(emitted.clone());
        if checker.is_bad(&history) {
            return Err(fail(t, format!("emitting {emitted} forms a bad prefix")).into());
        }
        if algorithm == Algorithm::Global {
            let d = logs[i].outcome.distance;
            match best {
                Some((_, best)) if best == d => {}
                Some((_, best)) => {
                    return Err(fail(t, format!("distance {d}, oracle minimum {best}")).into())
                }
                None => return Err(fail(t, "oracle finds no safe event".into()).into()),
            }
        }
    }
    Ok(())
}
