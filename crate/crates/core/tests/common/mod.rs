//! Shared generators and instance checks for the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use enforce_core::enforcement::Algorithm;
use enforce_core::event::{AlphabetPartition, Event, Trace};
use enforce_core::ltl::sat::{is_satisfiable, BottomCheck};
use enforce_core::ltl::{Atom, Formula};
use enforce_core::netsim::{Network, RoundLog};
use enforce_core::oracle::{BadPrefixChecker, Lasso};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const POOL: [&str; 4] = ["a", "b", "c", "d"];
pub const LOOP_BOUND: usize = 3;

pub fn pool() -> BTreeSet<Atom> {
    POOL.iter().map(|n| Atom::from(*n)).collect()
}

/// Random formula of depth at most `depth` over the atom pool.
pub fn formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..12) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(POOL[rng.gen_range(0..POOL.len())]),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..12) {
        0 | 1 => Formula::not(formula(rng, d)),
        2 => Formula::and(formula(rng, d), formula(rng, d)),
        3 => Formula::or(formula(rng, d), formula(rng, d)),
        4 => Formula::implies(formula(rng, d), formula(rng, d)),
        5 => Formula::iff(formula(rng, d), formula(rng, d)),
        6 => Formula::next(formula(rng, d)),
        7 | 8 => Formula::globally(formula(rng, d)),
        9 => Formula::eventually(formula(rng, d)),
        10 => Formula::until(formula(rng, d), formula(rng, d)),
        _ => Formula::release(formula(rng, d), formula(rng, d)),
    }
}

/// Random disjunction of two short monomials, sometimes under `G`; these
/// put local choices in tension with the cost of later ones.
pub fn dnf_formula(rng: &mut ChaCha8Rng) -> Formula {
    let monomial = |rng: &mut ChaCha8Rng| {
        let mut atoms = POOL.to_vec();
        atoms.shuffle(rng);
        let k = rng.gen_range(1..=3);
        Formula::conjunction(atoms[..k].iter().map(|a| {
            let lit = Formula::atom(a);
            if rng.gen_bool(0.4) {
                Formula::not(lit)
            } else {
                lit
            }
        }))
    };
    let f = Formula::or(monomial(rng), monomial(rng));
    if f.depth() <= 3 && rng.gen_bool(0.5) {
        Formula::globally(f)
    } else {
        f
    }
}

pub fn event(rng: &mut ChaCha8Rng) -> Event {
    Event::from_names(POOL.iter().copied().filter(|_| rng.gen_bool(0.5)))
}

pub fn trace(rng: &mut ChaCha8Rng, max_len: usize) -> Trace {
    let len = rng.gen_range(1..=max_len);
    Trace::new((0..len).map(|_| event(rng)).collect())
}

pub fn lasso(rng: &mut ChaCha8Rng) -> Lasso {
    let prefix = rng.gen_range(0..=3);
    let cycle = rng.gen_range(1..=3);
    Lasso::new(
        Trace::new((0..prefix).map(|_| event(rng)).collect()),
        Trace::new((0..cycle).map(|_| event(rng)).collect()),
    )
}

/// Splits the atom pool into 2 or 3 nonempty components.
pub fn partition(rng: &mut ChaCha8Rng) -> AlphabetPartition {
    let k = rng.gen_range(2..=3);
    let mut atoms: Vec<Atom> = pool().into_iter().collect();
    atoms.shuffle(rng);
    let mut parts: Vec<BTreeSet<Atom>> = vec![BTreeSet::new(); k];
    for (i, a) in atoms.into_iter().enumerate() {
        let slot = if i < k { i } else { rng.gen_range(0..k) };
        parts[slot].insert(a);
    }
    AlphabetPartition::new(parts).expect("disjoint nonempty components")
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub formula: Formula,
    pub partition: AlphabetPartition,
    pub trace: Trace,
}

/// Deterministic instance for `seed`: a satisfiable formula of depth ≤ 4,
/// a 2–3 component partition and a trace of length ≤ 5. One seed in four
/// draws its formula from [`dnf_formula`].
pub fn instance(seed: u64) -> Instance {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let formula = loop {
        let f = if seed % 4 == 3 {
            dnf_formula(&mut rng)
        } else {
            formula(&mut rng, 4)
        };
        if is_satisfiable(&f) {
            break f;
        }
    };
    let partition = partition(&mut rng);
    let trace = trace(&mut rng, 5);
    Instance {
        seed,
        formula,
        partition,
        trace,
    }
}

/// Everything checked on one run of one algorithm.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub steps: usize,
    pub errors: Vec<String>,
    pub unsound: Vec<String>,
    pub not_transparent: Vec<String>,
    /// Steps whose distance differs from the oracle minimum.
    pub suboptimal: Vec<String>,
    /// Steps whose distance is below the oracle minimum.
    pub below_oracle: Vec<String>,
    pub cost_violations: Vec<String>,
    pub max_domain: usize,
    pub max_messages: usize,
}

impl Report {
    pub fn merge(&mut self, other: Report) {
        self.steps += other.steps;
        self.errors.extend(other.errors);
        self.unsound.extend(other.unsound);
        self.not_transparent.extend(other.not_transparent);
        self.suboptimal.extend(other.suboptimal);
        self.below_oracle.extend(other.below_oracle);
        self.cost_violations.extend(other.cost_violations);
        self.max_domain = self.max_domain.max(other.max_domain);
        self.max_messages = self.max_messages.max(other.max_messages);
    }
}

fn cost_check(inst: &Instance, algorithm: Algorithm, log: &RoundLog) -> Option<String> {
    let n = inst.partition.len();
    let atoms = log.formula.atoms();
    let stats = log.outcome.stats;
    if stats.messages_sent > 2 * (n - 1) {
        return Some(format!("{} messages with {n} enforcers", stats.messages_sent));
    }
    for &(k, size) in &log.domain_sizes {
        let bound = match algorithm {
            Algorithm::Global => 1usize << atoms.len(),
            Algorithm::Local => {
                1usize << inst.partition.component(k).intersection(&atoms).count()
            }
        };
        if size > bound {
            return Some(format!("M{k} domain {size} > {bound}"));
        }
    }
    if algorithm == Algorithm::Local {
        let widest = log.deliveries.iter().map(|d| d.message.entries()).max().unwrap_or(0);
        if widest > 1 {
            return Some(format!("local message with {widest} entries"));
        }
    }
    None
}

/// Runs `algorithm` on the instance and checks every step against the oracle.
pub fn check(inst: &Instance, algorithm: Algorithm) -> Report {
    let mut report = Report::default();
    let tag = |t: usize| format!("seed {} step {t} ({algorithm}) φ={}", inst.seed, inst.formula);
    let network = Network::new(
        inst.formula.clone(),
        inst.partition.clone(),
        algorithm,
        BottomCheck::Exact,
    );
    let mut network = match network {
        Ok(n) => n,
        Err(e) => {
            report.errors.push(format!("{}: {e}", tag(0)));
            return report;
        }
    };
    let checker = BadPrefixChecker::new(&inst.formula, LOOP_BOUND);
    let mut output: Vec<Event> = Vec::new();
    for (i, sigma) in inst.trace.events().iter().enumerate() {
        let t = i + 1;
        let log = match network.run_round(sigma) {
            Ok(log) => log,
            Err(e) => {
                report.errors.push(format!("{}: {e}", tag(t)));
                return report;
            }
        };
        report.steps += 1;
        let chosen = log.outcome.chosen_event.clone();
        let oracle = checker.closest_safe(&output, sigma);

        let mut with_sigma = output.clone();
        with_sigma.push(sigma.clone());
        if !checker.is_bad(&with_sigma) && &chosen != sigma {
            report
                .not_transparent
                .push(format!("{}: σ={sigma} safe but emitted {chosen}", tag(t)));
        }
        output.push(chosen.clone());
        if checker.is_bad(&output) {
            report.unsound.push(format!("{}: emitted {chosen} is bad", tag(t)));
        }
        match oracle {
            None => report
                .errors
                .push(format!("{}: oracle finds no safe event", tag(t))),
            Some((_, best)) => {
                let d = log.outcome.distance;
                if d != best {
                    report
                        .suboptimal
                        .push(format!("{}: distance {d} vs oracle {best}", tag(t)));
                }
                if d < best {
                    report
                        .below_oracle
                        .push(format!("{}: distance {d} < oracle {best}", tag(t)));
                }
            }
        }
        if let Some(v) = cost_check(inst, algorithm, &log) {
            report.cost_violations.push(format!("{}: {v}", tag(t)));
        }
        report.max_domain = report.max_domain.max(log.outcome.stats.max_domain_size);
        report.max_messages = report.max_messages.max(log.outcome.stats.messages_sent);
    }
    report
}
