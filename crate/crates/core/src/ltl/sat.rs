//! Deciding `f ≢ ⊥` for LTL over infinite traces.
//!
//! States are sets of obligations (top-level conjuncts). A state is expanded
//! conjunct by conjunct through `rwt`, `to_dnf` and `encode`; every consistent
//! combination of one pair per conjunct is an edge to the state made of the
//! chosen futures. An eventuality conjunct (`F ψ`, `φ U ψ`) is fulfilled on an
//! edge when the chosen pair does not postpone it, i.e. its future does not
//! hold the eventuality itself. The formula is satisfiable iff some reachable
//! strongly connected component has an internal edge and, for each eventuality
//! occurring in its states, an internal edge on which it is not left pending.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{rwt, simplify, to_dnf, Formula};
use crate::encoding::encode;

/// How `f ≢ ⊥` is decided when pruning obligations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum BottomCheck {
    /// `simplify(f) = ⊥`. Cheap, but blind to contradictions such as `G a ∧ F ¬a`.
    Syntactic,
    /// Full satisfiability over infinite traces.
    #[default]
    Exact,
}

impl BottomCheck {
    pub fn is_bottom(self, f: &Formula) -> bool {
        match self {
            BottomCheck::Syntactic => simplify(f).is_false(),
            BottomCheck::Exact => !is_satisfiable(f),
        }
    }
}

thread_local! {
    static CACHE: RefCell<HashMap<Formula, bool>> = RefCell::new(HashMap::new());
}

/// Whether some infinite trace satisfies `f`.
pub fn is_satisfiable(f: &Formula) -> bool {
    let f = simplify(f);
    match f {
        Formula::True => return true,
        Formula::False => return false,
        _ => {}
    }
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&f).copied()) {
        return hit;
    }
    let answer = explore(&f);
    CACHE.with(|c| c.borrow_mut().insert(f, answer));
    answer
}

type State = BTreeSet<Formula>;

fn is_eventuality(f: &Formula) -> bool {
    matches!(f, Formula::Eventually(_) | Formula::Until(..))
}

fn state_of(f: &Formula) -> Option<State> {
    match f {
        Formula::False => None,
        Formula::True => Some(State::new()),
        _ => Some(f.conjuncts().into_iter().cloned().collect()),
    }
}

struct Edge {
    target: State,
    /// Eventualities of the source left pending on this edge.
    pending: BTreeSet<Formula>,
}

/// One-step successors of a state.
fn successors(state: &State) -> Vec<Edge> {
    // Per conjunct: (present, future, fulfils-this-conjunct).
    let mut choices: Vec<(&Formula, Vec<(Formula, Formula, bool)>)> = Vec::new();
    for c in state {
        let tops = encode(&to_dnf(&rwt(c))).expect("rwt followed by to_dnf is in TDNF");
        let options = tops
            .iter()
            .map(|t| {
                let postponed =
                    is_eventuality(c) && t.future.conjuncts().into_iter().any(|g| g == c);
                (t.present.clone(), t.future.clone(), !postponed)
            })
            .collect();
        choices.push((c, options));
    }

    let mut out = Vec::new();
    let mut stack: Vec<(usize, Formula, Formula, BTreeSet<Formula>)> =
        vec![(0, Formula::True, Formula::True, BTreeSet::new())];
    while let Some((depth, present, future, pending)) = stack.pop() {
        if depth == choices.len() {
            let future = simplify(&future);
            if let Some(target) = state_of(&future) {
                out.push(Edge { target, pending });
            }
            continue;
        }
        let (conjunct, options) = &choices[depth];
        for (p, f, fulfils) in options {
            let present = simplify(&Formula::and(present.clone(), p.clone()));
            if present.is_false() {
                continue;
            }
            let mut pending = pending.clone();
            if is_eventuality(conjunct) && !fulfils {
                pending.insert((*conjunct).clone());
            }
            stack.push((
                depth + 1,
                present,
                Formula::and(future.clone(), f.clone()),
                pending,
            ));
        }
    }
    out
}

fn explore(f: &Formula) -> bool {
    let Some(start) = state_of(f) else {
        return false;
    };
    let mut graph: DiGraph<State, BTreeSet<Formula>> = DiGraph::new();
    let mut index: HashMap<State, NodeIndex> = HashMap::new();
    let root = graph.add_node(start.clone());
    index.insert(start, root);
    let mut work = vec![root];
    while let Some(node) = work.pop() {
        let state = graph[node].clone();
        if state.is_empty() {
            // ⊤ loops on itself with nothing pending.
            return true;
        }
        for edge in successors(&state) {
            let target = match index.get(&edge.target) {
                Some(&t) => t,
                None => {
                    let t = graph.add_node(edge.target.clone());
                    index.insert(edge.target, t);
                    work.push(t);
                    t
                }
            };
            graph.add_edge(node, target, edge.pending);
        }
    }

    tarjan_scc(&graph).into_iter().any(|component| {
        let members: BTreeSet<NodeIndex> = component.iter().copied().collect();
        let internal: Vec<&BTreeSet<Formula>> = graph
            .edge_indices()
            .filter_map(|e| {
                let (a, b) = graph.edge_endpoints(e)?;
                (members.contains(&a) && members.contains(&b)).then(|| &graph[e])
            })
            .collect();
        if internal.is_empty() {
            return false;
        }
        let eventualities: BTreeSet<&Formula> = component
            .iter()
            .flat_map(|n| graph[*n].iter())
            .filter(|g| is_eventuality(g))
            .collect();
        eventualities
            .iter()
            .all(|e| internal.iter().any(|pending| !pending.contains(*e)))
    })
}
