//! Büchi emptiness with lasso witnesses.

use std::collections::VecDeque;

use crate::alphabet::Letter;
use crate::automaton::{Acceptance, Automaton, Branching};
use crate::error::AutomatonError;
use crate::graph::{self, UNREACHED};
use crate::word::LassoWord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuchiEmptiness {
    Empty,
    /// A word accepted by the automaton.
    NonEmpty(LassoWord),
}

impl BuchiEmptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, BuchiEmptiness::Empty)
    }

    pub fn witness(&self) -> Option<&LassoWord> {
        match self {
            BuchiEmptiness::Empty => None,
            BuchiEmptiness::NonEmpty(w) => Some(w),
        }
    }
}

/// Decides emptiness of a deterministic or nondeterministic Büchi automaton
/// by SCC decomposition of its reachable part.
///
/// The witness runs to the smallest accepting state lying on a cycle, along
/// a shortest path that prefers smaller letters, and then around a shortest
/// cycle back to it.
pub fn is_empty_buchi(a: &Automaton) -> Result<BuchiEmptiness, AutomatonError> {
    if a.acceptance() != Acceptance::Buchi {
        return Err(AutomatonError::WrongAcceptance {
            expected: Acceptance::Buchi,
            found: a.acceptance(),
        });
    }
    if a.branching() == Branching::Universal {
        return Err(AutomatonError::WrongBranching {
            expected: Branching::Nondeterministic,
            found: Branching::Universal,
        });
    }
    let adj = a.graph();
    let sccs = graph::tarjan(&adj, a.initial().iter().copied());
    let target = (0..a.num_states()).find(|&q| {
        a.is_accepting(q) && sccs.component[q] != UNREACHED && sccs.is_nontrivial(&adj, sccs.component[q])
    });
    let Some(q) = target else {
        return Ok(BuchiEmptiness::Empty);
    };
    let comp = sccs.component[q];
    let stem = shortest_word(a, a.initial(), |t| t == q, |_| true).expect("accepting state is reachable");
    let cycle = shortest_word(a, &[q], |t| t == q, |t| sccs.component[t] == comp)
        .filter(|w| !w.is_empty())
        .or_else(|| cycle_back(a, q, comp, &sccs.component))
        .expect("nontrivial component has a cycle");
    Ok(BuchiEmptiness::NonEmpty(
        LassoWord::new(stem, cycle).expect("cycle is nonempty"),
    ))
}

/// Shortest letter sequence from `sources` to a state satisfying `goal`,
/// staying inside `allowed`. An empty word is returned when a source is a goal.
fn shortest_word(
    a: &Automaton,
    sources: &[usize],
    goal: impl Fn(usize) -> bool,
    allowed: impl Fn(usize) -> bool,
) -> Option<Vec<Letter>> {
    if sources.iter().find(|&&s| goal(s)).is_some() {
        return Some(Vec::new());
    }
    let mut parent: Vec<Option<(usize, Letter)>> = vec![None; a.num_states()];
    let mut seen = vec![false; a.num_states()];
    let mut queue = VecDeque::new();
    for &s in sources {
        seen[s] = true;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for l in a.alphabet().letters() {
            for &t in a.successors(v, l) {
                if seen[t] || !allowed(t) {
                    continue;
                }
                seen[t] = true;
                parent[t] = Some((v, l));
                if goal(t) {
                    return Some(unwind(&parent, t));
                }
                queue.push_back(t);
            }
        }
    }
    None
}

fn unwind(parent: &[Option<(usize, Letter)>], mut t: usize) -> Vec<Letter> {
    let mut word = Vec::new();
    while let Some((p, l)) = parent[t] {
        word.push(l);
        t = p;
    }
    word.reverse();
    word
}

/// Shortest nonempty cycle through `q` inside its component.
fn cycle_back(a: &Automaton, q: usize, comp: usize, component: &[usize]) -> Option<Vec<Letter>> {
    let mut parent: Vec<Option<(usize, Letter)>> = vec![None; a.num_states()];
    let mut seen = vec![false; a.num_states()];
    let mut queue = VecDeque::from([q]);
    while let Some(v) = queue.pop_front() {
        for l in a.alphabet().letters() {
            for &t in a.successors(v, l) {
                if t == q {
                    let mut word = if v == q { Vec::new() } else { unwind(&parent, v) };
                    word.push(l);
                    return Some(word);
                }
                if component[t] == comp && !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((v, l));
                    queue.push_back(t);
                }
            }
        }
    }
    None
}
