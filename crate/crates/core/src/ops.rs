//! Automaton constructions: subset and breakpoint determinization, products,
//! complementation and language equivalence.

use std::collections::HashMap;

use crate::alphabet::Letter;
use crate::automaton::{complete, explore_deterministic, Acceptance, Automaton, Branching};
use crate::emptiness::is_empty_buchi;
use crate::error::AutomatonError;

fn require_acceptance(a: &Automaton, expected: Acceptance) -> Result<(), AutomatonError> {
    if a.acceptance() != expected {
        return Err(AutomatonError::WrongAcceptance {
            expected,
            found: a.acceptance(),
        });
    }
    Ok(())
}

fn require_branching(a: &Automaton, allowed: &[Branching]) -> Result<(), AutomatonError> {
    if !allowed.contains(&a.branching()) {
        return Err(AutomatonError::WrongBranching {
            expected: allowed[0],
            found: a.branching(),
        });
    }
    Ok(())
}

/// `base^n`, saturating.
pub fn pow_bound(base: usize, n: usize) -> usize {
    let mut acc: usize = 1;
    for _ in 0..n {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Groups letters on which every state has the same successors.
/// Returns one representative per class and the class of each letter.
fn letter_classes(a: &Automaton) -> (Vec<Letter>, Vec<usize>) {
    let mut by_signature: HashMap<Vec<&[usize]>, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut class_of = Vec::with_capacity(a.alphabet().size());
    for l in a.alphabet().letters() {
        let sig: Vec<&[usize]> = (0..a.num_states()).map(|q| a.successors(q, l)).collect();
        let next = reps.len();
        let c = *by_signature.entry(sig).or_insert(next);
        if c == next {
            reps.push(l);
        }
        class_of.push(c);
    }
    (reps, class_of)
}

/// Reachable-only deterministic construction over macro-states, computing
/// successors once per letter class.
fn macro_construction<M, F, A>(
    a: &Automaton,
    acceptance: Acceptance,
    initial: M,
    mut step: F,
    accepting: A,
    bound: usize,
) -> Result<Automaton, AutomatonError>
where
    M: Clone + Eq + std::hash::Hash,
    F: FnMut(&M, Letter) -> M,
    A: Fn(&M) -> bool,
{
    let (reps, class_of) = letter_classes(a);
    let letters = a.alphabet().size();
    let mut index: HashMap<M, usize> = HashMap::new();
    let mut states = vec![initial.clone()];
    index.insert(initial, 0);
    let mut class_table: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let m = states[i].clone();
        for &rep in &reps {
            let t = step(&m, rep);
            let j = match index.get(&t) {
                Some(&j) => j,
                None => {
                    let j = states.len();
                    if j >= bound {
                        return Err(AutomatonError::BoundExceeded { count: j + 1, bound });
                    }
                    index.insert(t.clone(), j);
                    states.push(t);
                    j
                }
            };
            class_table.push(j);
        }
        i += 1;
    }
    let classes = reps.len();
    let mut table = Vec::with_capacity(states.len() * letters);
    for s in 0..states.len() {
        for &c in &class_of {
            table.push(Some(class_table[s * classes + c]));
        }
    }
    let acc = states.iter().map(accepting).collect();
    Automaton::from_table(a.alphabet().clone(), acceptance, 0, acc, &table)
}

/// Subset construction for a nondeterministic finite-word automaton.
/// The result is complete; the empty macro-state is its rejecting sink.
pub fn determinize_nfw(a: &Automaton) -> Result<Automaton, AutomatonError> {
    require_acceptance(a, Acceptance::Finite)?;
    require_branching(a, &[Branching::Nondeterministic, Branching::Deterministic])?;
    macro_construction(
        a,
        Acceptance::Finite,
        a.initial().to_vec(),
        |m, l| a.post_set(m, l),
        |m| m.iter().any(|&q| a.is_accepting(q)),
        pow_bound(2, a.num_states()),
    )
}

/// Subset construction for a universal finite-word automaton: a macro-state
/// is accepting iff all its members are, so the empty macro-state (every
/// branch dropped) accepts.
pub fn determinize_ufw(a: &Automaton) -> Result<Automaton, AutomatonError> {
    require_acceptance(a, Acceptance::Finite)?;
    require_branching(a, &[Branching::Universal, Branching::Deterministic])?;
    macro_construction(
        a,
        Acceptance::Finite,
        a.initial().to_vec(),
        |m, l| a.post_set(m, l),
        |m| m.iter().all(|&q| a.is_accepting(q)),
        pow_bound(2, a.num_states()),
    )
}

/// Breakpoint construction turning a universal Büchi automaton into a
/// deterministic one.
///
/// Macro-states are pairs `(active, owing)` with `owing ⊆ active`; `owing`
/// holds the branches that have not visited an accepting state since the
/// last breakpoint. A macro-state with empty `owing` is a breakpoint and is
/// accepting; its successor restarts `owing` from all active branches.
pub fn breakpoint_ubw_to_dbw(a: &Automaton) -> Result<Automaton, AutomatonError> {
    require_acceptance(a, Acceptance::Buchi)?;
    require_branching(a, &[Branching::Universal, Branching::Deterministic])?;
    let not_accepting =
        |set: Vec<usize>| -> Vec<usize> { set.into_iter().filter(|&q| !a.is_accepting(q)).collect() };
    let active = a.initial().to_vec();
    let owing = not_accepting(active.clone());
    macro_construction(
        a,
        Acceptance::Buchi,
        (active, owing),
        |(active, owing), l| {
            let next_active = a.post_set(active, l);
            let next_owing = if owing.is_empty() {
                not_accepting(next_active.clone())
            } else {
                not_accepting(a.post_set(owing, l))
            };
            (next_active, next_owing)
        },
        |(_, owing)| owing.is_empty(),
        pow_bound(3, a.num_states()),
    )
}

/// How the accepting states of a product are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductAcceptance {
    /// Accepting iff both components are; used for finite-word intersection.
    Both,
    /// Accepting iff the left component is; the right factor is expected to
    /// accept everything it can read (a safety-shaped automaton).
    Left,
    /// Mirror of [`ProductAcceptance::Left`].
    Right,
    /// Intersection of two Büchi conditions with a two-phase flag; doubles
    /// the state space.
    BuchiIntersection,
}

/// Synchronous product over a shared alphabet. States are `(p, q)` numbered
/// `p * |b| + q` (and `+ flag * |a||b|` for Büchi intersection); nothing is
/// pruned.
pub fn product(a: &Automaton, b: &Automaton, mode: ProductAcceptance) -> Result<Automaton, AutomatonError> {
    if a.alphabet() != b.alphabet() {
        return Err(AutomatonError::IncompatibleAlphabets);
    }
    if a.branching() == Branching::Universal || b.branching() == Branching::Universal {
        return Err(AutomatonError::Unsupported("product of universal automata"));
    }
    let acceptance = match mode {
        ProductAcceptance::Left => a.acceptance(),
        ProductAcceptance::Right => b.acceptance(),
        ProductAcceptance::Both => {
            if a.acceptance() != Acceptance::Finite || b.acceptance() != Acceptance::Finite {
                return Err(AutomatonError::Unsupported(
                    "conjunctive product of ω-automata; use Büchi intersection",
                ));
            }
            Acceptance::Finite
        }
        ProductAcceptance::BuchiIntersection => {
            require_acceptance(a, Acceptance::Buchi)?;
            require_acceptance(b, Acceptance::Buchi)?;
            Acceptance::Buchi
        }
    };
    let branching = if a.is_deterministic() && b.is_deterministic() {
        Branching::Deterministic
    } else {
        Branching::Nondeterministic
    };
    let (na, nb) = (a.num_states(), b.num_states());
    let layers = if mode == ProductAcceptance::BuchiIntersection {
        2
    } else {
        1
    };
    let idx = |p: usize, q: usize, f: usize| f * na * nb + p * nb + q;
    let mut builder = Automaton::builder(a.alphabet().clone(), branching, acceptance, layers * na * nb);
    for &p in a.initial() {
        for &q in b.initial() {
            builder.initial(idx(p, q, 0));
        }
    }
    for f in 0..layers {
        for p in 0..na {
            for q in 0..nb {
                let accepting = match mode {
                    ProductAcceptance::Both => a.is_accepting(p) && b.is_accepting(q),
                    ProductAcceptance::Left => a.is_accepting(p),
                    ProductAcceptance::Right => b.is_accepting(q),
                    ProductAcceptance::BuchiIntersection => f == 0 && a.is_accepting(p),
                };
                if accepting {
                    builder.accepting(idx(p, q, f));
                }
                let next_flag = match (mode, f) {
                    (ProductAcceptance::BuchiIntersection, 0) => usize::from(a.is_accepting(p)),
                    (ProductAcceptance::BuchiIntersection, _) => usize::from(!b.is_accepting(q)),
                    _ => 0,
                };
                for l in a.alphabet().letters() {
                    for &p2 in a.successors(p, l) {
                        for &q2 in b.successors(q, l) {
                            builder.transition(idx(p, q, f), l, idx(p2, q2, next_flag));
                        }
                    }
                }
            }
        }
    }
    builder.build()
}

/// Complement of a complete DFW by flipping its accepting set.
pub fn complement_dfw(a: &Automaton) -> Result<Automaton, AutomatonError> {
    require_acceptance(a, Acceptance::Finite)?;
    require_branching(a, &[Branching::Deterministic])?;
    if !a.is_complete() {
        return Err(AutomatonError::Incomplete);
    }
    let flipped = a.accepting_mask().iter().map(|&f| !f).collect();
    Ok(a.with_accepting(flipped))
}

/// Complement of a complete DBW as an NBW with `2|Q|` states.
///
/// Copy 0 follows the DBW; at any point a run may move to copy 1, which only
/// contains the non-accepting states and where every state is accepting. A
/// run stays in copy 1 forever exactly when the DBW run eventually avoids
/// its accepting states.
pub fn complement_dbw_to_nbw(a: &Automaton) -> Result<Automaton, AutomatonError> {
    require_acceptance(a, Acceptance::Buchi)?;
    require_branching(a, &[Branching::Deterministic])?;
    if !a.is_complete() {
        return Err(AutomatonError::Incomplete);
    }
    let n = a.num_states();
    let mut b = Automaton::builder(
        a.alphabet().clone(),
        Branching::Nondeterministic,
        Acceptance::Buchi,
        2 * n,
    );
    b.initial(a.initial()[0]);
    for q in 0..n {
        let q_ok = !a.is_accepting(q);
        if q_ok {
            b.accepting(n + q);
        }
        for l in a.alphabet().letters() {
            let t = a.step(q, l).expect("complete");
            b.transition(q, l, t);
            if !a.is_accepting(t) {
                b.transition(q, l, n + t);
                if q_ok {
                    b.transition(n + q, l, n + t);
                }
            }
        }
    }
    b.build()
}

fn require_complete_dbw(a: &Automaton) -> Result<(), AutomatonError> {
    require_acceptance(a, Acceptance::Buchi)?;
    require_branching(a, &[Branching::Deterministic])?;
    if !a.is_complete() {
        return Err(AutomatonError::Incomplete);
    }
    Ok(())
}

/// Language equivalence of two complete DBWs, via emptiness of `a ∩ ¬b`
/// and `b ∩ ¬a`.
pub fn equivalent_dbw(a: &Automaton, b: &Automaton) -> Result<bool, AutomatonError> {
    require_complete_dbw(a)?;
    require_complete_dbw(b)?;
    if a.alphabet() != b.alphabet() {
        return Err(AutomatonError::IncompatibleAlphabets);
    }
    for (x, y) in [(a, b), (b, a)] {
        let diff = product(
            x,
            &complement_dbw_to_nbw(y)?,
            ProductAcceptance::BuchiIntersection,
        )?;
        if !is_empty_buchi(&diff)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Language equivalence of two DFWs (completed as needed).
pub fn equivalent_dfw(a: &Automaton, b: &Automaton) -> Result<bool, AutomatonError> {
    for x in [a, b] {
        require_acceptance(x, Acceptance::Finite)?;
        require_branching(x, &[Branching::Deterministic])?;
    }
    if a.alphabet() != b.alphabet() {
        return Err(AutomatonError::IncompatibleAlphabets);
    }
    let (a, b) = (complete(a), complete(b));
    let pairs = explore_deterministic(
        a.alphabet().clone(),
        Acceptance::Finite,
        (a.initial()[0], b.initial()[0]),
        |&(p, q), l| Some((a.step(p, l).unwrap(), b.step(q, l).unwrap())),
        |&(p, q)| a.is_accepting(p) != b.is_accepting(q),
    );
    Ok(pairs.accepting_states().is_empty())
}
