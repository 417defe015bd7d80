//! Brute-force references shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tcause::alphabet::{Alphabet, AlphabetSpec, Letter};
use tcause::automaton::{Automaton, Branching};
use tcause::effect::{EffectClass, EffectSpec};
use tcause::random::{random_automaton, random_system, random_trace};
use tcause::word::LassoWord;
use tcause::System;

/// Every run of `a` on a finite word, by depth-first enumeration.
pub fn nfw_accepts_bruteforce(a: &Automaton, word: &[Letter]) -> bool {
    fn go(a: &Automaton, q: usize, rest: &[Letter]) -> bool {
        match rest.split_first() {
            None => a.is_accepting(q),
            Some((&l, tail)) => a.successors(q, l).iter().any(|&t| go(a, t, tail)),
        }
    }
    a.initial().iter().any(|&q| go(a, q, word))
}

/// Successors of node `(position, state)` in the run graph of `a` on a
/// lasso; positions past the stem wrap around the loop.
fn run_successors(a: &Automaton, w: &LassoWord, (p, q): (usize, usize)) -> Vec<(usize, usize)> {
    let len = w.stem().len() + w.cycle().len();
    let np = if p + 1 == len { w.stem().len() } else { p + 1 };
    a.successors(q, w.letter(p)).iter().map(|&t| (np, t)).collect()
}

fn reach_from(
    a: &Automaton,
    w: &LassoWord,
    start: Vec<(usize, usize)>,
    allowed: &impl Fn(usize) -> bool,
) -> HashSet<(usize, usize)> {
    let mut seen = HashSet::new();
    let mut stack: Vec<(usize, usize)> = start.into_iter().filter(|&(_, q)| allowed(q)).collect();
    while let Some(v) = stack.pop() {
        if seen.insert(v) {
            stack.extend(run_successors(a, w, v).into_iter().filter(|&(_, q)| allowed(q)));
        }
    }
    seen
}

/// Some run of `a` on `w` visits a state satisfying `good` infinitely often
/// while staying inside `allowed` from that point on.
fn has_lasso_run(
    a: &Automaton,
    w: &LassoWord,
    good: impl Fn(usize) -> bool,
    allowed: impl Fn(usize) -> bool,
) -> bool {
    let start = a.initial().iter().map(|&q| (0, q)).collect();
    let reach = reach_from(a, w, start, &|_| true);
    reach.iter().any(|&v| {
        good(v.1) && allowed(v.1) && reach_from(a, w, run_successors(a, w, v), &allowed).contains(&v)
    })
}

/// Some run of a nondeterministic Büchi automaton on `w` is accepting.
pub fn nbw_accepts_bruteforce(a: &Automaton, w: &LassoWord) -> bool {
    has_lasso_run(a, w, |q| a.is_accepting(q), |_| true)
}

/// Some run of a nondeterministic co-Büchi automaton on `w` is accepting.
pub fn ncw_accepts_bruteforce(a: &Automaton, w: &LassoWord) -> bool {
    has_lasso_run(a, w, |q| !a.is_accepting(q), |q| !a.is_accepting(q))
}

/// Every run of a universal Büchi automaton on `w` is accepting: no run
/// eventually avoids the accepting states.
pub fn ubw_accepts_bruteforce(a: &Automaton, w: &LassoWord) -> bool {
    !has_lasso_run(a, w, |q| !a.is_accepting(q), |q| !a.is_accepting(q))
}

/// Every run of a universal automaton on a finite word ends in an accepting
/// state; runs without a successor drop out.
pub fn ufw_accepts_bruteforce(a: &Automaton, word: &[Letter]) -> bool {
    fn go(a: &Automaton, q: usize, rest: &[Letter]) -> bool {
        match rest.split_first() {
            None => a.is_accepting(q),
            Some((&l, tail)) => a.successors(q, l).iter().all(|&t| go(a, t, tail)),
        }
    }
    a.initial().iter().all(|&q| go(a, q, word))
}

/// Follows the single run of a deterministic ω-automaton until a
/// `(state, loop phase)` pair repeats and reports the states on the
/// repeating part, or `None` if the run dies.
pub fn deterministic_cycle(a: &Automaton, w: &LassoWord) -> Option<Vec<usize>> {
    let stem = w.stem().len();
    let period = w.cycle().len();
    let mut q = a.initial()[0];
    for t in 0..stem {
        q = *a.successors(q, w.letter(t)).first()?;
    }
    let mut visited: Vec<(usize, usize)> = Vec::new();
    let mut t = stem;
    loop {
        let key = (q, (t - stem) % period);
        if let Some(i) = visited.iter().position(|&k| k == key) {
            return Some(visited[i..].iter().map(|&(s, _)| s).collect());
        }
        visited.push(key);
        q = *a.successors(q, w.letter(t)).first()?;
        t += 1;
    }
}

/// Acceptance of a deterministic Büchi or co-Büchi automaton by simulation.
pub fn deterministic_accepts(a: &Automaton, w: &LassoWord, cobuchi: bool) -> bool {
    match deterministic_cycle(a, w) {
        None => false,
        Some(cycle) => {
            let hits = cycle.iter().any(|&q| a.is_accepting(q));
            hits != cobuchi
        }
    }
}

/// A random instance with `|S| ≤ 4`, `1 ≤ |I| ≤ 2`, `|O| ≤ 1` and a
/// deterministic effect of at most 3 states. Safety instances get an
/// input-enabled system.
pub fn random_instance(rng: &mut ChaCha8Rng, class: EffectClass) -> (System, LassoWord, EffectSpec) {
    loop {
        let inputs: Vec<String> = (0..rng.gen_range(1..=2)).map(|i| format!("i{i}")).collect();
        let outputs: Vec<String> = (0..rng.gen_range(0..=1)).map(|i| format!("o{i}")).collect();
        let spec = AlphabetSpec::new(&inputs, &outputs).unwrap();
        let system = random_system(rng, &spec, 4, class == EffectClass::Safety);
        let Some(pi) = random_trace(rng, &system, 20) else {
            continue;
        };
        let (_, acceptance) = class.representation();
        let a = random_automaton(
            rng,
            &Alphabet::Props(spec.clone()),
            3,
            Branching::Deterministic,
            acceptance,
            0.0,
        );
        return (system, pi, EffectSpec::new(class, a).unwrap());
    }
}
