//! Random systems, automata and traces for property-based testing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::alphabet::{Alphabet, AlphabetSpec, Letter};
use crate::automaton::{Acceptance, Automaton, Branching};
use crate::system::System;
use crate::word::LassoWord;

/// A system with `1..=max_states` states. Each `(state, input)` gets one or
/// two successors; when `input_enabled` is false some get none.
pub fn random_system<R: Rng + ?Sized>(
    rng: &mut R,
    spec: &AlphabetSpec,
    max_states: usize,
    input_enabled: bool,
) -> System {
    let n = rng.gen_range(1..=max_states.max(1));
    let outputs = spec.outputs().len();
    let labels: Vec<Letter> = (0..n)
        .map(|_| Letter(rng.gen_range(0..1u32 << outputs) << spec.num_inputs()))
        .collect();
    let mut transitions = Vec::new();
    for s in 0..n {
        for c in 0..spec.input_letter_count() as u32 {
            let roll: f64 = rng.gen();
            let count = if !input_enabled && roll < 0.15 {
                0
            } else if roll < 0.7 {
                1
            } else {
                2
            };
            for _ in 0..count {
                transitions.push((s, Letter(c), rng.gen_range(0..n)));
            }
        }
    }
    System::with_default_names(spec.clone(), 0, labels, &transitions).expect("valid by construction")
}

/// A lasso trace of `system` obtained from a random run, or `None` if the
/// walk gets stuck `attempts` times.
pub fn random_trace<R: Rng + ?Sized>(rng: &mut R, system: &System, attempts: usize) -> Option<LassoWord> {
    let spec = system.spec();
    'attempt: for _ in 0..attempts {
        let mut states = vec![system.initial()];
        let mut letters = Vec::new();
        loop {
            let s = *states.last().unwrap();
            let mut options: Vec<(Letter, usize)> = Vec::new();
            for c in 0..spec.input_letter_count() as u32 {
                for &t in system.successors(s, Letter(c)) {
                    options.push((Letter(c), t));
                }
            }
            let Some(&(c, t)) = options.choose(rng) else {
                continue 'attempt;
            };
            letters.push(c.union(system.label(t)));
            // positions >= 1 repeat once a state recurs there
            if let Some(j) = states[1..].iter().position(|&x| x == t) {
                let j = j + 1;
                let stem = letters[..j].to_vec();
                let cycle = letters[j..].to_vec();
                return Some(LassoWord::new(stem, cycle).expect("cycle is nonempty"));
            }
            states.push(t);
        }
    }
    None
}

/// A random automaton with `1..=max_states` states. Deterministic automata
/// are complete; otherwise each `(state, letter, target)` edge is present
/// with probability `density`.
pub fn random_automaton<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: &Alphabet,
    max_states: usize,
    branching: Branching,
    acceptance: Acceptance,
    density: f64,
) -> Automaton {
    let n = rng.gen_range(1..=max_states.max(1));
    let mut b = Automaton::builder(alphabet.clone(), branching, acceptance, n);
    b.initial(0);
    for q in 0..n {
        if rng.gen_bool(0.5) {
            b.accepting(q);
        }
        for l in alphabet.letters() {
            if branching == Branching::Deterministic {
                b.transition(q, l, rng.gen_range(0..n));
            } else {
                for t in 0..n {
                    if rng.gen_bool(density) {
                        b.transition(q, l, t);
                    }
                }
            }
        }
    }
    b.build().expect("valid by construction")
}

/// Random letter over `alphabet`.
pub fn random_letter<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet) -> Letter {
    Letter(rng.gen_range(0..alphabet.size() as u32))
}

/// Random lasso with `|stem| ≤ stem_max` and `1 ≤ |loop| ≤ loop_max`.
pub fn random_lasso<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: &Alphabet,
    stem_max: usize,
    loop_max: usize,
) -> LassoWord {
    let s = rng.gen_range(0..=stem_max);
    let l = rng.gen_range(1..=loop_max.max(1));
    let stem = (0..s).map(|_| random_letter(rng, alphabet)).collect();
    let cycle = (0..l).map(|_| random_letter(rng, alphabet)).collect();
    LassoWord::new(stem, cycle).expect("loop nonempty")
}
