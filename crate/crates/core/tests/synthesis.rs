mod common;

use std::fs;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::random_instance;
use tcause::alphabet::{Alphabet, AlphabetSpec, Letter};
use tcause::automaton::{Acceptance, Automaton, Branching};
use tcause::effect::{EffectClass, EffectSpec};
use tcause::emptiness::is_empty_buchi;
use tcause::format::{align_to_spec, parse_automaton, parse_system, parse_trace};
use tcause::oracle::{enumerate_lassos, for_each_word, Oracle};
use tcause::random::random_automaton;
use tcause::synthesis::*;
use tcause::word::common_shape;
use tcause::{LassoWord, System};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    fs::read_to_string(&p).unwrap()
}

fn example1() -> (System, LassoWord, EffectSpec) {
    let t = parse_system(&fixture("fig2a.system")).unwrap();
    let pi = parse_trace(&fixture("example1_pi.trace"), t.spec()).unwrap();
    let a = parse_automaton(&fixture("always_eventually_o.dbw"))
        .unwrap()
        .automaton;
    let e = EffectSpec::new(EffectClass::Recurrence, align_to_spec(&a, t.spec()).unwrap()).unwrap();
    (t, pi, e)
}

fn constant_effect(spec: &AlphabetSpec, class: EffectClass, accepting: bool) -> EffectSpec {
    let (_, acceptance) = class.representation();
    let mut b = Automaton::builder(
        Alphabet::Props(spec.clone()),
        Branching::Deterministic,
        acceptance,
        1,
    );
    b.initial(0).transition_all(0, 0);
    if accepting {
        b.accepting(0);
    }
    EffectSpec::new(class, b.build().unwrap()).unwrap()
}

fn pair_word(spec: &AlphabetSpec, rho: &LassoWord, pi: &LassoWord) -> LassoWord {
    let (stem, cycle) = common_shape(&[rho, pi]);
    LassoWord::from_fn(stem, cycle, |t| {
        Alphabet::pair_letter(spec, rho.letter(t), pi.letter(t))
    })
}

#[test]
fn pair_ubw_has_product_states_and_agrees_with_oracle() {
    let (t, pi, e) = example1();
    let ubw = build_pair_ubw(&t, &e).unwrap();
    assert_eq!(ubw.num_states(), t.num_states() * e.num_states());
    assert_eq!(ubw.branching(), Branching::Universal);
    let oracle = Oracle::new(&t, &pi, &e).unwrap();
    for rho in enumerate_lassos(2, 3, 2) {
        assert_eq!(
            ubw.accepts_lasso(&pair_word(t.spec(), &rho, &pi)).unwrap(),
            oracle.universal(&rho)
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..25 {
        let (t, pi, e) = random_instance(&mut rng, EffectClass::Recurrence);
        let ubw = build_pair_ubw(&t, &e).unwrap();
        let oracle = Oracle::new(&t, &pi, &e).unwrap();
        for rho in enumerate_lassos(t.spec().input_letter_count(), 2, 2) {
            assert_eq!(
                ubw.accepts_lasso(&pair_word(t.spec(), &rho, &pi)).unwrap(),
                oracle.universal(&rho)
            );
        }
    }
}

#[test]
fn vacuous_recurrence_effect_gives_everything() {
    let (t, pi, _) = example1();
    let e = constant_effect(t.spec(), EffectClass::Recurrence, true);
    let r = synthesize(&t, &pi, &e, SynthesisOptions::default()).unwrap();
    assert!(r.exists && r.sat_holds);
    for rho in enumerate_lassos(2, 2, 2) {
        assert!(r.contains(&rho));
    }
    let none = constant_effect(t.spec(), EffectClass::Recurrence, false);
    let r = synthesize(&t, &pi, &none, SynthesisOptions::default()).unwrap();
    assert!(!r.exists && !r.sat_holds);
}

#[test]
fn combined_cause_respects_trace_length_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for class in [
        EffectClass::Safety,
        EffectClass::Guarantee,
        EffectClass::Recurrence,
    ] {
        for _ in 0..10 {
            let (t, pi, e) = random_instance(&mut rng, class);
            let det = match class {
                EffectClass::Safety => {
                    tcause::ops::determinize_nfw(&build_pair_nfw(&t, &e).unwrap()).unwrap()
                }
                EffectClass::Guarantee => {
                    tcause::ops::determinize_ufw(&build_pair_ufw(&t, &e).unwrap()).unwrap()
                }
                _ => tcause::ops::breakpoint_ubw_to_dbw(&build_pair_ubw(&t, &e).unwrap()).unwrap(),
            };
            let combined = combine_with_trace(&det, t.spec(), &pi).unwrap();
            assert!(combined.num_states() <= pi.len() * det.num_states());
            assert_eq!(combined.alphabet(), &Alphabet::Props(t.spec().input_spec()));
        }
    }
}

#[test]
fn prefix_classes_with_vacuous_effects() {
    let spec = AlphabetSpec::new(&["i"], &["o"]).unwrap();
    let t = System::trivial_full(spec.clone());
    let pi = parse_trace("{i} | {o}", &spec).unwrap();
    for class in [EffectClass::Safety, EffectClass::Guarantee] {
        // safety DFWs accept bad prefixes, guarantee DFWs good prefixes
        let everything = constant_effect(&spec, class, class == EffectClass::Guarantee);
        let nothing = constant_effect(&spec, class, class == EffectClass::Safety);
        let r = synthesize(&t, &pi, &everything, SynthesisOptions::default()).unwrap();
        assert!(r.exists && r.sat_holds, "{class}");
        assert_eq!(
            r.cause.accepts_finite(&[]).unwrap(),
            class == EffectClass::Guarantee
        );
        for rho in enumerate_lassos(2, 2, 2) {
            assert!(r.contains(&rho));
        }
        let r = synthesize(&t, &pi, &nothing, SynthesisOptions::default()).unwrap();
        assert!(!r.exists && !r.sat_holds, "{class}");
        assert!(enumerate_lassos(2, 2, 2).iter().all(|rho| !r.contains(rho)));
    }
}

fn dfw(n: usize, accepting: &[usize], edges: &[(usize, u32, usize)]) -> Automaton {
    let alphabet = Alphabet::Props(AlphabetSpec::inputs_only(&["a"]).unwrap());
    let mut b = Automaton::builder(alphabet, Branching::Deterministic, Acceptance::Finite, n);
    b.initial(0);
    for &q in accepting {
        b.accepting(q);
    }
    for &(p, l, q) in edges {
        b.transition(p, Letter(l), q);
    }
    b.build().unwrap()
}

/// In a complete DFW with `n` states, a state is forced iff every word of
/// length `n` visits an accepting state from it.
fn forced_bruteforce(a: &Automaton, q: usize) -> bool {
    let mut all = true;
    for_each_word(a.alphabet().size(), a.num_states(), |w| {
        let mut s = q;
        let mut hit = a.is_accepting(s);
        for &l in w {
            s = a.step(s, l).unwrap();
            hit |= a.is_accepting(s);
        }
        all &= hit;
    });
    all
}

#[test]
fn closure_marks_forced_states() {
    let cyclic = dfw(2, &[], &[(0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)]);
    assert_eq!(forced_acceptance_closure(&cyclic).unwrap(), cyclic);

    // every length-2 word reaches state 2
    let two_steps = dfw(
        4,
        &[2],
        &[
            (0, 0, 1),
            (0, 1, 3),
            (1, 0, 2),
            (1, 1, 2),
            (3, 0, 2),
            (3, 1, 2),
            (2, 0, 2),
            (2, 1, 2),
        ],
    );
    let closed = forced_acceptance_closure(&two_steps).unwrap();
    assert!(closed.accepts_finite(&[]).unwrap());
    assert!((0..4).all(|q| closed.is_accepting(q)));

    let escape = dfw(2, &[1], &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)]);
    assert!(!forced_acceptance_closure(&escape).unwrap().is_accepting(0));

    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let alphabet = Alphabet::symbols(&["x", "y"]).unwrap();
    for _ in 0..60 {
        let a = random_automaton(
            &mut rng,
            &alphabet,
            5,
            Branching::Deterministic,
            Acceptance::Finite,
            0.0,
        );
        let c = forced_acceptance_closure(&a).unwrap();
        assert_eq!(forced_acceptance_closure(&c).unwrap(), c);
        for q in 0..a.num_states() {
            assert_eq!(c.is_accepting(q), forced_bruteforce(&a, q));
        }
    }
}

#[test]
fn sat_condition_examples() {
    let (t, pi, e) = example1();
    let r = synthesize(&t, &pi, &e, SynthesisOptions::default()).unwrap();
    assert!(verify_sat(&t, &pi, &e, EffectClass::Recurrence, &r.cause));

    // pi ends in {o} forever, so it violates □◇¬o
    let spec = t.spec();
    let mut gf_not_o = Automaton::builder(
        Alphabet::Props(spec.clone()),
        Branching::Deterministic,
        Acceptance::Buchi,
        2,
    );
    gf_not_o.initial(0).accepting(1);
    for l in Alphabet::Props(spec.clone()).letters() {
        let target = usize::from(!l.contains(1));
        gf_not_o.transition(0, l, target).transition(1, l, target);
    }
    let e2 = EffectSpec::new(EffectClass::Recurrence, gf_not_o.build().unwrap()).unwrap();
    let r2 = synthesize(&t, &pi, &e2, SynthesisOptions::default()).unwrap();
    assert!(!r2.sat_holds);
    assert!(!verify_sat(&t, &pi, &e2, EffectClass::Recurrence, &r.cause));

    // two successors on the same input, one of them raising o; effect □¬o
    let spec = AlphabetSpec::new(&["i"], &["o"]).unwrap();
    let t = parse_system(
        "inputs: i\noutputs: o\nstates: s0 s1\ninit: s0\nlabel s0 {}\nlabel s1 {o}\n\
         trans s0 {} s0\ntrans s0 {} s1\ntrans s0 {i} s0\ntrans s0 {i} s1\n\
         trans s1 {} s1\ntrans s1 {i} s1\n",
    )
    .unwrap();
    let pi = parse_trace("| {}", &spec).unwrap();
    let mut bad = Automaton::builder(
        Alphabet::Props(spec.clone()),
        Branching::Deterministic,
        Acceptance::Finite,
        2,
    );
    bad.initial(0).accepting(1);
    for l in Alphabet::Props(spec.clone()).letters() {
        bad.transition(0, l, usize::from(l.contains(1)))
            .transition(1, l, 1);
    }
    let e = EffectSpec::new(EffectClass::Safety, bad.build().unwrap()).unwrap();
    assert!(e.contains(&pi));
    let r = synthesize(&t, &pi, &e, SynthesisOptions::default()).unwrap();
    assert!(!r.sat_holds && !r.exists);
    assert!(!verify_sat(&t, &pi, &e, EffectClass::Safety, &r.cause));
}

#[test]
fn existence_verdicts_have_oracle_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for i in 0..45 {
        let class = [
            EffectClass::Recurrence,
            EffectClass::Safety,
            EffectClass::Guarantee,
        ][i % 3];
        let (t, pi, e) = random_instance(&mut rng, class);
        let r = synthesize(&t, &pi, &e, SynthesisOptions::default()).unwrap();
        assert_eq!(r.exists, cause_exists(&r));
        let oracle = Oracle::new(&t, &pi, &e).unwrap();
        let lassos = enumerate_lassos(t.spec().input_letter_count(), 3, 2);
        let found = lassos.iter().find(|rho| oracle.universal(rho));
        if r.sat_holds {
            assert!(r.exists);
        }
        if !r.exists {
            assert!(found.is_none());
        } else if class == EffectClass::Recurrence {
            let w = is_empty_buchi(&r.cause).unwrap();
            assert!(oracle.universal(w.witness().unwrap()));
        } else {
            assert!(found.is_some(), "{class} cause nonempty but no short member");
        }
    }
}

#[test]
fn guarantee_modes_induce_the_same_language() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..30 {
        let (t, pi, e) = random_instance(&mut rng, EffectClass::Guarantee);
        let exact = synthesize(&t, &pi, &e, SynthesisOptions { exact_prefixes: true }).unwrap();
        let loose = synthesize(
            &t,
            &pi,
            &e,
            SynthesisOptions {
                exact_prefixes: false,
            },
        )
        .unwrap();
        for rho in enumerate_lassos(t.spec().input_letter_count(), 3, 2) {
            assert_eq!(exact.contains(&rho), loose.contains(&rho));
        }
        let letters = t.spec().input_letter_count();
        for len in 0..=4 {
            for_each_word(letters, len, |w| {
                if loose.cause.accepts_finite(w).unwrap() {
                    assert!(exact.cause.accepts_finite(w).unwrap());
                }
            });
        }
    }
}

#[test]
fn class_mismatch_and_blocking_systems_are_rejected() {
    let (t, pi, e) = example1();
    assert!(build_pair_nfw(&t, &e).is_err());
    assert!(build_pair_ufw(&t, &e).is_err());
    let bad = constant_effect(t.spec(), EffectClass::Safety, false);
    // fig2a is input-enabled, a system with a dead end is not
    assert!(synthesize(&t, &pi, &bad, SynthesisOptions::default()).is_ok());
    let spec = AlphabetSpec::new(&["i"], &["o"]).unwrap();
    let blocking =
        parse_system("inputs: i\noutputs: o\nstates: s0\ninit: s0\nlabel s0 {}\ntrans s0 {} s0\n").unwrap();
    let pi = parse_trace("| {}", &spec).unwrap();
    let e = constant_effect(&spec, EffectClass::Safety, false);
    assert!(synthesize(&blocking, &pi, &e, SynthesisOptions::default()).is_err());
    let g = constant_effect(&spec, EffectClass::Guarantee, true);
    assert!(synthesize(&blocking, &pi, &g, SynthesisOptions::default()).is_ok());
}
