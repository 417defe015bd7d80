mod common;

use std::fs;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::random_instance;
use tcause::alphabet::Alphabet;
use tcause::automaton::{Automaton, Branching};
use tcause::effect::{EffectClass, EffectSpec};
use tcause::format::{align_to_spec, parse_automaton, parse_system, parse_trace};
use tcause::ops::equivalent_dbw;
use tcause::oracle::{
    differential_test, enumerate_lassos, existential_preimage_membership, universal_preimage_membership,
    Oracle,
};
use tcause::synthesis::synthesize;
use tcause::system::envelope_automaton;
use tcause::{LassoWord, SynthesisOptions, System};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    fs::read_to_string(&p).unwrap()
}

fn instance(system: &str, trace: &str, effect: &str) -> (System, LassoWord, EffectSpec) {
    let t = parse_system(&fixture(system)).unwrap();
    let pi = parse_trace(&fixture(trace), t.spec()).unwrap();
    let a = parse_automaton(&fixture(effect)).unwrap().automaton;
    let e = EffectSpec::new(EffectClass::Recurrence, align_to_spec(&a, t.spec()).unwrap()).unwrap();
    (t, pi, e)
}

fn input_word(t: &System, text: &str) -> LassoWord {
    parse_trace(text, t.spec()).unwrap()
}

#[test]
fn example_one_verdicts() {
    let (t, pi, e) = instance("fig2a.system", "example1_pi.trace", "always_eventually_o.dbw");
    assert!(universal_preimage_membership(&t, &pi, &e, &input_word(&t, "{i} {i} | {}")).unwrap());
    assert!(!universal_preimage_membership(&t, &pi, &e, &input_word(&t, "{i} | {}")).unwrap());
    assert!(universal_preimage_membership(&t, &pi, &e, &pi.inputs(t.spec())).unwrap());
    assert!(existential_preimage_membership(&t, &pi, &e, &input_word(&t, "| {i}")).unwrap());
}

#[test]
fn empty_effect_admits_nothing() {
    let (t, pi, _) = instance("fig2a.system", "example1_pi.trace", "always_eventually_o.dbw");
    let mut b = Automaton::builder(
        Alphabet::Props(t.spec().clone()),
        Branching::Deterministic,
        tcause::Acceptance::Buchi,
        1,
    );
    b.initial(0).transition_all(0, 0);
    let none = EffectSpec::new(EffectClass::Recurrence, b.build().unwrap()).unwrap();
    let oracle = Oracle::new(&t, &pi, &none).unwrap();
    for rho in enumerate_lassos(2, 3, 2) {
        assert!(!oracle.universal(&rho));
        assert!(!oracle.existential(&rho));
    }
}

#[test]
fn obligation_instance_cause_is_infinitely_often_a() {
    let (t, pi, e) = instance("trivial_a.system", "always_a.trace", "obligation.dbw");
    let oracle = Oracle::new(&t, &pi, &e).unwrap();
    for rho in enumerate_lassos(2, 3, 3) {
        let infinitely_often = rho.cycle().iter().any(|l| l.contains(0));
        assert_eq!(oracle.universal(&rho), infinitely_often, "{rho:?}");
    }
}

#[test]
fn existential_is_dual_to_universal() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..30 {
        let (t, pi, bad) = random_instance(&mut rng, EffectClass::Safety);
        // the same DFW read as good prefixes describes the complement
        let good = EffectSpec::new(EffectClass::Guarantee, bad.automaton().clone()).unwrap();
        let Ok(safe) = Oracle::new(&t, &pi, &bad) else {
            continue;
        };
        let Ok(live) = Oracle::new(&t, &pi, &good) else {
            continue;
        };
        for rho in enumerate_lassos(t.spec().input_letter_count(), 3, 2) {
            assert_eq!(safe.existential(&rho), !live.universal(&rho));
            assert_eq!(live.existential(&rho), !safe.universal(&rho));
        }
    }
}

#[test]
fn verdicts_ignore_unrolling() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for i in 0..30 {
        let class = [
            EffectClass::Recurrence,
            EffectClass::Safety,
            EffectClass::Guarantee,
        ][i % 3];
        let (t, pi, e) = random_instance(&mut rng, class);
        let oracle = Oracle::new(&t, &pi, &e).unwrap();
        for rho in enumerate_lassos(t.spec().input_letter_count(), 2, 2) {
            assert_eq!(oracle.universal(&rho), oracle.universal(&rho.unroll(2)));
            assert_eq!(oracle.existential(&rho), oracle.existential(&rho.unroll(2)));
        }
    }
}

#[test]
fn universal_verdicts_are_downward_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for i in 0..24 {
        let class = [
            EffectClass::Recurrence,
            EffectClass::Safety,
            EffectClass::Guarantee,
        ][i % 3];
        let (t, pi, e) = random_instance(&mut rng, class);
        let oracle = Oracle::new(&t, &pi, &e).unwrap();
        let lassos = enumerate_lassos(t.spec().input_letter_count(), 2, 2);
        let verdicts: Vec<bool> = lassos.iter().map(|rho| oracle.universal(rho)).collect();
        for (rho, &member) in lassos.iter().zip(&verdicts) {
            if !member {
                continue;
            }
            let env = envelope_automaton(t.spec(), &pi, rho);
            for (lower, &m) in lassos.iter().zip(&verdicts) {
                if env.accepts_lasso(lower).unwrap() {
                    assert!(m);
                }
            }
        }
    }
}

#[test]
fn flipped_acceptance_is_detected() {
    let (t, pi, e) = instance("fig2a.system", "example1_pi.trace", "always_eventually_o.dbw");
    let cause = synthesize(&t, &pi, &e, SynthesisOptions::default())
        .unwrap()
        .cause
        .trim();
    let oracle = Oracle::new(&t, &pi, &e).unwrap();
    assert!(differential_test("example1", &oracle, EffectClass::Recurrence, &cause, 3, 2).all_agree());
    let mut changed = 0;
    for q in 0..cause.num_states() {
        let mut bits: Vec<bool> = (0..cause.num_states()).map(|s| cause.is_accepting(s)).collect();
        bits[q] = !bits[q];
        let mutant = cause.with_accepting(bits);
        if equivalent_dbw(&mutant, &cause).unwrap() {
            continue;
        }
        changed += 1;
        let report = differential_test("mutant", &oracle, EffectClass::Recurrence, &mutant, 3, 2);
        assert!(
            !report.disagreements.is_empty(),
            "flip of state {q} went unnoticed"
        );
    }
    assert!(changed > 0);
}

#[test]
fn oracle_rejects_foreign_traces() {
    let (t, _, e) = instance("fig2a.system", "example1_pi.trace", "always_eventually_o.dbw");
    let not_a_trace = parse_trace("| {o}", t.spec()).unwrap();
    assert!(Oracle::new(&t, &not_a_trace, &e).is_err());
}
