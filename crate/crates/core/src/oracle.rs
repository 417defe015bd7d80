//! Brute-force evaluation of cause membership on individual lasso words.
//!
//! `ρ` is in the cause iff no trace of the system lies in the similarity
//! envelope of `ρ` and violates the effect. The oracle decides this with a
//! product of the envelope, the system and an automaton for `¬E`, followed
//! by Büchi emptiness. It uses no determinization.

use std::fmt::Write as _;

use crate::alphabet::{AlphabetSpec, Letter};
use crate::automaton::Automaton;
use crate::effect::{EffectClass, EffectSpec};
use crate::emptiness::is_empty_buchi;
use crate::error::SynthesisError;
use crate::ops::{product, ProductAcceptance};
use crate::synthesis::cause_contains;
use crate::system::{envelope_automaton, System};
use crate::word::LassoWord;

/// A fixed instance `(T, π, E)` prepared for repeated membership queries.
#[derive(Debug, Clone)]
pub struct Oracle {
    spec: AlphabetSpec,
    pi: LassoWord,
    /// `traces(T) ∩ ¬E`
    violating: Automaton,
    /// `traces(T) ∩ E`
    satisfying: Automaton,
}

impl Oracle {
    pub fn new(system: &System, pi: &LassoWord, effect: &EffectSpec) -> Result<Self, SynthesisError> {
        let spec = system.spec().clone();
        if effect.automaton().alphabet().props() != Some(&spec) {
            return Err(SynthesisError::AlphabetMismatch);
        }
        system.validate_trace(pi).map_err(|_| SynthesisError::NotATrace)?;
        let traces = system.as_safety_automaton();
        let violating = product(&effect.violation_nbw(), &traces, ProductAcceptance::Left)?.trim();
        let satisfying = product(&effect.satisfaction_nbw(), &traces, ProductAcceptance::Left)?.trim();
        Ok(Oracle {
            spec,
            pi: pi.clone(),
            violating,
            satisfying,
        })
    }

    pub fn input_spec(&self) -> AlphabetSpec {
        self.spec.input_spec()
    }

    fn meets(&self, language: &Automaton, rho: &LassoWord) -> bool {
        let env = envelope_automaton(&self.spec, &self.pi, rho);
        let p = product(language, &env, ProductAcceptance::Left).expect("same alphabet");
        !is_empty_buchi(&p).expect("nondeterministic Büchi").is_empty()
    }

    /// `∀σ ∈ traces(T): σ ≤_π ρ → σ ∈ E`.
    pub fn universal(&self, rho: &LassoWord) -> bool {
        !self.meets(&self.violating, rho)
    }

    /// `∃σ ∈ traces(T): σ ≤_π ρ ∧ σ ∈ E`.
    pub fn existential(&self, rho: &LassoWord) -> bool {
        self.meets(&self.satisfying, rho)
    }
}

pub fn universal_preimage_membership(
    system: &System,
    pi: &LassoWord,
    effect: &EffectSpec,
    rho: &LassoWord,
) -> Result<bool, SynthesisError> {
    Ok(Oracle::new(system, pi, effect)?.universal(rho))
}

pub fn existential_preimage_membership(
    system: &System,
    pi: &LassoWord,
    effect: &EffectSpec,
    rho: &LassoWord,
) -> Result<bool, SynthesisError> {
    Ok(Oracle::new(system, pi, effect)?.existential(rho))
}

/// Every lasso over `letters` letters with `|stem| ≤ stem_max` and
/// `1 ≤ |loop| ≤ loop_max`, ordered by stem length, loop length, then
/// lexicographically. Unrollings are not deduplicated.
pub fn enumerate_lassos(letters: usize, stem_max: usize, loop_max: usize) -> Vec<LassoWord> {
    let mut out = Vec::new();
    for s in 0..=stem_max {
        for l in 1..=loop_max {
            for_each_word(letters, s + l, |w| {
                out.push(LassoWord::new(w[..s].to_vec(), w[s..].to_vec()).expect("loop nonempty"));
            });
        }
    }
    out
}

/// Every word of length `len`, in lexicographic order.
pub fn for_each_word(letters: usize, len: usize, mut f: impl FnMut(&[Letter])) {
    let mut w = vec![Letter(0); len];
    loop {
        f(&w);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if (w[i].0 as usize) + 1 < letters {
                w[i].0 += 1;
                for x in &mut w[i + 1..] {
                    *x = Letter(0);
                }
                break;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub rho: LassoWord,
    pub oracle: bool,
    pub cause: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub instance: String,
    pub stem_max: usize,
    pub loop_max: usize,
    pub verdicts: Vec<Verdict>,
    pub disagreements: Vec<Verdict>,
}

impl OracleReport {
    pub fn checked(&self) -> usize {
        self.verdicts.len()
    }

    pub fn agreed(&self) -> usize {
        self.verdicts.len() - self.disagreements.len()
    }

    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn summary(&self) -> String {
        format!("checked={} agree={}", self.checked(), self.agreed())
    }

    /// One line per disagreement followed by the summary line.
    pub fn render(&self, spec: &AlphabetSpec) -> String {
        let alphabet = crate::alphabet::Alphabet::Props(spec.input_spec());
        let mut out = String::new();
        for d in &self.disagreements {
            writeln!(
                out,
                "disagree rho=\"{}\" oracle={} cause={}",
                d.rho.format(&alphabet),
                d.oracle,
                d.cause
            )
            .unwrap();
        }
        writeln!(out, "{}", self.summary()).unwrap();
        out
    }
}

/// Compares a cause automaton with the oracle on every enumerated lasso.
pub fn differential_test(
    instance: &str,
    oracle: &Oracle,
    class: EffectClass,
    cause: &Automaton,
    stem_max: usize,
    loop_max: usize,
) -> OracleReport {
    let letters = oracle.input_spec().letter_count();
    let mut verdicts = Vec::new();
    let mut disagreements = Vec::new();
    for rho in enumerate_lassos(letters, stem_max, loop_max) {
        let v = Verdict {
            oracle: oracle.universal(&rho),
            cause: cause_contains(class, cause, &rho),
            rho,
        };
        if v.oracle != v.cause {
            disagreements.push(v.clone());
        }
        verdicts.push(v);
    }
    OracleReport {
        instance: instance.to_string(),
        stem_max,
        loop_max,
        verdicts,
        disagreements,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lasso_counts() {
        assert_eq!(enumerate_lassos(2, 0, 1).len(), 2);
        assert_eq!(enumerate_lassos(2, 1, 1).len(), 6);
        assert_eq!(enumerate_lassos(4, 3, 2).len(), (1 + 4 + 16 + 64) * (4 + 16));
        let all = enumerate_lassos(2, 2, 2);
        assert!(all.iter().all(|w| !w.cycle().is_empty()));
        assert_eq!(all[0], LassoWord::constant(Letter(0)));
    }

    #[test]
    fn words_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_word(3, 2, |w| seen.push((w[0].0, w[1].0)));
        assert_eq!(seen.len(), 9);
        assert!(seen.windows(2).all(|p| p[0] < p[1]));
        let mut empty = 0;
        for_each_word(3, 0, |_| empty += 1);
        assert_eq!(empty, 1);
    }
}
