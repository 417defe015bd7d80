//! Effects: ω-regular properties tagged with their class in the temporal
//! hierarchy and stored in the matching deterministic representation.

use std::fmt;
use std::str::FromStr;

use crate::automaton::{complete, Acceptance, Automaton, Branching};
use crate::error::SynthesisError;
use crate::ops::complement_dbw_to_nbw;
use crate::word::LassoWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EffectClass {
    /// Deterministic Büchi automaton.
    Recurrence,
    /// DFW for the bad prefixes.
    Safety,
    /// DFW for the good prefixes.
    Guarantee,
    /// Deterministic co-Büchi automaton. Only the oracle handles this class.
    Persistence,
}

impl EffectClass {
    pub fn name(self) -> &'static str {
        match self {
            EffectClass::Recurrence => "recurrence",
            EffectClass::Safety => "safety",
            EffectClass::Guarantee => "guarantee",
            EffectClass::Persistence => "persistence",
        }
    }

    /// Branching and acceptance of the class representation.
    pub fn representation(self) -> (Branching, Acceptance) {
        match self {
            EffectClass::Recurrence => (Branching::Deterministic, Acceptance::Buchi),
            EffectClass::Safety | EffectClass::Guarantee => (Branching::Deterministic, Acceptance::Finite),
            EffectClass::Persistence => (Branching::Deterministic, Acceptance::CoBuchi),
        }
    }
}

impl fmt::Display for EffectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EffectClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "recurrence" => Ok(EffectClass::Recurrence),
            "safety" => Ok(EffectClass::Safety),
            "guarantee" => Ok(EffectClass::Guarantee),
            "persistence" => Ok(EffectClass::Persistence),
            other => Err(format!("unknown effect class `{other}`")),
        }
    }
}

/// Whether every state reachable from an accepting state is accepting.
pub fn has_absorbing_acceptance(a: &Automaton) -> bool {
    a.transitions()
        .all(|(q, _, t)| !a.is_accepting(q) || a.is_accepting(t))
}

/// Redirects every transition leaving an accepting state to a self-loop.
pub fn make_accepting_absorbing(a: &Automaton) -> Automaton {
    let mut b = Automaton::builder(
        a.alphabet().clone(),
        a.branching(),
        a.acceptance(),
        a.num_states(),
    );
    for &q in a.initial() {
        b.initial(q);
    }
    for q in 0..a.num_states() {
        if a.is_accepting(q) {
            b.accepting(q).transition_all(q, q);
        } else {
            for l in a.alphabet().letters() {
                for &t in a.successors(q, l) {
                    b.transition(q, l, t);
                }
            }
        }
    }
    b.build().expect("same shape as the input")
}

/// An effect `E` in its class representation, complete and, for prefix
/// classes, with absorbing accepting states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectSpec {
    class: EffectClass,
    automaton: Automaton,
}

impl EffectSpec {
    /// Checks the representation, completes the automaton and makes
    /// accepting states of prefix automata absorbing.
    pub fn new(class: EffectClass, automaton: Automaton) -> Result<Self, SynthesisError> {
        Self::build(class, automaton, true)
    }

    /// Like [`EffectSpec::new`] but rejects prefix automata whose accepting
    /// set is not already absorbing.
    pub fn strict(class: EffectClass, automaton: Automaton) -> Result<Self, SynthesisError> {
        Self::build(class, automaton, false)
    }

    fn build(class: EffectClass, automaton: Automaton, normalize: bool) -> Result<Self, SynthesisError> {
        if automaton.alphabet().props().is_none() {
            return Err(SynthesisError::InvalidEffect(
                "effects are read over propositional letters".into(),
            ));
        }
        let (branching, acceptance) = class.representation();
        if automaton.acceptance() != acceptance || !automaton.is_deterministic() {
            return Err(SynthesisError::InvalidEffect(format!(
                "{class} effects are {}, found {}",
                crate::automaton::kind_tag(branching, acceptance),
                automaton.kind_tag()
            )));
        }
        let mut a = complete(&automaton);
        if acceptance == Acceptance::Finite && !has_absorbing_acceptance(&a) {
            if !normalize {
                return Err(SynthesisError::NotAbsorbing);
            }
            a = make_accepting_absorbing(&a);
        }
        Ok(EffectSpec { class, automaton: a })
    }

    pub fn class(&self) -> EffectClass {
        self.class
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn num_states(&self) -> usize {
        self.automaton.num_states()
    }

    /// `σ ∈ E`.
    pub fn contains(&self, sigma: &LassoWord) -> bool {
        let a = &self.automaton;
        match self.class {
            EffectClass::Recurrence | EffectClass::Persistence => {
                a.accepts_lasso(sigma).expect("ω-automaton")
            }
            EffectClass::Safety => !a.accepts_some_prefix(sigma).expect("finite-word automaton"),
            EffectClass::Guarantee => a.accepts_some_prefix(sigma).expect("finite-word automaton"),
        }
    }

    /// A Büchi automaton for the complement of `E`.
    pub fn violation_nbw(&self) -> Automaton {
        let a = &self.automaton;
        match self.class {
            EffectClass::Recurrence => complement_dbw_to_nbw(a).expect("complete DBW"),
            // Absorbing bad states: visited infinitely often iff reached.
            EffectClass::Safety => a.with_acceptance(Acceptance::Buchi),
            EffectClass::Guarantee => flip(a).with_acceptance(Acceptance::Buchi),
            EffectClass::Persistence => a.with_acceptance(Acceptance::Buchi),
        }
    }

    /// A Büchi automaton for `E`.
    pub fn satisfaction_nbw(&self) -> Automaton {
        let a = &self.automaton;
        match self.class {
            EffectClass::Recurrence => a.clone(),
            EffectClass::Safety => flip(a).with_acceptance(Acceptance::Buchi),
            EffectClass::Guarantee => a.with_acceptance(Acceptance::Buchi),
            EffectClass::Persistence => {
                complement_dbw_to_nbw(&a.with_acceptance(Acceptance::Buchi)).expect("complete DCW")
            }
        }
    }
}

fn flip(a: &Automaton) -> Automaton {
    a.with_accepting(a.accepting_mask().iter().map(|&f| !f).collect())
}
