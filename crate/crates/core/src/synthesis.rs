//! Cause synthesis for recurrence, safety and guarantee effects.
//!
//! Each pipeline builds an automaton over pair letters `(ρ(t), π(t))` with
//! states `S × Q`, determinizes it, and then fixes the second component to
//! the observed trace by a product with its lasso emitter. The result reads
//! input sequences `ρ` only.

use std::fmt::Write as _;

use crate::alphabet::{Alphabet, AlphabetSpec, Letter};
use crate::automaton::{explore_deterministic, Acceptance, Automaton, Branching};
use crate::effect::{EffectClass, EffectSpec};
use crate::emptiness::is_empty_buchi;
use crate::error::SynthesisError;
use crate::graph;
use crate::ops::{self, pow_bound, ProductAcceptance};
use crate::system::{envelope_automaton, similar_letters, System};
use crate::word::LassoWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthesisOptions {
    /// Close the guarantee cause under forced acceptance so that it accepts
    /// exactly the good prefixes. Safety causes are always closed.
    pub exact_prefixes: bool,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions { exact_prefixes: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageStat {
    pub stage: &'static str,
    pub states: usize,
    pub bound: usize,
}

/// State counts of every pipeline stage with their theoretical bounds.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Stats {
    pub system_states: usize,
    pub effect_states: usize,
    pub trace_length: usize,
    pub stages: Vec<StageStat>,
}

impl Stats {
    fn record(&mut self, stage: &'static str, states: usize, bound: usize) -> Result<(), SynthesisError> {
        self.stages.push(StageStat { stage, states, bound });
        if states > bound {
            return Err(SynthesisError::BoundViolated {
                stage,
                count: states,
                bound,
            });
        }
        Ok(())
    }

    pub fn get(&self, stage: &str) -> Option<usize> {
        self.stages.iter().find(|s| s.stage == stage).map(|s| s.states)
    }

    pub fn final_states(&self) -> usize {
        self.stages.last().map_or(0, |s| s.states)
    }

    pub fn within_bounds(&self) -> bool {
        self.stages.iter().all(|s| s.states <= s.bound)
    }

    /// Line-oriented `key=value` report.
    pub fn report(&self) -> String {
        let mut out = String::new();
        writeln!(out, "system_states={}", self.system_states).unwrap();
        writeln!(out, "effect_states={}", self.effect_states).unwrap();
        writeln!(out, "trace_length={}", self.trace_length).unwrap();
        for s in &self.stages {
            writeln!(out, "stage.{}={} bound={}", s.stage, s.states, s.bound).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CauseResult {
    pub class: EffectClass,
    /// DBW for recurrence, bad-prefix DFW for safety, good-prefix DFW for
    /// guarantee; always over `2^I`.
    pub cause: Automaton,
    pub exists: bool,
    pub sat_holds: bool,
    pub stats: Stats,
}

impl CauseResult {
    pub fn contains(&self, rho: &LassoWord) -> bool {
        cause_contains(self.class, &self.cause, rho)
    }
}

/// Membership of `rho` in the ω-language induced by a cause automaton.
pub fn cause_contains(class: EffectClass, cause: &Automaton, rho: &LassoWord) -> bool {
    match class {
        EffectClass::Recurrence | EffectClass::Persistence => cause.accepts_lasso(rho).expect("ω-automaton"),
        EffectClass::Safety => !cause.accepts_some_prefix(rho).expect("finite-word automaton"),
        EffectClass::Guarantee => cause.accepts_some_prefix(rho).expect("finite-word automaton"),
    }
}

/// Whether the ω-language induced by a cause automaton is nonempty.
pub fn cause_language_nonempty(class: EffectClass, cause: &Automaton) -> bool {
    match class {
        EffectClass::Recurrence | EffectClass::Persistence => {
            !is_empty_buchi(cause).expect("deterministic Büchi").is_empty()
        }
        EffectClass::Safety => {
            let c = crate::automaton::complete(cause);
            graph::has_reachable_cycle_within(&c.graph(), c.initial().iter().copied(), |q| !c.is_accepting(q))
        }
        EffectClass::Guarantee => {
            let reach = graph::reachable(&cause.graph(), cause.initial().iter().copied());
            (0..cause.num_states()).any(|q| reach[q] && cause.is_accepting(q))
        }
    }
}

pub fn cause_exists(result: &CauseResult) -> bool {
    cause_language_nonempty(result.class, &result.cause)
}

fn check_instance(
    system: &System,
    pi: &LassoWord,
    effect: &EffectSpec,
    expected: EffectClass,
) -> Result<(), SynthesisError> {
    if effect.class() != expected {
        return Err(SynthesisError::ClassMismatch {
            expected: expected.name(),
            found: effect.class().name(),
        });
    }
    if effect.automaton().alphabet() != &Alphabet::Props(system.spec().clone()) {
        return Err(SynthesisError::AlphabetMismatch);
    }
    system.validate_trace(pi).map_err(|_| SynthesisError::NotATrace)?;
    Ok(())
}

/// The pair automaton shared by all pipelines: states `(s, q)` numbered
/// `s * |Q| + q`; on `(c, a)` it moves to every `(s', δ_E(q, x ∪ l(s')))`
/// with `x` similar to `(a, c)` and `s' ∈ δ(s, x)`.
fn build_pair(
    system: &System,
    effect: &EffectSpec,
    branching: Branching,
    acceptance: Acceptance,
) -> Result<Automaton, SynthesisError> {
    let spec = system.spec();
    let e = effect.automaton();
    let nq = e.num_states();
    let n = system.num_states() * nq;
    let mut b = Automaton::builder(Alphabet::Pairs(spec.clone()), branching, acceptance, n);
    b.initial(system.initial() * nq + e.initial()[0]);
    for s in 0..system.num_states() {
        for q in 0..nq {
            let u = s * nq + q;
            if e.is_accepting(q) {
                b.accepting(u);
            }
            for c in 0..spec.input_letter_count() as u32 {
                for a_in in 0..spec.input_letter_count() as u32 {
                    let mut targets: Vec<usize> = Vec::new();
                    for x in similar_letters(spec, Letter(a_in), Letter(c)) {
                        for &s2 in system.successors(s, x) {
                            let q2 = e
                                .step(q, x.union(system.label(s2)))
                                .expect("effect automaton is complete");
                            targets.push(s2 * nq + q2);
                        }
                    }
                    targets.sort_unstable();
                    targets.dedup();
                    for out in 0..(1u32 << spec.outputs().len()) {
                        let a = Letter(a_in | (out << spec.num_inputs()));
                        let l = Alphabet::pair_letter(spec, Letter(c), a);
                        for &t in &targets {
                            b.transition(u, l, t);
                        }
                    }
                }
            }
        }
    }
    Ok(b.build()?)
}

/// Universal Büchi automaton accepting `(ρ, π)` iff every `σ ≤_π ρ` of the
/// system satisfies the recurrence effect.
pub fn build_pair_ubw(system: &System, effect: &EffectSpec) -> Result<Automaton, SynthesisError> {
    require_class(effect, EffectClass::Recurrence)?;
    build_pair(system, effect, Branching::Universal, Acceptance::Buchi)
}

/// NFW accepting `(u, v)` iff some system path similar to `u` relative to
/// `v` produces a bad prefix.
pub fn build_pair_nfw(system: &System, effect: &EffectSpec) -> Result<Automaton, SynthesisError> {
    require_class(effect, EffectClass::Safety)?;
    build_pair(system, effect, Branching::Nondeterministic, Acceptance::Finite)
}

/// UFW accepting `(u, v)` iff every system path similar to `u` relative to
/// `v` that survives to the end has produced a good prefix.
pub fn build_pair_ufw(system: &System, effect: &EffectSpec) -> Result<Automaton, SynthesisError> {
    require_class(effect, EffectClass::Guarantee)?;
    build_pair(system, effect, Branching::Universal, Acceptance::Finite)
}

fn require_class(effect: &EffectSpec, expected: EffectClass) -> Result<(), SynthesisError> {
    if effect.class() != expected {
        return Err(SynthesisError::ClassMismatch {
            expected: expected.name(),
            found: effect.class().name(),
        });
    }
    Ok(())
}

/// Product of a deterministic pair automaton with the emitter of `pi`:
/// states `(u, position)`, reading `c` as the pair letter `(c, pi(position))`.
pub fn combine_with_trace(
    pair: &Automaton,
    spec: &AlphabetSpec,
    pi: &LassoWord,
) -> Result<Automaton, SynthesisError> {
    if pair.alphabet() != &Alphabet::Pairs(spec.clone()) {
        return Err(SynthesisError::AlphabetMismatch);
    }
    if !pair.is_deterministic() {
        return Err(SynthesisError::Automaton(
            crate::error::AutomatonError::WrongBranching {
                expected: Branching::Deterministic,
                found: pair.branching(),
            },
        ));
    }
    Ok(explore_deterministic(
        Alphabet::Props(spec.input_spec()),
        pair.acceptance(),
        (pair.initial()[0], 0usize),
        |&(u, p), c| {
            pair.step(u, Alphabet::pair_letter(spec, c, pi.letter(p)))
                .map(|u2| (u2, pi.next_position(p)))
        },
        |&(u, _)| pair.is_accepting(u),
    ))
}

/// Additionally marks accepting every state all of whose infinite paths
/// reach an accepting state.
pub fn forced_acceptance_closure(a: &Automaton) -> Result<Automaton, SynthesisError> {
    use crate::error::AutomatonError;
    if a.acceptance() != Acceptance::Finite {
        return Err(AutomatonError::WrongAcceptance {
            expected: Acceptance::Finite,
            found: a.acceptance(),
        }
        .into());
    }
    if !a.is_deterministic() {
        return Err(AutomatonError::WrongBranching {
            expected: Branching::Deterministic,
            found: a.branching(),
        }
        .into());
    }
    if !a.is_complete() {
        return Err(AutomatonError::Incomplete.into());
    }
    // A state escapes iff it reaches a cycle of non-accepting states
    // through non-accepting states.
    let n = a.num_states();
    let adj = a.graph();
    let restricted: Vec<Vec<usize>> = (0..n)
        .map(|q| {
            if a.is_accepting(q) {
                Vec::new()
            } else {
                adj[q].iter().copied().filter(|&t| !a.is_accepting(t)).collect()
            }
        })
        .collect();
    let sccs = graph::tarjan(&restricted, 0..n);
    let mut escapes = vec![false; n];
    let mut reverse = vec![Vec::new(); n];
    for (q, succ) in restricted.iter().enumerate() {
        for &t in succ {
            reverse[t].push(q);
        }
    }
    let mut stack: Vec<usize> = (0..n)
        .filter(|&q| !a.is_accepting(q) && sccs.is_nontrivial(&restricted, sccs.component[q]))
        .collect();
    for &q in &stack {
        escapes[q] = true;
    }
    while let Some(t) = stack.pop() {
        for &q in &reverse[t] {
            if !escapes[q] {
                escapes[q] = true;
                stack.push(q);
            }
        }
    }
    Ok(a.with_accepting(escapes.iter().map(|&e| !e).collect()))
}

fn new_stats(system: &System, effect: &EffectSpec, pi: &LassoWord) -> Stats {
    Stats {
        system_states: system.num_states(),
        effect_states: effect.num_states(),
        trace_length: pi.len(),
        stages: Vec::new(),
    }
}

pub fn synthesize_recurrence(
    system: &System,
    pi: &LassoWord,
    effect: &EffectSpec,
) -> Result<CauseResult, SynthesisError> {
    check_instance(system, pi, effect, EffectClass::Recurrence)?;
    let mut stats = new_stats(system, effect, pi);
    let n = system.num_states() * effect.num_states();
    let ubw = build_pair_ubw(system, effect)?;
    stats.record("pair_ubw", ubw.num_states(), n)?;
    let dbw = ops::breakpoint_ubw_to_dbw(&ubw)?;
    stats.record("breakpoint_dbw", dbw.num_states(), pow_bound(3, n))?;
    let cause = combine_with_trace(&dbw, system.spec(), pi)?;
    stats.record(
        "cause",
        cause.num_states(),
        final_bound(pi, 3, n, dbw.num_states()),
    )?;
    finish(system, pi, effect, EffectClass::Recurrence, cause, stats)
}

/// Requires every reachable system state to have a successor on every
/// input: with blocking states the cause need not be a safety property.
pub fn synthesize_safety(
    system: &System,
    pi: &LassoWord,
    effect: &EffectSpec,
) -> Result<CauseResult, SynthesisError> {
    check_instance(system, pi, effect, EffectClass::Safety)?;
    if let Some(s) = system.first_blocking_state() {
        return Err(SynthesisError::NotInputEnabled(s));
    }
    let mut stats = new_stats(system, effect, pi);
    let n = system.num_states() * effect.num_states();
    let nfw = build_pair_nfw(system, effect)?;
    stats.record("pair_nfw", nfw.num_states(), n)?;
    let dfw = ops::determinize_nfw(&nfw)?;
    stats.record("subset_dfw", dfw.num_states(), pow_bound(2, n))?;
    let combined = combine_with_trace(&dfw, system.spec(), pi)?;
    stats.record(
        "combined",
        combined.num_states(),
        final_bound(pi, 2, n, dfw.num_states()),
    )?;
    let cause = forced_acceptance_closure(&combined)?;
    stats.record(
        "cause",
        cause.num_states(),
        final_bound(pi, 2, n, dfw.num_states()),
    )?;
    finish(system, pi, effect, EffectClass::Safety, cause, stats)
}

pub fn synthesize_guarantee(
    system: &System,
    pi: &LassoWord,
    effect: &EffectSpec,
    options: SynthesisOptions,
) -> Result<CauseResult, SynthesisError> {
    check_instance(system, pi, effect, EffectClass::Guarantee)?;
    let mut stats = new_stats(system, effect, pi);
    let n = system.num_states() * effect.num_states();
    let ufw = build_pair_ufw(system, effect)?;
    stats.record("pair_ufw", ufw.num_states(), n)?;
    let dfw = ops::determinize_ufw(&ufw)?;
    stats.record("subset_dfw", dfw.num_states(), pow_bound(2, n))?;
    let combined = combine_with_trace(&dfw, system.spec(), pi)?;
    stats.record(
        "combined",
        combined.num_states(),
        final_bound(pi, 2, n, dfw.num_states()),
    )?;
    let cause = if options.exact_prefixes {
        forced_acceptance_closure(&combined)?
    } else {
        combined
    };
    stats.record(
        "cause",
        cause.num_states(),
        final_bound(pi, 2, n, dfw.num_states()),
    )?;
    finish(system, pi, effect, EffectClass::Guarantee, cause, stats)
}

/// Dispatches on the effect class.
pub fn synthesize(
    system: &System,
    pi: &LassoWord,
    effect: &EffectSpec,
    options: SynthesisOptions,
) -> Result<CauseResult, SynthesisError> {
    match effect.class() {
        EffectClass::Recurrence => synthesize_recurrence(system, pi, effect),
        EffectClass::Safety => synthesize_safety(system, pi, effect),
        EffectClass::Guarantee => synthesize_guarantee(system, pi, effect, options),
        EffectClass::Persistence => Err(SynthesisError::InvalidEffect(
            "persistence effects have no synthesis pipeline".into(),
        )),
    }
}

/// `|π| · min(base^n, prior)`: the final stage never exceeds the trace
/// length times the determinized stage.
fn final_bound(pi: &LassoWord, base: usize, n: usize, prior: usize) -> usize {
    pi.len().saturating_mul(pow_bound(base, n).min(prior))
}

fn finish(
    system: &System,
    pi: &LassoWord,
    effect: &EffectSpec,
    class: EffectClass,
    cause: Automaton,
    stats: Stats,
) -> Result<CauseResult, SynthesisError> {
    let exists = cause_language_nonempty(class, &cause);
    let sat_holds = verify_sat(system, pi, effect, class, &cause);
    Ok(CauseResult {
        class,
        cause,
        exists,
        sat_holds,
        stats,
    })
}

/// The SAT condition: every trace input-equivalent to `pi` satisfies the
/// effect, and `pi|_I` belongs to the cause.
pub fn verify_sat(
    system: &System,
    pi: &LassoWord,
    effect: &EffectSpec,
    class: EffectClass,
    cause: &Automaton,
) -> bool {
    let spec = system.spec();
    let pi_inputs = pi.inputs(spec);
    let class_env = envelope_automaton(spec, pi, &pi_inputs);
    let traces = system.as_safety_automaton();
    let safe = ops::product(&class_env, &traces, ProductAcceptance::Left).expect("same alphabet");
    let bad = ops::product(&effect.violation_nbw(), &safe, ProductAcceptance::Left).expect("same alphabet");
    let all_in_effect = is_empty_buchi(&bad).expect("nondeterministic Büchi").is_empty();
    all_in_effect && cause_contains(class, cause, &pi_inputs)
}
