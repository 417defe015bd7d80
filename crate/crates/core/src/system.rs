//! Reactive systems, their traces, and the subset similarity relation.
//!
//! Inputs occupy the low bits of a letter (see [`AlphabetSpec`]), so a letter
//! over `2^I` has the same numeric value in the input-only alphabet and in
//! the full alphabet. Input letters are passed around in that form.

use std::collections::VecDeque;

use crate::alphabet::{Alphabet, AlphabetSpec, Letter};
use crate::automaton::{Acceptance, Automaton, Branching};
use crate::error::SystemError;
use crate::graph::{self, UNREACHED};
use crate::word::{common_shape, LassoWord};

/// A finite labelled transition system `(S, s0, I ∪ O, δ, l)` with
/// input-driven, possibly partial and nondeterministic transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    spec: AlphabetSpec,
    names: Vec<String>,
    initial: usize,
    labels: Vec<Letter>,
    /// Successor lists indexed by `s * 2^|I| + input`.
    delta: Vec<Vec<usize>>,
}

impl System {
    /// Builds a system from named states, output labels (letters of `spec`
    /// using only output propositions) and `(from, input, to)` transitions.
    pub fn new(
        spec: AlphabetSpec,
        names: Vec<String>,
        initial: usize,
        labels: Vec<Letter>,
        transitions: &[(usize, Letter, usize)],
    ) -> Result<Self, SystemError> {
        let n = names.len();
        if initial >= n || n == 0 {
            return Err(SystemError::InvalidState(initial));
        }
        if labels.len() != n {
            return Err(SystemError::InvalidState(labels.len().min(n)));
        }
        for (s, l) in labels.iter().enumerate() {
            if l.bits() & !spec.output_mask() != 0 {
                return Err(SystemError::LabelNotOutput(s));
            }
        }
        let k = spec.input_letter_count();
        let mut delta = vec![Vec::new(); n * k];
        for &(s, c, t) in transitions {
            if s >= n {
                return Err(SystemError::InvalidState(s));
            }
            if t >= n {
                return Err(SystemError::InvalidState(t));
            }
            if c.index() >= k {
                return Err(SystemError::AlphabetMismatch);
            }
            delta[s * k + c.index()].push(t);
        }
        for succ in &mut delta {
            succ.sort_unstable();
            succ.dedup();
        }
        Ok(System {
            spec,
            names,
            initial,
            labels,
            delta,
        })
    }

    /// States named `s0, s1, ...`.
    pub fn with_default_names(
        spec: AlphabetSpec,
        initial: usize,
        labels: Vec<Letter>,
        transitions: &[(usize, Letter, usize)],
    ) -> Result<Self, SystemError> {
        let names = (0..labels.len()).map(|i| format!("s{i}")).collect();
        System::new(spec, names, initial, labels, transitions)
    }

    /// The system producing every trace over `spec`: one state per output
    /// valuation, all connected on every input.
    pub fn trivial_full(spec: AlphabetSpec) -> Self {
        let outputs = 1usize << spec.outputs().len();
        let shift = spec.num_inputs();
        let labels: Vec<Letter> = (0..outputs).map(|v| Letter((v as u32) << shift)).collect();
        let mut transitions = Vec::new();
        for s in 0..outputs {
            for c in 0..spec.input_letter_count() {
                for t in 0..outputs {
                    transitions.push((s, Letter(c as u32), t));
                }
            }
        }
        System::with_default_names(spec, 0, labels, &transitions).expect("trivial system is well formed")
    }

    pub fn spec(&self) -> &AlphabetSpec {
        &self.spec
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, s: usize) -> Letter {
        self.labels[s]
    }

    /// `δ(s, input)`; `input` may carry output bits, which are ignored.
    pub fn successors(&self, s: usize, input: Letter) -> &[usize] {
        let c = self.spec.input_part(input).index();
        &self.delta[s * self.spec.input_letter_count() + c]
    }

    /// All `(from, input, to)` transitions in index order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        let k = self.spec.input_letter_count();
        self.delta
            .iter()
            .enumerate()
            .flat_map(move |(i, succ)| succ.iter().map(move |&t| (i / k, Letter((i % k) as u32), t)))
    }

    fn reachable_states(&self) -> Vec<bool> {
        let k = self.spec.input_letter_count();
        let adj: Vec<Vec<usize>> = (0..self.num_states())
            .map(|s| {
                let mut v: Vec<usize> = (0..k).flat_map(|c| self.delta[s * k + c].clone()).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        graph::reachable(&adj, [self.initial])
    }

    /// The first reachable state lacking a successor on some input, if any.
    pub fn first_blocking_state(&self) -> Option<usize> {
        let k = self.spec.input_letter_count();
        let reach = self.reachable_states();
        (0..self.num_states()).find(|&s| reach[s] && (0..k).any(|c| self.delta[s * k + c].is_empty()))
    }

    pub fn is_input_enabled(&self) -> bool {
        self.first_blocking_state().is_none()
    }

    /// Finds a lasso-shaped run witnessing that `word` is a trace.
    pub fn validate_trace(&self, word: &LassoWord) -> Result<ObservedTrace, SystemError> {
        let full = self.spec.letter_count();
        if word.stem().iter().chain(word.cycle()).any(|l| l.index() >= full) {
            return Err(SystemError::AlphabetMismatch);
        }
        let len = word.len();
        let node = |s: usize, p: usize| s * len + p;
        let mut adj = vec![Vec::new(); self.num_states() * len];
        for s in 0..self.num_states() {
            for p in 0..len {
                let l = word.letter(p);
                let out = self.spec.output_part(l);
                let np = word.next_position(p);
                for &t in self.successors(s, l) {
                    if self.labels[t] == out {
                        adj[node(s, p)].push(node(t, np));
                    }
                }
            }
        }
        let root = node(self.initial, 0);
        let sccs = graph::tarjan(&adj, [root]);
        let target = (0..adj.len())
            .find(|&v| sccs.component[v] != UNREACHED && sccs.is_nontrivial(&adj, sccs.component[v]));
        let Some(v) = target else {
            return Err(SystemError::NotATrace);
        };
        let comp = sccs.component[v];
        let stem = bfs_path(&adj, root, v, |_| true).expect("target reachable");
        let cycle = if adj[v].contains(&v) {
            vec![v]
        } else {
            let mut best: Option<Vec<usize>> = None;
            for &w in adj[v].iter().filter(|&&w| sccs.component[w] == comp) {
                let p = bfs_path(&adj, w, v, |x| sccs.component[x] == comp).expect("same component");
                if best.as_ref().is_none_or(|b| p.len() < b.len()) {
                    let mut c = vec![v];
                    c.extend(p.iter().take(p.len() - 1));
                    best = Some(c);
                }
            }
            best.expect("nontrivial component")
        };
        let to_state = |nodes: &[usize]| nodes.iter().map(|&x| x / len).collect::<Vec<_>>();
        let stem_nodes = &stem[..stem.len() - 1];
        Ok(ObservedTrace {
            word: word.clone(),
            run: Some(Run {
                stem: to_state(stem_nodes),
                cycle: to_state(&cycle),
            }),
        })
    }

    /// `traces(T)` as a Büchi automaton over `2^AP` with every state
    /// accepting: `s → s'` on `A ∪ l(s')` whenever `s' ∈ δ(s, A)`.
    pub fn as_safety_automaton(&self) -> Automaton {
        let alphabet = Alphabet::Props(self.spec.clone());
        let mut b = Automaton::builder(
            alphabet,
            Branching::Nondeterministic,
            Acceptance::Buchi,
            self.num_states(),
        );
        b.initial(self.initial);
        for s in 0..self.num_states() {
            b.accepting(s);
        }
        for (s, c, t) in self.transitions() {
            b.transition(s, c.union(self.labels[t]), t);
        }
        b.build().expect("system transitions are valid")
    }
}

/// Path of nodes from `from` to `to` (both included) through `allowed` nodes.
fn bfs_path(
    adj: &[Vec<usize>],
    from: usize,
    to: usize,
    allowed: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let mut parent = vec![UNREACHED; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![v];
            let mut x = v;
            while parent[x] != UNREACHED {
                x = parent[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for &w in &adj[v] {
            if !seen[w] && allowed(w) {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// State sequence `stem · cycle^ω` of a system run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Run {
    pub fn state(&self, t: usize) -> usize {
        if t < self.stem.len() {
            self.stem[t]
        } else {
            self.cycle[(t - self.stem.len()) % self.cycle.len()]
        }
    }
}

/// A lasso trace together with a run of the system producing it. The letter
/// at position `t` holds the inputs read from `run(t)` and the label of
/// `run(t + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservedTrace {
    pub word: LassoWord,
    pub run: Option<Run>,
}

impl ObservedTrace {
    pub fn inputs(&self, spec: &AlphabetSpec) -> LassoWord {
        self.word.inputs(spec)
    }
}

/// Input letters `c` with `obs|_I ∩ cand ⊆ c ⊆ obs|_I ∪ cand`, i.e. those
/// deviating from `obs` only where `cand` does. Sorted by value.
pub fn similar_letters(spec: &AlphabetSpec, obs: Letter, cand: Letter) -> Vec<Letter> {
    let o = spec.input_part(obs);
    let c = spec.input_part(cand);
    let lo = o.intersection(c).bits();
    let free = o.union(c).bits() & !lo;
    let mut out = Vec::with_capacity(1 << free.count_ones());
    let mut sub = 0u32;
    loop {
        out.push(Letter(lo | sub));
        if sub == free {
            break;
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
    out.sort_unstable();
    out
}

/// Whether `c` lies in the similarity interval of `(obs, cand)`.
#[inline]
pub fn is_similar(spec: &AlphabetSpec, obs: Letter, cand: Letter, c: Letter) -> bool {
    let o = spec.input_part(obs).bits();
    let r = spec.input_part(cand).bits();
    let c = spec.input_part(c).bits();
    (o & r) & !c == 0 && c & !(o | r) == 0
}

/// Deterministic Büchi automaton over `2^AP`, all states accepting, whose
/// language is `{σ : σ ≤_pi rho}`: at position `t` it reads any letter whose
/// input part is similar to `(pi(t), rho(t))`.
pub fn envelope_automaton(spec: &AlphabetSpec, pi: &LassoWord, rho: &LassoWord) -> Automaton {
    let (stem, cycle) = common_shape(&[pi, rho]);
    let n = stem + cycle;
    let next = |p: usize| if p + 1 < n { p + 1 } else { stem };
    let alphabet = Alphabet::Props(spec.clone());
    let mut b = Automaton::builder(alphabet.clone(), Branching::Deterministic, Acceptance::Buchi, n);
    b.initial(0);
    for p in 0..n {
        b.accepting(p);
        let (o, r) = (pi.letter(p), rho.letter(p));
        for l in alphabet.letters() {
            if is_similar(spec, o, r, l) {
                b.transition(p, l, next(p));
            }
        }
    }
    b.build().expect("envelope is deterministic")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_i_o() -> AlphabetSpec {
        AlphabetSpec::new(&["i"], &["o"]).unwrap()
    }

    #[test]
    fn similar_letters_interval() {
        let s = spec_i_o();
        assert_eq!(similar_letters(&s, Letter(1), Letter(1)), vec![Letter(1)]);
        assert_eq!(
            similar_letters(&s, Letter(3), Letter(0)),
            vec![Letter(0), Letter(1)]
        );
        let two = AlphabetSpec::inputs_only(&["i1", "i2"]).unwrap();
        assert_eq!(similar_letters(&two, Letter(1), Letter(2)).len(), 4);
        assert_eq!(
            similar_letters(&two, Letter(3), Letter(1)),
            vec![Letter(1), Letter(3)]
        );
    }

    #[test]
    fn trivial_full_system_shape() {
        let t = System::trivial_full(spec_i_o());
        assert_eq!(t.num_states(), 2);
        assert!(t.is_input_enabled());
        let w = LassoWord::new(vec![Letter(2)], vec![Letter(1), Letter(3)]).unwrap();
        assert!(t.validate_trace(&w).is_ok());
    }

    #[test]
    fn run_matches_word() {
        // s0 -i-> s1 (o), s1 -any-> s0, s0 -¬i-> s0
        let s = spec_i_o();
        let t = System::with_default_names(
            s.clone(),
            0,
            vec![Letter(0), Letter(2)],
            &[
                (0, Letter(1), 1),
                (0, Letter(0), 0),
                (1, Letter(0), 0),
                (1, Letter(1), 0),
            ],
        )
        .unwrap();
        let w = LassoWord::new(vec![Letter(0)], vec![Letter(3), Letter(1)]).unwrap();
        let obs = t.validate_trace(&w).unwrap();
        let run = obs.run.unwrap();
        for p in 0..8 {
            let (a, b) = (run.state(p), run.state(p + 1));
            assert!(t.successors(a, w.letter(p)).contains(&b));
            assert_eq!(t.label(b), s.output_part(w.letter(p)));
        }
        let bad = LassoWord::constant(Letter(2));
        assert_eq!(t.validate_trace(&bad), Err(SystemError::NotATrace));
    }

    #[test]
    fn envelope_of_identical_words_is_input_class() {
        let s = spec_i_o();
        let pi = LassoWord::new(vec![Letter(1)], vec![Letter(2)]).unwrap();
        let env = envelope_automaton(&s, &pi, &pi.inputs(&s));
        assert_eq!(env.num_states(), 2);
        let same = LassoWord::new(vec![Letter(3)], vec![Letter(0)]).unwrap();
        let other = LassoWord::new(vec![Letter(0)], vec![Letter(0)]).unwrap();
        assert!(env.accepts_lasso(&same).unwrap());
        assert!(!env.accepts_lasso(&other).unwrap());
    }
}
