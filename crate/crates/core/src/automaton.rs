//! Finite automata over finite and ultimately periodic words.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::alphabet::{Alphabet, Letter};
use crate::error::AutomatonError;
use crate::graph;
use crate::word::LassoWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branching {
    Deterministic,
    Nondeterministic,
    /// A word is accepted iff every run satisfies the acceptance condition.
    /// Runs that reach a state without successor are dropped, so they never
    /// cause rejection.
    Universal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Acceptance {
    /// Finite words; a run is accepting iff it ends in an accepting state.
    Finite,
    /// Infinitely many visits to accepting states.
    Buchi,
    /// Finitely many visits to accepting states.
    CoBuchi,
}

/// An automaton with transitions stored densely per `(state, letter)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    branching: Branching,
    acceptance: Acceptance,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    /// `offsets[q * |Σ| + l] .. offsets[q * |Σ| + l + 1]` indexes `targets`.
    offsets: Vec<usize>,
    targets: Vec<usize>,
    complete: bool,
}

pub struct AutomatonBuilder {
    alphabet: Alphabet,
    branching: Branching,
    acceptance: Acceptance,
    num_states: usize,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    edges: Vec<(usize, u32, usize)>,
    out_of_range: Option<usize>,
}

impl AutomatonBuilder {
    pub fn new(alphabet: Alphabet, branching: Branching, acceptance: Acceptance, num_states: usize) -> Self {
        AutomatonBuilder {
            alphabet,
            branching,
            acceptance,
            num_states,
            initial: Vec::new(),
            accepting: vec![false; num_states],
            edges: Vec::new(),
            out_of_range: None,
        }
    }

    pub fn initial(&mut self, q: usize) -> &mut Self {
        self.initial.push(q);
        self
    }

    pub fn accepting(&mut self, q: usize) -> &mut Self {
        if q < self.num_states {
            self.accepting[q] = true;
        } else {
            self.out_of_range.get_or_insert(q);
        }
        self
    }

    pub fn transition(&mut self, from: usize, letter: Letter, to: usize) -> &mut Self {
        self.edges.push((from, letter.0, to));
        self
    }

    /// Adds `from --l--> to` for every letter `l` of the alphabet.
    pub fn transition_all(&mut self, from: usize, to: usize) -> &mut Self {
        for l in 0..self.alphabet.size() as u32 {
            self.edges.push((from, l, to));
        }
        self
    }

    pub fn build(mut self) -> Result<Automaton, AutomatonError> {
        let n = self.num_states;
        let letters = self.alphabet.size();
        if let Some(q) = self.out_of_range {
            return Err(AutomatonError::InvalidState(q));
        }
        for &(p, l, q) in &self.edges {
            if p >= n {
                return Err(AutomatonError::InvalidState(p));
            }
            if q >= n {
                return Err(AutomatonError::InvalidState(q));
            }
            if l as usize >= letters {
                return Err(AutomatonError::InvalidLetter(l));
            }
        }
        for &q in &self.initial {
            if q >= n {
                return Err(AutomatonError::InvalidState(q));
            }
        }
        self.initial.sort_unstable();
        self.initial.dedup();
        self.edges.sort_unstable();
        self.edges.dedup();

        let mut offsets = vec![0usize; n * letters + 1];
        for &(p, l, _) in &self.edges {
            offsets[p * letters + l as usize + 1] += 1;
        }
        for i in 0..n * letters {
            offsets[i + 1] += offsets[i];
        }
        let targets: Vec<usize> = self.edges.iter().map(|&(_, _, q)| q).collect();
        let complete = (0..n * letters).all(|i| offsets[i + 1] > offsets[i]);

        let a = Automaton {
            alphabet: self.alphabet,
            branching: self.branching,
            acceptance: self.acceptance,
            initial: self.initial,
            accepting: self.accepting,
            offsets,
            targets,
            complete,
        };
        if a.branching == Branching::Deterministic {
            a.check_deterministic()?;
        }
        Ok(a)
    }
}

impl Automaton {
    pub fn builder(
        alphabet: Alphabet,
        branching: Branching,
        acceptance: Acceptance,
        num_states: usize,
    ) -> AutomatonBuilder {
        AutomatonBuilder::new(alphabet, branching, acceptance, num_states)
    }

    /// Deterministic automaton from a dense successor table
    /// (`table[q * |Σ| + l]`, `None` for a missing transition).
    pub fn from_table(
        alphabet: Alphabet,
        acceptance: Acceptance,
        initial: usize,
        accepting: Vec<bool>,
        table: &[Option<usize>],
    ) -> Result<Automaton, AutomatonError> {
        let n = accepting.len();
        let letters = alphabet.size();
        debug_assert_eq!(table.len(), n * letters);
        if initial >= n {
            return Err(AutomatonError::InvalidState(initial));
        }
        let mut offsets = Vec::with_capacity(n * letters + 1);
        let mut targets = Vec::with_capacity(n * letters);
        offsets.push(0);
        for entry in table {
            if let Some(q) = *entry {
                if q >= n {
                    return Err(AutomatonError::InvalidState(q));
                }
                targets.push(q);
            }
            offsets.push(targets.len());
        }
        let complete = targets.len() == n * letters;
        Ok(Automaton {
            alphabet,
            branching: Branching::Deterministic,
            acceptance,
            initial: vec![initial],
            accepting,
            offsets,
            targets,
            complete,
        })
    }

    fn check_deterministic(&self) -> Result<(), AutomatonError> {
        if self.initial.len() != 1 {
            return Err(AutomatonError::InitialNotSingleton);
        }
        let letters = self.alphabet.size();
        for q in 0..self.num_states() {
            for l in 0..letters {
                if self.successors(q, Letter(l as u32)).len() > 1 {
                    return Err(AutomatonError::NotDeterministic {
                        state: q,
                        letter: l as u32,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn branching(&self) -> Branching {
        self.branching
    }

    pub fn acceptance(&self) -> Acceptance {
        self.acceptance
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&q| self.accepting[q]).collect()
    }

    pub fn accepting_mask(&self) -> &[bool] {
        &self.accepting
    }

    /// Every `(state, letter)` has at least one successor.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_deterministic(&self) -> bool {
        self.branching == Branching::Deterministic
    }

    pub fn transition_count(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn successors(&self, q: usize, letter: Letter) -> &[usize] {
        let i = q * self.alphabet.size() + letter.index();
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Successor in a deterministic automaton.
    #[inline]
    pub fn step(&self, q: usize, letter: Letter) -> Option<usize> {
        self.successors(q, letter).first().copied()
    }

    /// All transitions as `(from, letter, to)`, sorted.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        let letters = self.alphabet.size();
        (0..self.num_states()).flat_map(move |q| {
            (0..letters as u32).flat_map(move |l| {
                self.successors(q, Letter(l))
                    .iter()
                    .map(move |&t| (q, Letter(l), t))
            })
        })
    }

    /// Distinct successors of `q` over all letters.
    pub fn post_all(&self, q: usize) -> Vec<usize> {
        let letters = self.alphabet.size();
        let lo = self.offsets[q * letters];
        let hi = self.offsets[(q + 1) * letters];
        let mut out: Vec<usize> = self.targets[lo..hi].to_vec();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The `(state → successors)` graph ignoring letters.
    pub fn graph(&self) -> Vec<Vec<usize>> {
        (0..self.num_states()).map(|q| self.post_all(q)).collect()
    }

    /// Same structure with a different accepting set.
    pub fn with_accepting(&self, accepting: Vec<bool>) -> Automaton {
        assert_eq!(accepting.len(), self.num_states());
        Automaton {
            accepting,
            ..self.clone()
        }
    }

    /// Same structure read with another acceptance condition.
    pub fn with_acceptance(&self, acceptance: Acceptance) -> Automaton {
        Automaton {
            acceptance,
            ..self.clone()
        }
    }

    /// Same structure read with another branching mode.
    pub fn with_branching(&self, branching: Branching) -> Result<Automaton, AutomatonError> {
        let a = Automaton {
            branching,
            ..self.clone()
        };
        if branching == Branching::Deterministic {
            a.check_deterministic()?;
        }
        Ok(a)
    }

    /// The automaton over `alphabet` that reads a letter `l` as the original
    /// letter `map[l]`.
    pub fn relabel(&self, alphabet: Alphabet, map: &[Letter]) -> Result<Automaton, AutomatonError> {
        if map.len() != alphabet.size() {
            return Err(AutomatonError::IncompatibleAlphabets);
        }
        let mut b = Automaton::builder(alphabet, self.branching, self.acceptance, self.num_states());
        for &q in &self.initial {
            b.initial(q);
        }
        for q in self.accepting_states() {
            b.accepting(q);
        }
        for q in 0..self.num_states() {
            for (l, &orig) in map.iter().enumerate() {
                if orig.index() >= self.alphabet.size() {
                    return Err(AutomatonError::InvalidLetter(orig.0));
                }
                for &t in self.successors(q, orig) {
                    b.transition(q, Letter(l as u32), t);
                }
            }
        }
        b.build()
    }

    /// Restriction to the states reachable from the initial ones, numbered in
    /// breadth-first order.
    pub fn trim(&self) -> Automaton {
        let letters = self.alphabet.size();
        let mut order: Vec<usize> = Vec::new();
        let mut index = vec![usize::MAX; self.num_states()];
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            if index[q] == usize::MAX {
                index[q] = order.len();
                order.push(q);
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for l in 0..letters as u32 {
                for &t in self.successors(q, Letter(l)) {
                    if index[t] == usize::MAX {
                        index[t] = order.len();
                        order.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut b = Automaton::builder(
            self.alphabet.clone(),
            self.branching,
            self.acceptance,
            order.len(),
        );
        for &q in &self.initial {
            b.initial(index[q]);
        }
        for (new, &old) in order.iter().enumerate() {
            if self.accepting[old] {
                b.accepting(new);
            }
            for l in 0..letters as u32 {
                for &t in self.successors(old, Letter(l)) {
                    b.transition(new, Letter(l), index[t]);
                }
            }
        }
        b.build().expect("trimming preserves validity")
    }

    /// Conventional kind tag such as `DBW`.
    pub fn kind_tag(&self) -> &'static str {
        kind_tag(self.branching, self.acceptance)
    }

    /// Membership of a finite word.
    pub fn accepts_finite(&self, word: &[Letter]) -> Result<bool, AutomatonError> {
        if self.acceptance != Acceptance::Finite {
            return Err(AutomatonError::WrongAcceptance {
                expected: Acceptance::Finite,
                found: self.acceptance,
            });
        }
        let mut current: Vec<usize> = self.initial.clone();
        for &l in word {
            if l.index() >= self.alphabet.size() {
                return Err(AutomatonError::InvalidLetter(l.0));
            }
            current = self.post_set(&current, l);
        }
        Ok(self.set_accepts(&current))
    }

    fn set_accepts(&self, set: &[usize]) -> bool {
        match self.branching {
            Branching::Universal => set.iter().all(|&q| self.accepting[q]),
            _ => set.iter().any(|&q| self.accepting[q]),
        }
    }

    /// Sorted union of successors of `set` on `letter`.
    pub fn post_set(&self, set: &[usize], letter: Letter) -> Vec<usize> {
        let mut out: Vec<usize> = set
            .iter()
            .flat_map(|&q| self.successors(q, letter).iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Membership of an ultimately periodic word for Büchi and co-Büchi
    /// automata, decided on the run graph over the word's positions.
    pub fn accepts_lasso(&self, word: &LassoWord) -> Result<bool, AutomatonError> {
        if self.acceptance == Acceptance::Finite {
            return Err(AutomatonError::WrongAcceptance {
                expected: Acceptance::Buchi,
                found: Acceptance::Finite,
            });
        }
        let positions = word.len();
        let n = self.num_states();
        let node = |q: usize, p: usize| q * positions + p;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n * positions];
        for q in 0..n {
            for p in 0..positions {
                let l = word.letter(p);
                if l.index() >= self.alphabet.size() {
                    return Err(AutomatonError::InvalidLetter(l.0));
                }
                let np = word.next_position(p);
                adj[node(q, p)] = self.successors(q, l).iter().map(|&t| node(t, np)).collect();
            }
        }
        let roots: Vec<usize> = self.initial.iter().map(|&q| node(q, 0)).collect();
        let acc = |v: usize| self.accepting[v / positions];
        let through_f = || graph::has_reachable_cycle_through(&adj, roots.iter().copied(), acc);
        let avoiding_f = || graph::has_reachable_cycle_within(&adj, roots.iter().copied(), |v| !acc(v));
        Ok(match (self.branching, self.acceptance) {
            (Branching::Universal, Acceptance::Buchi) => !avoiding_f(),
            (Branching::Universal, Acceptance::CoBuchi) => !through_f(),
            (_, Acceptance::Buchi) => through_f(),
            (_, Acceptance::CoBuchi) => avoiding_f(),
            (_, Acceptance::Finite) => unreachable!(),
        })
    }

    /// For finite-word automata read as prefix acceptors: whether some prefix
    /// of the ω-word (including the empty one) is accepted.
    pub fn accepts_some_prefix(&self, word: &LassoWord) -> Result<bool, AutomatonError> {
        if self.acceptance != Acceptance::Finite {
            return Err(AutomatonError::WrongAcceptance {
                expected: Acceptance::Finite,
                found: self.acceptance,
            });
        }
        let mut seen: HashSet<(Vec<usize>, usize)> = HashSet::new();
        let mut current = self.initial.clone();
        let mut p = 0usize;
        loop {
            if self.set_accepts(&current) {
                return Ok(true);
            }
            if !seen.insert((current.clone(), p)) {
                return Ok(false);
            }
            let l = word.letter(p);
            if l.index() >= self.alphabet.size() {
                return Err(AutomatonError::InvalidLetter(l.0));
            }
            current = self.post_set(&current, l);
            p = word.next_position(p);
        }
    }
}

pub fn kind_tag(branching: Branching, acceptance: Acceptance) -> &'static str {
    match (branching, acceptance) {
        (Branching::Deterministic, Acceptance::Finite) => "DFW",
        (Branching::Nondeterministic, Acceptance::Finite) => "NFW",
        (Branching::Universal, Acceptance::Finite) => "UFW",
        (Branching::Deterministic, Acceptance::Buchi) => "DBW",
        (Branching::Nondeterministic, Acceptance::Buchi) => "NBW",
        (Branching::Universal, Acceptance::Buchi) => "UBW",
        (Branching::Deterministic, Acceptance::CoBuchi) => "DCW",
        (Branching::Nondeterministic, Acceptance::CoBuchi) => "NCW",
        (Branching::Universal, Acceptance::CoBuchi) => "UCW",
    }
}

/// Reads a kind tag such as `DBW`, ignoring case.
pub fn parse_kind_tag(tag: &str) -> Option<(Branching, Acceptance)> {
    let tag = tag.to_ascii_uppercase();
    let b = match tag.chars().next()? {
        'D' => Branching::Deterministic,
        'N' => Branching::Nondeterministic,
        'U' => Branching::Universal,
        _ => return None,
    };
    let a = match &tag[1..] {
        "FW" => Acceptance::Finite,
        "BW" => Acceptance::Buchi,
        "CW" => Acceptance::CoBuchi,
        _ => return None,
    };
    Some((b, a))
}

/// Adds a rejecting sink so that every `(state, letter)` has a successor.
///
/// Universal automata are returned unchanged: a missing transition there
/// already means the branch is dropped and cannot cause rejection, which a
/// sink would change.
pub fn complete(a: &Automaton) -> Automaton {
    if a.branching == Branching::Universal || a.is_complete() {
        return a.clone();
    }
    let n = a.num_states();
    let letters = a.alphabet.size();
    let mut b = Automaton::builder(a.alphabet.clone(), a.branching, a.acceptance, n + 1);
    for &q in &a.initial {
        b.initial(q);
    }
    for q in a.accepting_states() {
        b.accepting(q);
    }
    // co-Büchi runs are rejected by visiting accepting states forever
    if a.acceptance == Acceptance::CoBuchi {
        b.accepting(n);
    }
    for q in 0..n {
        for l in 0..letters as u32 {
            let succ = a.successors(q, Letter(l));
            if succ.is_empty() {
                b.transition(q, Letter(l), n);
            }
            for &t in succ {
                b.transition(q, Letter(l), t);
            }
        }
    }
    b.transition_all(n, n);
    b.build().expect("completion preserves validity")
}

/// Builds the reachable part of a deterministic automaton from a successor
/// function on arbitrary hashable states, exploring letters in index order.
pub fn explore_deterministic<S, F, A>(
    alphabet: Alphabet,
    acceptance: Acceptance,
    initial: S,
    mut step: F,
    accepting: A,
) -> Automaton
where
    S: Clone + Eq + std::hash::Hash,
    F: FnMut(&S, Letter) -> Option<S>,
    A: Fn(&S) -> bool,
{
    let letters = alphabet.size();
    let mut index: HashMap<S, usize> = HashMap::new();
    let mut states: Vec<S> = vec![initial.clone()];
    index.insert(initial, 0);
    let mut table: Vec<Option<usize>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let s = states[i].clone();
        for l in 0..letters as u32 {
            let entry = step(&s, Letter(l)).map(|t| {
                if let Some(&j) = index.get(&t) {
                    j
                } else {
                    let j = states.len();
                    index.insert(t.clone(), j);
                    states.push(t);
                    j
                }
            });
            table.push(entry);
        }
        i += 1;
    }
    let acc = states.iter().map(&accepting).collect();
    Automaton::from_table(alphabet, acceptance, 0, acc, &table).expect("explored table is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::AlphabetSpec;

    fn props(names: &[&str]) -> Alphabet {
        Alphabet::Props(AlphabetSpec::inputs_only(names).unwrap())
    }

    /// DBW for "infinitely often o" over {o}.
    pub(crate) fn gf_o() -> Automaton {
        let mut b = Automaton::builder(props(&["o"]), Branching::Deterministic, Acceptance::Buchi, 2);
        b.initial(0).accepting(1);
        b.transition(0, Letter(0), 0)
            .transition(0, Letter(1), 1)
            .transition(1, Letter(0), 0)
            .transition(1, Letter(1), 1);
        b.build().unwrap()
    }

    #[test]
    fn lasso_membership_of_infinitely_often() {
        let a = gf_o();
        let w = LassoWord::constant(Letter(1));
        assert!(a.accepts_lasso(&w).unwrap());
        let w = LassoWord::new(vec![Letter(1)], vec![Letter(0)]).unwrap();
        assert!(!a.accepts_lasso(&w).unwrap());
        assert!(a.accepts_finite(&[Letter(1)]).is_err());
    }

    #[test]
    fn deterministic_rejects_branching() {
        let mut b = Automaton::builder(props(&["a"]), Branching::Deterministic, Acceptance::Finite, 2);
        b.initial(0)
            .transition(0, Letter(0), 0)
            .transition(0, Letter(0), 1);
        assert!(matches!(b.build(), Err(AutomatonError::NotDeterministic { .. })));
    }

    #[test]
    fn complete_adds_rejecting_sink() {
        let mut b = Automaton::builder(props(&["a"]), Branching::Deterministic, Acceptance::Finite, 1);
        b.initial(0);
        let a = b.build().unwrap();
        assert!(!a.is_complete());
        let c = complete(&a);
        assert_eq!(c.num_states(), 2);
        assert!(c.is_complete());
        assert!(!c.is_accepting(1));
        for w in [vec![], vec![Letter(0)], vec![Letter(1), Letter(0)]] {
            assert!(!c.accepts_finite(&w).unwrap());
        }
        // already complete: unchanged
        assert_eq!(complete(&c), c);
    }

    #[test]
    fn cobuchi_completion_sink_is_rejecting() {
        let mut b = Automaton::builder(props(&["a"]), Branching::Nondeterministic, Acceptance::CoBuchi, 1);
        b.initial(0).transition(0, Letter(1), 0);
        let a = b.build().unwrap();
        let c = complete(&a);
        let w = LassoWord::new(vec![Letter(1)], vec![Letter(0)]).unwrap();
        assert_eq!(a.accepts_lasso(&w).unwrap(), c.accepts_lasso(&w).unwrap());
        assert!(c.accepts_lasso(&LassoWord::constant(Letter(1))).unwrap());
    }

    #[test]
    fn universal_missing_transitions_are_vacuous() {
        // single non-accepting state, no transitions: every branch dies
        let mut b = Automaton::builder(props(&["a"]), Branching::Universal, Acceptance::Buchi, 1);
        b.initial(0);
        let a = b.build().unwrap();
        assert!(a.accepts_lasso(&LassoWord::constant(Letter(0))).unwrap());
        assert_eq!(complete(&a), a);
    }

    #[test]
    fn trim_drops_unreachable() {
        let mut b = Automaton::builder(props(&["a"]), Branching::Nondeterministic, Acceptance::Finite, 3);
        b.initial(0)
            .accepting(2)
            .transition(0, Letter(1), 0)
            .transition(2, Letter(1), 0);
        let t = b.build().unwrap().trim();
        assert_eq!(t.num_states(), 1);
    }

    #[test]
    fn kind_tags_round_trip() {
        for tag in ["DFW", "NFW", "UFW", "DBW", "NBW", "UBW", "DCW", "NCW"] {
            let (b, a) = parse_kind_tag(tag).unwrap();
            assert_eq!(kind_tag(b, a), tag);
        }
        assert!(parse_kind_tag("XBW").is_none());
    }
}
