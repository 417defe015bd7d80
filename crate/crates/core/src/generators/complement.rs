//! Reductions from complementation of nondeterministic automata to cause
//! synthesis. A run of the automaton is encoded in the inputs of a system
//! whose states are the automaton states plus a sink `s_top`.

use crate::alphabet::{Alphabet, AlphabetSpec, Letter};
use crate::automaton::{Acceptance, Automaton, Branching};
use crate::effect::{EffectClass, EffectSpec};
use crate::error::GeneratorError;
use crate::system::System;
use crate::word::LassoWord;

use super::{Decoder, GeneratedInstance};

const MAX_INPUTS: usize = 7;
const MAX_STATES: usize = 16;
const END_MARKER: &str = "#";

/// Injective encodings of letters and automaton states into input sets.
///
/// Inputs are ordered `i1..ik` followed by `j1..j_{j_count}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingScheme {
    pub symbols: Vec<String>,
    pub num_states: usize,
    pub k: usize,
    pub j_count: usize,
    /// `enc_letter(σ)` as a bit set over the i-bits, one per symbol.
    pub letter_codes: Vec<u32>,
    pub end_marker: Option<usize>,
}

fn binomial(n: usize, r: usize) -> usize {
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Bit sets of size `r` over `k` bits in lexicographic order of their
/// element lists.
fn combinations(k: usize, r: usize) -> Vec<u32> {
    fn go(start: usize, k: usize, r: usize, acc: u32, out: &mut Vec<u32>) {
        if r == 0 {
            out.push(acc);
            return;
        }
        for b in start..k {
            if k - b >= r {
                go(b + 1, k, r - 1, acc | 1 << b, out);
            }
        }
    }
    let mut out = Vec::new();
    go(0, k, r, 0, &mut out);
    out
}

fn ceil_log2(n: usize) -> usize {
    let mut j = 0;
    while (1usize << j) < n {
        j += 1;
    }
    j
}

impl EncodingScheme {
    pub fn new(
        symbols: Vec<String>,
        num_states: usize,
        end_marker: Option<usize>,
    ) -> Result<Self, GeneratorError> {
        let m = symbols.len();
        let mut k = 0;
        while binomial(k, k / 2) < m {
            k += 1;
        }
        if k == 0 {
            k = 2;
        }
        let j_count = ceil_log2(num_states);
        if k + j_count > MAX_INPUTS {
            return Err(GeneratorError::AlphabetTooLarge(m));
        }
        let letter_codes = combinations(k, k / 2).into_iter().take(m).collect();
        Ok(EncodingScheme {
            symbols,
            num_states,
            k,
            j_count,
            letter_codes,
            end_marker,
        })
    }

    pub fn input_names(&self) -> Vec<String> {
        (1..=self.k)
            .map(|t| format!("i{t}"))
            .chain((1..=self.j_count).map(|t| format!("j{t}")))
            .collect()
    }

    pub fn spec(&self) -> AlphabetSpec {
        AlphabetSpec::new(&self.input_names(), &["o".to_string()]).expect("generated names are valid")
    }

    pub fn letter_mask(&self) -> u32 {
        (1 << self.k) - 1
    }

    pub fn state_mask(&self) -> u32 {
        ((1 << self.j_count) - 1) << self.k
    }

    /// `enc_Q(q)`: binary expansion of `q` over the j-bits.
    pub fn encode_state(&self, q: usize) -> Letter {
        Letter((q as u32) << self.k)
    }

    /// `Enc_I(σ) = enc_letter(σ) ∪ {j1, ..}`.
    pub fn encode_symbol(&self, sigma: usize) -> Letter {
        Letter(self.letter_codes[sigma] | self.state_mask())
    }

    /// The symbol and state an input set encodes, if any.
    pub fn decode_input(&self, c: Letter) -> Option<(usize, usize)> {
        let sigma = self
            .letter_codes
            .iter()
            .position(|&code| code == c.0 & self.letter_mask())?;
        let q = ((c.0 & self.state_mask()) >> self.k) as usize;
        (q < self.num_states).then_some((sigma, q))
    }

    pub fn encode_word(&self, word: &LassoWord) -> LassoWord {
        word.map(|l| self.encode_symbol(l.index()))
    }
}

fn check_input(a: &Automaton) -> Result<(), GeneratorError> {
    if a.branching() == Branching::Universal {
        return Err(GeneratorError::WrongKind(a.kind_tag().to_string()));
    }
    if !matches!(a.alphabet(), Alphabet::Symbols(_)) {
        return Err(GeneratorError::WrongKind("expected a symbol alphabet".into()));
    }
    if a.initial().len() != 1 {
        return Err(GeneratorError::InitialNotSingleton);
    }
    if a.num_states() > MAX_STATES {
        return Err(GeneratorError::TooManyStates(a.num_states()));
    }
    Ok(())
}

/// System over the encoding: `δ(q, enc_Q(q') ∪ enc_letter(σ)) = q'` if
/// `q' ∈ Δ(q, σ)`, every other input leads to `s_top`. `o` labels the states
/// in `marked`.
fn encoding_system(a: &Automaton, scheme: &EncodingScheme, marked: impl Fn(usize) -> bool) -> System {
    let spec = scheme.spec();
    let n = a.num_states();
    let top = n;
    let o = Letter(1 << spec.num_inputs());
    let labels = (0..=n)
        .map(|q| if q < n && marked(q) { o } else { Letter(0) })
        .collect();
    let mut transitions = Vec::new();
    for q in 0..=n {
        for c in 0..spec.input_letter_count() as u32 {
            let target = match (q < n, scheme.decode_input(Letter(c))) {
                (true, Some((sigma, next)))
                    if sigma < a.alphabet().size()
                        && a.successors(q, Letter(sigma as u32)).contains(&next) =>
                {
                    next
                }
                _ => top,
            };
            transitions.push((q, Letter(c), target));
        }
    }
    let mut names: Vec<String> = (0..n).map(|q| format!("q{q}")).collect();
    names.push("s_top".into());
    System::new(spec, names, a.initial()[0], labels, &transitions).expect("valid by construction")
}

/// `□◇¬o` as a DBW, or `◇□¬o` as a DCW, over `{i.., j.., o}`.
fn o_effect(spec: &AlphabetSpec, class: EffectClass) -> EffectSpec {
    let o_bit = spec.num_inputs();
    let (branching, acceptance) = class.representation();
    let mut b = Automaton::builder(Alphabet::Props(spec.clone()), branching, acceptance, 2);
    // state 1: the last letter had `o`
    b.initial(0);
    b.accepting(if class == EffectClass::Recurrence { 0 } else { 1 });
    for q in 0..2 {
        for l in 0..spec.letter_count() as u32 {
            b.transition(q, Letter(l), usize::from(Letter(l).contains(o_bit)));
        }
    }
    EffectSpec::new(class, b.build().expect("valid by construction")).expect("deterministic")
}

/// Encodes complementation of an NBW or NCW. NCW inputs give a recurrence
/// effect `□◇¬o`; NBW inputs give the persistence effect `◇□¬o`, which only
/// the oracle evaluates.
pub fn gen_complementation_instance(a: &Automaton) -> Result<GeneratedInstance, GeneratorError> {
    check_input(a)?;
    let class = match a.acceptance() {
        Acceptance::CoBuchi => EffectClass::Recurrence,
        Acceptance::Buchi => EffectClass::Persistence,
        Acceptance::Finite => return Err(GeneratorError::WrongKind(a.kind_tag().to_string())),
    };
    let Alphabet::Symbols(symbols) = a.alphabet() else {
        unreachable!()
    };
    let scheme = EncodingScheme::new(symbols.clone(), a.num_states(), None)?;
    let system = match class {
        EffectClass::Recurrence => encoding_system(a, &scheme, |q| !a.is_accepting(q)),
        _ => encoding_system(a, &scheme, |q| a.is_accepting(q)),
    };
    let effect = o_effect(system.spec(), class);
    Ok(GeneratedInstance {
        system,
        trace: LassoWord::constant(Letter(0)),
        effect,
        decoder: Decoder::Complement(scheme),
    })
}

/// Encodes complementation of an NFW. The alphabet gains an end marker `#`
/// and the effect, a 4-state prefix automaton, checks whether the state
/// reached just before the first `#` is accepting. `class` selects the
/// safety or guarantee representation.
pub fn gen_nfw_instance(a: &Automaton, class: EffectClass) -> Result<GeneratedInstance, GeneratorError> {
    check_input(a)?;
    if a.acceptance() != Acceptance::Finite {
        return Err(GeneratorError::WrongKind(a.kind_tag().to_string()));
    }
    if !matches!(class, EffectClass::Safety | EffectClass::Guarantee) {
        return Err(GeneratorError::OutOfRange(format!("representation {class}")));
    }
    let Alphabet::Symbols(symbols) = a.alphabet() else {
        unreachable!()
    };
    if symbols.iter().any(|s| s == END_MARKER) {
        return Err(GeneratorError::WrongKind(format!(
            "alphabet already contains `{END_MARKER}`"
        )));
    }
    let mut extended = symbols.clone();
    extended.push(END_MARKER.to_string());
    let end = extended.len() - 1;
    let scheme = EncodingScheme::new(extended, a.num_states(), Some(end))?;
    let system = encoding_system(a, &scheme, |q| a.is_accepting(q));
    let spec = system.spec().clone();

    // 0, 1: last state rejecting / accepting; 2: safe; 3: bad
    const SAFE: usize = 2;
    const BAD: usize = 3;
    let o_bit = spec.num_inputs();
    let mut b = Automaton::builder(
        Alphabet::Props(spec.clone()),
        Branching::Deterministic,
        Acceptance::Finite,
        4,
    );
    b.initial(usize::from(a.is_accepting(a.initial()[0])));
    b.accepting(if class == EffectClass::Safety { BAD } else { SAFE });
    let end_code = scheme.letter_codes[end];
    for l in 0..spec.letter_count() as u32 {
        let x = Letter(l);
        let part = l & scheme.letter_mask();
        for p in 0..2 {
            let next = if part == end_code {
                if p == 1 {
                    BAD
                } else {
                    SAFE
                }
            } else if scheme.letter_codes[..end].contains(&part) {
                usize::from(x.contains(o_bit))
            } else {
                SAFE
            };
            b.transition(p, x, next);
        }
        b.transition(SAFE, x, SAFE).transition(BAD, x, BAD);
    }
    let effect = EffectSpec::new(class, b.build().expect("valid by construction")).expect("deterministic");
    Ok(GeneratedInstance {
        system,
        trace: LassoWord::constant(Letter(0)),
        effect,
        decoder: Decoder::FiniteComplement(scheme),
    })
}
