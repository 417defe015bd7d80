//! The subword languages `L_n` as causes of an effect over a trivial system.
//!
//! `L_n` holds the words over `{0,1,#}` in which every `w ∈ {0,1}^n` occurs
//! as a block starting at a position divisible by `n`.

use crate::alphabet::{Alphabet, AlphabetSpec, Letter};
use crate::automaton::{explore_deterministic, Acceptance};
use crate::effect::{EffectClass, EffectSpec};
use crate::error::GeneratorError;
use crate::system::System;
use crate::word::LassoWord;

use super::{Decoder, GeneratedInstance};

const MAX_N: usize = 3;

const I0: u32 = 1;
const I1: u32 = 2;
const I_HASH: u32 = 4;
const I_STAR: u32 = 8;
const O: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LnParams {
    pub n: usize,
    pub class: EffectClass,
}

impl LnParams {
    /// Input letter of symbol `0`, `1` or `#` (index 0, 1, 2).
    pub fn symbol_letter(&self, symbol: usize) -> Letter {
        Letter([I0, I1, I_HASH][symbol])
    }

    pub fn pad_letter(&self) -> Letter {
        Letter(I_STAR)
    }
}

/// Inputs `i0, i1, i_hash, i_star` and output `o`.
pub fn ln_spec() -> AlphabetSpec {
    AlphabetSpec::new(&["i0", "i1", "i_hash", "i_star"], &["o"]).expect("fixed names")
}

fn symbol_index(c: char) -> Option<usize> {
    match c {
        '0' => Some(0),
        '1' => Some(1),
        '#' => Some(2),
        _ => None,
    }
}

/// `Enc_I(σ)`: one singleton input per symbol followed by `{i_star}^ω`.
pub fn ln_encode(sigma: &str) -> Result<LassoWord, GeneratorError> {
    let stem = sigma
        .chars()
        .map(|c| {
            symbol_index(c)
                .map(|s| Letter([I0, I1, I_HASH][s]))
                .ok_or_else(|| GeneratorError::OutOfRange(format!("symbol `{c}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LassoWord::new(stem, vec![Letter(I_STAR)]).expect("loop nonempty"))
}

/// Whether `{0,1}^n ⊆ subword_n(σ)`, slicing `σ` into complete blocks at
/// multiples of `n`.
pub fn ln_membership_bruteforce(n: usize, sigma: &str) -> bool {
    if n == 0 {
        return true;
    }
    let chars: Vec<char> = sigma.chars().collect();
    let mut seen = vec![false; 1 << n];
    for block in chars.chunks_exact(n) {
        if block.iter().all(|&c| c == '0' || c == '1') {
            let w = block
                .iter()
                .fold(0usize, |acc, &c| acc << 1 | usize::from(c == '1'));
            seen[w] = true;
        }
    }
    seen.iter().all(|&s| s)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Monitor {
    /// `E1 ∪ E2 ∪ E3` has been witnessed.
    Witnessed,
    /// Safety representation only: `i_star` came before any witness.
    Bad,
    Live {
        /// Positions read, kept below `2n` once the warm-up is over.
        t: usize,
        /// Bit `p` holds `o` at the last position of phase `p`.
        history: u32,
        /// The block starting at the last multiple of `n` matches so far.
        alive: bool,
        seen_star: bool,
    },
}

fn monitor_step(n: usize, class: EffectClass, m: &Monitor, x: Letter) -> Monitor {
    let Monitor::Live {
        t,
        history,
        alive,
        seen_star,
    } = *m
    else {
        return m.clone();
    };
    let x = x.0;
    let phase = t % n;
    let o = x & O != 0;
    let mut witnessed = x & (I0 | I1 | I_HASH | I_STAR) == 0;
    if t >= n && (history >> phase & 1 != 0) != o {
        witnessed = true;
    }
    let mut alive = if phase == 0 { !seen_star } else { alive };
    let matches = if o {
        x & (I0 | I1) == I1
    } else {
        x & (I0 | I1) == I0
    };
    alive &= matches;
    if alive && phase == n - 1 {
        witnessed = true;
    }
    if witnessed {
        return Monitor::Witnessed;
    }
    if class == EffectClass::Safety && x & I_STAR != 0 {
        return Monitor::Bad;
    }
    let t = if t + 1 >= 2 * n { n + (t + 1) % n } else { t + 1 };
    Monitor::Live {
        t,
        history: history & !(1 << phase) | u32::from(o) << phase,
        alive,
        seen_star: seen_star || x & I_STAR != 0,
    }
}

/// Prefix automaton for `E = E1 ∪ E2 ∪ E3` with
/// - `E1`: some letter has no input,
/// - `E2`: `o` differs at some `k` and `k + n`,
/// - `E3`: from some multiple of `n` with no `i_star` before it, `n`
///   consecutive letters carry `i1 ∧ ¬i0` where `o` holds and `i0 ∧ ¬i1`
///   where it does not.
///
/// The guarantee form accepts the good prefixes of `E`. The safety form
/// accepts as bad the prefixes ending in the first `i_star` letter while no
/// part of `E` has been witnessed; it agrees with `E` on every trace similar
/// to an encoded word.
pub fn ln_effect(n: usize, class: EffectClass) -> Result<EffectSpec, GeneratorError> {
    if !(1..=MAX_N).contains(&n) {
        return Err(GeneratorError::OutOfRange(format!("n = {n}")));
    }
    let accepting = match class {
        EffectClass::Safety => Monitor::Bad,
        EffectClass::Guarantee => Monitor::Witnessed,
        _ => return Err(GeneratorError::OutOfRange(format!("representation {class}"))),
    };
    let init = Monitor::Live {
        t: 0,
        history: 0,
        alive: false,
        seen_star: false,
    };
    let a = explore_deterministic(
        Alphabet::Props(ln_spec()),
        Acceptance::Finite,
        init,
        |m, x| Some(monitor_step(n, class, m, x)),
        |m| *m == accepting,
    );
    Ok(EffectSpec::new(class, a)?)
}

/// The trivial system over `ln_spec()`, the trace `∅^ω` and the effect of
/// [`ln_effect`] in the requested representation.
pub fn gen_ln_instance(n: usize, class: EffectClass) -> Result<GeneratedInstance, GeneratorError> {
    let effect = ln_effect(n, class)?;
    Ok(GeneratedInstance {
        system: System::trivial_full(ln_spec()),
        trace: LassoWord::constant(Letter(0)),
        effect,
        decoder: Decoder::Ln(LnParams { n, class }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_lasso;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    /// Earliest position at which a part of `E1 ∪ E2 ∪ E3` is witnessed.
    fn earliest_witness(n: usize, w: &LassoWord) -> Option<usize> {
        let horizon = w.stem().len() + (w.cycle().len() + 2) * n;
        let at = |t: usize| w.letter(t).0;
        let e1 = (0..horizon).find(|&t| at(t) & 0xF == 0);
        let e2 = (n..horizon + n).find(|&t| (at(t) & O) != (at(t - n) & O));
        let e3 = (0..horizon)
            .step_by(n)
            .find(|&start| {
                (0..start).all(|l| at(l) & I_STAR == 0)
                    && (0..n).all(|j| {
                        let x = at(start + j);
                        let o = x & O != 0;
                        (x & I1 != 0) == o && (x & I0 != 0) == !o
                    })
            })
            .map(|start| start + n - 1);
        [e1, e2, e3].into_iter().flatten().min()
    }

    fn in_effect(n: usize, w: &LassoWord) -> bool {
        earliest_witness(n, w).is_some()
    }

    /// A witness no later than the first `i_star` letter, if there is one.
    fn in_safety_effect(n: usize, w: &LassoWord) -> bool {
        let horizon = w.stem().len() + w.cycle().len();
        match (0..horizon).find(|&t| w.letter(t).0 & I_STAR != 0) {
            None => true,
            Some(p) => earliest_witness(n, w).is_some_and(|t| t <= p),
        }
    }

    #[test]
    fn membership_examples() {
        assert!(ln_membership_bruteforce(1, "01"));
        assert!(!ln_membership_bruteforce(1, "00"));
        assert!(!ln_membership_bruteforce(1, ""));
        assert!(!ln_membership_bruteforce(2, "0011"));
        assert!(ln_membership_bruteforce(2, "00011011"));
        assert!(!ln_membership_bruteforce(2, "0#011011"));
        assert!(ln_membership_bruteforce(2, "1100#0011001"));
        assert!(!ln_membership_bruteforce(2, "1100#011100"));
    }

    #[test]
    fn encoding_pads_with_star() {
        let w = ln_encode("0#1").unwrap();
        assert_eq!(w.stem(), &[Letter(I0), Letter(I_HASH), Letter(I1)]);
        assert_eq!(w.cycle(), &[Letter(I_STAR)]);
        assert!(ln_encode("2").is_err());
    }

    #[test]
    fn guarantee_monitor_matches_definition() {
        let alphabet = Alphabet::Props(ln_spec());
        let mut rng = StdRng::seed_from_u64(11);
        for n in 1..=3 {
            let e = ln_effect(n, EffectClass::Guarantee).unwrap();
            for _ in 0..3000 {
                let w = random_lasso(&mut rng, &alphabet, 6, 3);
                assert_eq!(e.contains(&w), in_effect(n, &w), "n={n} {}", w.format(&alphabet));
            }
        }
    }

    #[test]
    fn safety_monitor_matches_definition() {
        // inputs pointwise below an encoded word, arbitrary outputs
        let mut rng = StdRng::seed_from_u64(5);
        use rand::Rng;
        for n in 1..=2 {
            let e = ln_effect(n, EffectClass::Safety).unwrap();
            for _ in 0..3000 {
                let len = rng.gen_range(0..6);
                let sigma: String = (0..len).map(|_| ['0', '1', '#'][rng.gen_range(0..3)]).collect();
                let enc = ln_encode(&sigma).unwrap();
                let stem_len = enc.stem().len() + rng.gen_range(0..3);
                let cycle_len = rng.gen_range(1..=2 * n);
                let choices: Vec<u32> = (0..stem_len + cycle_len).map(|_| rng.gen()).collect();
                let w = LassoWord::from_fn(stem_len, cycle_len, |t| {
                    let keep = if choices[t].is_multiple_of(8) {
                        0
                    } else {
                        enc.letter(t).0
                    };
                    Letter(keep | if choices[t] & 16 != 0 { O } else { 0 })
                });
                assert_eq!(e.contains(&w), in_safety_effect(n, &w), "n={n} sigma={sigma}");
            }
        }
    }

    #[test]
    fn effect_sizes_grow() {
        let sizes: Vec<usize> = (1..=3)
            .map(|n| ln_effect(n, EffectClass::Guarantee).unwrap().num_states())
            .collect();
        assert!(sizes.windows(2).all(|p| p[0] < p[1]), "{sizes:?}");
        assert!(ln_effect(0, EffectClass::Safety).is_err());
        assert!(ln_effect(4, EffectClass::Safety).is_err());
    }
}
