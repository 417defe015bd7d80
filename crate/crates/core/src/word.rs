//! Ultimately periodic words `stem · cycle^ω`.

use thiserror::Error;

use crate::alphabet::{Alphabet, AlphabetSpec, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the loop of a lasso word must be nonempty")]
pub struct EmptyLoop;

/// The ω-word `stem · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoWord {
    stem: Vec<Letter>,
    cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(stem: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self, EmptyLoop> {
        if cycle.is_empty() {
            return Err(EmptyLoop);
        }
        Ok(LassoWord { stem, cycle })
    }

    /// The constant word `letter^ω`.
    pub fn constant(letter: Letter) -> Self {
        LassoWord {
            stem: Vec::new(),
            cycle: vec![letter],
        }
    }

    /// Builds a lasso with the given shape whose letter at position `t` is `f(t)`.
    pub fn from_fn(stem_len: usize, cycle_len: usize, f: impl Fn(usize) -> Letter) -> Self {
        assert!(cycle_len > 0, "lasso loop must be nonempty");
        LassoWord {
            stem: (0..stem_len).map(&f).collect(),
            cycle: (stem_len..stem_len + cycle_len).map(&f).collect(),
        }
    }

    pub fn stem(&self) -> &[Letter] {
        &self.stem
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    /// Number of distinct positions, `|stem| + |loop|`.
    pub fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn letter(&self, t: usize) -> Letter {
        if t < self.stem.len() {
            self.stem[t]
        } else {
            self.cycle[(t - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Successor of a position in `0..len()`, wrapping from the last loop
    /// position back to the start of the loop.
    #[inline]
    pub fn next_position(&self, p: usize) -> usize {
        if p + 1 < self.len() {
            p + 1
        } else {
            self.stem.len()
        }
    }

    pub fn map(&self, f: impl Fn(Letter) -> Letter) -> Self {
        LassoWord {
            stem: self.stem.iter().map(|&l| f(l)).collect(),
            cycle: self.cycle.iter().map(|&l| f(l)).collect(),
        }
    }

    /// Restriction to the input propositions, `w|_I`.
    pub fn inputs(&self, spec: &AlphabetSpec) -> Self {
        self.map(|l| spec.input_part(l))
    }

    /// The same ω-word with the loop repeated `times` times.
    pub fn unroll(&self, times: usize) -> Self {
        let times = times.max(1);
        LassoWord {
            stem: self.stem.clone(),
            cycle: self.cycle.repeat(times),
        }
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Vec<Letter> {
        (0..n).map(|t| self.letter(t)).collect()
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        let fmt = |ls: &[Letter]| {
            ls.iter()
                .map(|&l| alphabet.format_letter(l))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let stem = fmt(&self.stem);
        if stem.is_empty() {
            format!("| {}", fmt(&self.cycle))
        } else {
            format!("{} | {}", stem, fmt(&self.cycle))
        }
    }
}

/// Shape `(stem, loop)` on which all given lassos are simultaneously periodic.
pub fn common_shape(words: &[&LassoWord]) -> (usize, usize) {
    let stem = words.iter().map(|w| w.stem.len()).max().unwrap_or(0);
    let cycle = words.iter().fold(1, |acc, w| lcm(acc, w.cycle.len()));
    (stem, cycle)
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// The alphabet of zipped traces: every proposition `p` of `spec` appears as
/// `p^0`, `p^1` and `p^2`.
pub fn zipped_spec(spec: &AlphabetSpec) -> AlphabetSpec {
    let tag = |names: &[String]| -> Vec<String> {
        (0..3)
            .flat_map(|k| names.iter().map(move |n| format!("{n}^{k}")))
            .collect()
    };
    AlphabetSpec::new(&tag(spec.inputs()), &tag(spec.outputs()))
        .expect("tagged names of a valid alphabet are valid")
}

/// Position-wise disjoint union of three traces, with propositions of the
/// `k`-th trace renamed to `p^k`.
pub fn zip3(spec: &AlphabetSpec, a: &LassoWord, b: &LassoWord, c: &LassoWord) -> LassoWord {
    let zipped = zipped_spec(spec);
    let targets: Vec<[usize; 3]> = spec
        .aps()
        .iter()
        .map(|ap| {
            let mut t = [0; 3];
            for (k, slot) in t.iter_mut().enumerate() {
                *slot = zipped.index_of(&format!("{ap}^{k}")).unwrap();
            }
            t
        })
        .collect();
    let (stem, cycle) = common_shape(&[a, b, c]);
    LassoWord::from_fn(stem, cycle, |t| {
        let mut bits = 0u32;
        for (k, w) in [a, b, c].into_iter().enumerate() {
            let l = w.letter(t);
            for (i, tgt) in targets.iter().enumerate() {
                if l.contains(i) {
                    bits |= 1 << tgt[k];
                }
            }
        }
        Letter(bits)
    })
}

/// Projection of a zipped trace onto the copy tagged `tag`.
pub fn unzip(spec: &AlphabetSpec, zipped: &LassoWord, tag: usize) -> LassoWord {
    let zspec = zipped_spec(spec);
    let sources: Vec<usize> = spec
        .aps()
        .iter()
        .map(|ap| zspec.index_of(&format!("{ap}^{tag}")).unwrap())
        .collect();
    zipped.map(|l| {
        let mut bits = 0u32;
        for (i, &src) in sources.iter().enumerate() {
            if l.contains(src) {
                bits |= 1 << i;
            }
        }
        Letter(bits)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> AlphabetSpec {
        AlphabetSpec::new(&["i"], &["o"]).unwrap()
    }

    #[test]
    fn letter_follows_loop() {
        let w = LassoWord::new(vec![Letter(1)], vec![Letter(2), Letter(3)]).unwrap();
        let got: Vec<u32> = (0..6).map(|t| w.letter(t).0).collect();
        assert_eq!(got, vec![1, 2, 3, 2, 3, 2]);
        assert_eq!(w.next_position(2), 1);
        assert!(LassoWord::new(vec![], vec![]).is_err());
    }

    #[test]
    fn zip_of_identical_words_copies_each_letter() {
        let s = spec();
        let w = LassoWord::new(vec![Letter(1)], vec![Letter(3)]).unwrap();
        let z = zip3(&s, &w, &w, &w);
        let zs = zipped_spec(&s);
        for t in 0..4 {
            let names = zs.names_of(z.letter(t));
            let expected: Vec<String> = s
                .names_of(w.letter(t))
                .iter()
                .flat_map(|n| (0..3).map(move |k| format!("{n}^{k}")))
                .collect();
            let mut e: Vec<&str> = expected.iter().map(String::as_str).collect();
            let mut n = names.clone();
            e.sort();
            n.sort();
            assert_eq!(n, e);
        }
    }

    #[test]
    fn zip_aligns_loops_to_lcm() {
        let s = spec();
        let a = LassoWord::new(vec![], vec![Letter(0), Letter(1)]).unwrap();
        let b = LassoWord::new(vec![], vec![Letter(0), Letter(1), Letter(2)]).unwrap();
        let z = zip3(&s, &a, &b, &a);
        assert_eq!(z.cycle().len(), 6);
        let back = unzip(&s, &z, 1);
        for t in 0..12 {
            assert_eq!(back.letter(t), b.letter(t));
        }
    }
}
