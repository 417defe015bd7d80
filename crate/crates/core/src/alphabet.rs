//! Atomic propositions, letters and the alphabets automata are defined over.
//!
//! A [`Letter`] is an index into an [`Alphabet`]. For propositional alphabets
//! the index is the membership bit vector over the declared propositions, with
//! inputs occupying the low bits. Symbol alphabets index a list of names, and
//! pair alphabets combine an input letter with a full letter.

use std::collections::HashSet;
use std::fmt;

use crate::error::AlphabetError;

/// Upper bound on the number of atomic propositions of a single alphabet.
pub const MAX_APS: usize = 16;

/// A letter, i.e. an index into an alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Letter(pub u32);

impl Letter {
    pub const EMPTY: Letter = Letter(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn contains(self, bit: usize) -> bool {
        self.0 >> bit & 1 == 1
    }

    #[inline]
    pub fn is_subset_of(self, other: Letter) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn union(self, other: Letter) -> Letter {
        Letter(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Letter) -> Letter {
        Letter(self.0 & other.0)
    }
}

/// Declared atomic propositions split into inputs and outputs.
///
/// Propositions are stored inputs first, so the input part of a letter is
/// simply its low bits and a letter over `2^I` is numerically a letter over
/// `2^AP` without outputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlphabetSpec {
    aps: Vec<String>,
    inputs: usize,
}

impl AlphabetSpec {
    pub fn new<S: AsRef<str>>(inputs: &[S], outputs: &[S]) -> Result<Self, AlphabetError> {
        let aps: Vec<String> = inputs
            .iter()
            .chain(outputs.iter())
            .map(|s| s.as_ref().to_string())
            .collect();
        if aps.len() > MAX_APS {
            return Err(AlphabetError::TooManyPropositions(aps.len()));
        }
        let mut seen = HashSet::new();
        for ap in &aps {
            if ap.is_empty() || !is_identifier(ap) {
                return Err(AlphabetError::InvalidName(ap.clone()));
            }
            if !seen.insert(ap.as_str()) {
                return Err(AlphabetError::DuplicateProposition(ap.clone()));
            }
        }
        Ok(AlphabetSpec {
            aps,
            inputs: inputs.len(),
        })
    }

    /// An alphabet whose propositions are all inputs.
    pub fn inputs_only<S: AsRef<str>>(aps: &[S]) -> Result<Self, AlphabetError> {
        Self::new(aps, &[] as &[S])
    }

    pub fn aps(&self) -> &[String] {
        &self.aps
    }

    pub fn inputs(&self) -> &[String] {
        &self.aps[..self.inputs]
    }

    pub fn outputs(&self) -> &[String] {
        &self.aps[self.inputs..]
    }

    pub fn len(&self) -> usize {
        self.aps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.aps.is_empty()
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs
    }

    pub fn letter_count(&self) -> usize {
        1 << self.aps.len()
    }

    pub fn input_letter_count(&self) -> usize {
        1 << self.inputs
    }

    pub fn input_mask(&self) -> u32 {
        (1u32 << self.inputs) - 1
    }

    pub fn output_mask(&self) -> u32 {
        ((1u32 << self.aps.len()) - 1) & !self.input_mask()
    }

    /// The alphabet `2^I` of input letters.
    pub fn input_spec(&self) -> AlphabetSpec {
        AlphabetSpec {
            aps: self.inputs().to_vec(),
            inputs: self.inputs,
        }
    }

    #[inline]
    pub fn input_part(&self, letter: Letter) -> Letter {
        Letter(letter.0 & self.input_mask())
    }

    #[inline]
    pub fn output_part(&self, letter: Letter) -> Letter {
        Letter(letter.0 & self.output_mask())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.aps.iter().position(|ap| ap == name)
    }

    pub fn letter_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Letter, AlphabetError> {
        let mut bits = 0u32;
        for name in names {
            let name = name.as_ref();
            let idx = self
                .index_of(name)
                .ok_or_else(|| AlphabetError::UnknownProposition(name.to_string()))?;
            bits |= 1 << idx;
        }
        Ok(Letter(bits))
    }

    pub fn names_of(&self, letter: Letter) -> Vec<&str> {
        self.aps
            .iter()
            .enumerate()
            .filter(|(i, _)| letter.contains(*i))
            .map(|(_, ap)| ap.as_str())
            .collect()
    }

    /// Renders a letter as `{a,b}`.
    pub fn format_letter(&self, letter: Letter) -> String {
        format!("{{{}}}", self.names_of(letter).join(","))
    }

    /// Maps each letter of `self` to the letter of `other` with the same true propositions.
    ///
    /// Both alphabets must declare the same set of names.
    pub fn translation_to(&self, other: &AlphabetSpec) -> Result<Vec<Letter>, AlphabetError> {
        if self.len() != other.len() {
            return Err(AlphabetError::Mismatch);
        }
        let mut positions = Vec::with_capacity(self.len());
        for ap in &self.aps {
            positions.push(other.index_of(ap).ok_or(AlphabetError::Mismatch)?);
        }
        Ok((0..self.letter_count() as u32)
            .map(|bits| {
                let mut out = 0u32;
                for (i, &pos) in positions.iter().enumerate() {
                    if bits >> i & 1 == 1 {
                        out |= 1 << pos;
                    }
                }
                Letter(out)
            })
            .collect())
    }

    pub fn same_names(&self, other: &AlphabetSpec) -> bool {
        self.len() == other.len() && self.aps.iter().all(|ap| other.index_of(ap).is_some())
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '^' || c == '.')
}

/// The letter set an automaton reads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// `2^AP` for the given propositions.
    Props(AlphabetSpec),
    /// An explicit list of symbols.
    Symbols(Vec<String>),
    /// Pairs `(c, a)` of an input letter `c` over `2^I` and a full letter `a`
    /// over `2^AP`, indexed as `c * |2^AP| + a`.
    Pairs(AlphabetSpec),
}

impl Alphabet {
    pub fn symbols<S: AsRef<str>>(names: &[S]) -> Result<Self, AlphabetError> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if n.is_empty() || n.contains(char::is_whitespace) || n.contains(['{', '}', ',', '|']) {
                return Err(AlphabetError::InvalidName(n.to_string()));
            }
            if !seen.insert(n.to_string()) {
                return Err(AlphabetError::DuplicateProposition(n.to_string()));
            }
            out.push(n.to_string());
        }
        if out.is_empty() {
            return Err(AlphabetError::Empty);
        }
        Ok(Alphabet::Symbols(out))
    }

    pub fn size(&self) -> usize {
        match self {
            Alphabet::Props(spec) => spec.letter_count(),
            Alphabet::Symbols(names) => names.len(),
            Alphabet::Pairs(spec) => spec.input_letter_count() * spec.letter_count(),
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.size() as u32).map(Letter)
    }

    pub fn props(&self) -> Option<&AlphabetSpec> {
        match self {
            Alphabet::Props(spec) => Some(spec),
            _ => None,
        }
    }

    /// Builds the pair letter `(input, full)` of a pair alphabet over `spec`.
    #[inline]
    pub fn pair_letter(spec: &AlphabetSpec, input: Letter, full: Letter) -> Letter {
        Letter(input.0 * spec.letter_count() as u32 + full.0)
    }

    #[inline]
    pub fn split_pair(spec: &AlphabetSpec, pair: Letter) -> (Letter, Letter) {
        let width = spec.letter_count() as u32;
        (Letter(pair.0 / width), Letter(pair.0 % width))
    }

    pub fn format_letter(&self, letter: Letter) -> String {
        match self {
            Alphabet::Props(spec) => spec.format_letter(letter),
            Alphabet::Symbols(names) => names[letter.index()].clone(),
            Alphabet::Pairs(spec) => {
                let (c, a) = Self::split_pair(spec, letter);
                format!(
                    "({},{})",
                    spec.input_spec().format_letter(c),
                    spec.format_letter(a)
                )
            }
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Props(spec) => write!(f, "2^{{{}}}", spec.aps().join(",")),
            Alphabet::Symbols(names) => write!(f, "{{{}}}", names.join(",")),
            Alphabet::Pairs(spec) => write!(
                f,
                "2^{{{}}} x 2^{{{}}}",
                spec.inputs().join(","),
                spec.aps().join(",")
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_occupy_low_bits() {
        let spec = AlphabetSpec::new(&["i", "j"], &["o"]).unwrap();
        let l = spec.letter_from_names(&["o", "j"]).unwrap();
        assert_eq!(l, Letter(0b110));
        assert_eq!(spec.input_part(l), Letter(0b010));
        assert_eq!(spec.output_part(l), Letter(0b100));
        assert_eq!(spec.format_letter(l), "{j,o}");
        assert_eq!(spec.input_spec().letter_count(), 4);
    }

    #[test]
    fn rejects_duplicates_and_unknown_names() {
        assert!(AlphabetSpec::new(&["a"], &["a"]).is_err());
        let spec = AlphabetSpec::inputs_only(&["a"]).unwrap();
        assert!(spec.letter_from_names(&["b"]).is_err());
        assert!(AlphabetSpec::inputs_only(&[""]).is_err());
    }

    #[test]
    fn translation_permutes_bits() {
        let a = AlphabetSpec::inputs_only(&["x", "y"]).unwrap();
        let b = AlphabetSpec::inputs_only(&["y", "x"]).unwrap();
        let t = a.translation_to(&b).unwrap();
        assert_eq!(t[0b01], Letter(0b10));
        assert_eq!(t[0b11], Letter(0b11));
    }

    #[test]
    fn pair_letters_round_trip() {
        let spec = AlphabetSpec::new(&["i"], &["o"]).unwrap();
        let alphabet = Alphabet::Pairs(spec.clone());
        assert_eq!(alphabet.size(), 8);
        for l in alphabet.letters() {
            let (c, a) = Alphabet::split_pair(&spec, l);
            assert_eq!(Alphabet::pair_letter(&spec, c, a), l);
        }
    }
}
