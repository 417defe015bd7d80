//! Instance families from the lower-bound reductions: complementation of
//! nondeterministic automata and the subword languages `L_n`.

mod complement;
mod ln;

pub use complement::{gen_complementation_instance, gen_nfw_instance, EncodingScheme};
pub use ln::{gen_ln_instance, ln_encode, ln_membership_bruteforce, ln_spec, LnParams};

use std::fmt::Write as _;

use crate::alphabet::{Alphabet, Letter};
use crate::automaton::{Acceptance, Automaton, Branching};
use crate::effect::{EffectClass, EffectSpec};
use crate::error::{GeneratorError, ParseError};
use crate::format::{content_lines, split_key, tokenize};
use crate::system::System;
use crate::word::LassoWord;

/// How to read a cause of a generated instance back over the original alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoder {
    /// ω-word complementation: the decoded automaton reads `σ` as `Enc_I(σ)`.
    Complement(EncodingScheme),
    /// Finite-word complementation with an end marker: a decoded state
    /// accepts iff the cause accepts the encoded marker forever from it.
    FiniteComplement(EncodingScheme),
    Ln(LnParams),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub system: System,
    /// The observed trace `∅^ω`.
    pub trace: LassoWord,
    pub effect: EffectSpec,
    pub decoder: Decoder,
}

impl GeneratedInstance {
    /// Symbols of the original alphabet together with their encoded input letters.
    pub fn symbol_codes(&self) -> (Vec<String>, Vec<Letter>) {
        match &self.decoder {
            Decoder::Complement(s) | Decoder::FiniteComplement(s) => (
                s.symbols.clone(),
                (0..s.symbols.len()).map(|i| s.encode_symbol(i)).collect(),
            ),
            Decoder::Ln(p) => (
                ["0", "1", "#"].iter().map(|s| s.to_string()).collect(),
                (0..3).map(|c| p.symbol_letter(c)).collect(),
            ),
        }
    }

    /// Letter fed forever after a finite word, if the family uses one.
    fn padding(&self) -> Option<Letter> {
        match &self.decoder {
            Decoder::Complement(_) => None,
            Decoder::FiniteComplement(s) => Some(s.encode_symbol(s.end_marker.expect("end marker"))),
            Decoder::Ln(p) => Some(p.pad_letter()),
        }
    }
}

/// Whether the ω-language induced by a deterministic cause automaton
/// contains `x^ω` when started in `q`.
pub fn accepts_constant_from(class: EffectClass, cause: &Automaton, q: usize, x: Letter) -> bool {
    let mut path = vec![q];
    let mut seen = vec![usize::MAX; cause.num_states()];
    seen[q] = 0;
    let mut cur = q;
    let loop_start = loop {
        let Some(next) = cause.step(cur, x) else {
            // a missing transition rejects in every representation but bad prefixes
            return match class {
                EffectClass::Safety => !path.iter().any(|&p| cause.is_accepting(p)),
                EffectClass::Guarantee => path.iter().any(|&p| cause.is_accepting(p)),
                _ => false,
            };
        };
        if seen[next] != usize::MAX {
            break seen[next];
        }
        seen[next] = path.len();
        path.push(next);
        cur = next;
    };
    match class {
        EffectClass::Recurrence => path[loop_start..].iter().any(|&p| cause.is_accepting(p)),
        EffectClass::Persistence => !path[loop_start..].iter().any(|&p| cause.is_accepting(p)),
        EffectClass::Safety => !path.iter().any(|&p| cause.is_accepting(p)),
        EffectClass::Guarantee => path.iter().any(|&p| cause.is_accepting(p)),
    }
}

/// Reads a deterministic cause automaton over the original alphabet of the
/// instance. ω-word families keep the cause's acceptance; finite-word
/// families yield a DFW whose accepting states are those from which the
/// cause accepts the padding letter forever.
pub fn decode_cause(
    instance: &GeneratedInstance,
    class: EffectClass,
    cause: &Automaton,
) -> Result<Automaton, GeneratorError> {
    if !cause.is_deterministic() {
        return Err(GeneratorError::WrongKind(format!(
            "decoding expects a deterministic cause, found {}",
            cause.kind_tag()
        )));
    }
    let (symbols, codes) = instance.symbol_codes();
    let (symbols, codes) = match &instance.decoder {
        Decoder::FiniteComplement(s) => {
            let end = s.end_marker.expect("end marker");
            let keep: Vec<usize> = (0..symbols.len()).filter(|&i| i != end).collect();
            (
                keep.iter().map(|&i| symbols[i].clone()).collect::<Vec<_>>(),
                keep.iter().map(|&i| codes[i]).collect::<Vec<_>>(),
            )
        }
        _ => (symbols, codes),
    };
    let alphabet = Alphabet::symbols(&symbols).map_err(crate::error::AutomatonError::from)?;
    let acceptance = match instance.padding() {
        None => cause.acceptance(),
        Some(_) => Acceptance::Finite,
    };
    let mut b = Automaton::builder(alphabet, Branching::Deterministic, acceptance, cause.num_states());
    b.initial(cause.initial()[0]);
    for q in 0..cause.num_states() {
        let accepting = match instance.padding() {
            None => cause.is_accepting(q),
            Some(pad) => accepts_constant_from(class, cause, q, pad),
        };
        if accepting {
            b.accepting(q);
        }
        for (i, &code) in codes.iter().enumerate() {
            if let Some(t) = cause.step(q, code) {
                b.transition(q, Letter(i as u32), t);
            }
        }
    }
    Ok(b.build()?)
}

/// The decoder sidecar: encoding tables in a line-oriented format.
pub fn serialize_decoder(instance: &GeneratedInstance) -> String {
    let spec = instance.system.spec();
    let mut out = String::new();
    match &instance.decoder {
        Decoder::Complement(s) | Decoder::FiniteComplement(s) => {
            let kind = if matches!(instance.decoder, Decoder::Complement(_)) {
                "complement"
            } else {
                "finite-complement"
            };
            writeln!(out, "decoder {kind}").unwrap();
            writeln!(out, "automaton_states: {}", s.num_states).unwrap();
            writeln!(out, "letter_bits: {}", s.k).unwrap();
            writeln!(out, "state_bits: {}", s.j_count).unwrap();
            if let Some(e) = s.end_marker {
                writeln!(out, "end_marker: {}", s.symbols[e]).unwrap();
            }
            for (i, sym) in s.symbols.iter().enumerate() {
                writeln!(
                    out,
                    "code {} {}",
                    sym,
                    spec.format_letter(Letter(s.letter_codes[i]))
                )
                .unwrap();
            }
            for q in 0..s.num_states {
                writeln!(out, "state {} {}", q, spec.format_letter(s.encode_state(q))).unwrap();
            }
        }
        Decoder::Ln(p) => {
            writeln!(out, "decoder ln").unwrap();
            writeln!(out, "n: {}", p.n).unwrap();
            writeln!(out, "class: {}", p.class).unwrap();
            for (c, sym) in ["0", "1", "#"].iter().enumerate() {
                writeln!(out, "code {} {}", sym, spec.format_letter(p.symbol_letter(c))).unwrap();
            }
            writeln!(out, "pad {}", spec.format_letter(p.pad_letter())).unwrap();
        }
    }
    out
}

/// Summary of a decoder sidecar: its kind, scalar fields and code table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DecoderSidecar {
    pub kind: String,
    pub fields: Vec<(String, String)>,
    pub codes: Vec<(String, String, String)>,
}

pub fn parse_decoder(text: &str) -> Result<DecoderSidecar, ParseError> {
    let mut lines = content_lines(text);
    let (no, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, 1, "empty decoder file"))?;
    let h = tokenize(header, no)?;
    if h.len() != 2 || h[0].text != "decoder" {
        return Err(ParseError::new(no, 1, "expected `decoder <kind>`"));
    }
    let mut d = DecoderSidecar {
        kind: h[1].text.clone(),
        ..Default::default()
    };
    for (no, line) in lines {
        if let Some((key, _, rest)) = split_key(line) {
            d.fields.push((key.to_string(), rest.trim().to_string()));
            continue;
        }
        let t = tokenize(line, no)?;
        match (t[0].text.as_str(), t.len()) {
            ("code" | "state", 3) => d
                .codes
                .push((t[0].text.clone(), t[1].text.clone(), t[2].text.clone())),
            ("pad", 2) => d.codes.push(("pad".into(), String::new(), t[1].text.clone())),
            _ => {
                return Err(ParseError::new(
                    no,
                    t[0].col,
                    format!("unexpected `{}`", t[0].text),
                ))
            }
        }
    }
    Ok(d)
}
