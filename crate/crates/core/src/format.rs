//! Line-oriented text formats for systems, automata and lasso words.
//!
//! Blank lines and lines starting with `#` are ignored. Letters are written
//! as sets such as `{a,b}` or `{}`.
//!
//! ```text
//! inputs: i
//! outputs: o
//! states: s0 s1
//! init: s0
//! label s1 {o}
//! trans s0 {i} s1
//! ```
//!
//! ```text
//! automaton kind=DBW
//! aps: o
//! states: 2
//! init: 0
//! acc: 1
//! trans 0 {} 0
//! trans 0 {o} 1
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::alphabet::{Alphabet, AlphabetSpec, Letter};
use crate::automaton::{kind_tag, parse_kind_tag, Automaton};
use crate::error::ParseError;
use crate::system::System;
use crate::word::LassoWord;

/// A token and its 1-based column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub col: usize,
    pub text: String,
}

/// Splits a line into whitespace-separated tokens, keeping `{...}` groups
/// and `|` as single tokens.
pub(crate) fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '{' {
            let start = i;
            while i < chars.len() && chars[i] != '}' {
                i += 1;
            }
            if i == chars.len() {
                return Err(ParseError::new(line_no, start + 1, "unclosed `{`"));
            }
            i += 1;
            out.push(Token {
                col: start + 1,
                text: chars[start..i].iter().collect(),
            });
        } else if c == '|' {
            out.push(Token {
                col: i + 1,
                text: "|".into(),
            });
            i += 1;
        } else {
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '{' && chars[i] != '|' {
                i += 1;
            }
            out.push(Token {
                col: start + 1,
                text: chars[start..i].iter().collect(),
            });
        }
    }
    Ok(out)
}

/// Non-empty, non-comment lines with their 1-based numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
}

/// Splits `key: rest` and returns the key, the column of `rest` and `rest`.
pub(crate) fn split_key(line: &str) -> Option<(&str, usize, &str)> {
    let trimmed = line.trim_start();
    let offset = line.len() - trimmed.len();
    let colon = trimmed.find(':')?;
    let key = &trimmed[..colon];
    if key.is_empty() || key.contains(char::is_whitespace) {
        return None;
    }
    let rest = &trimmed[colon + 1..];
    Some((key, offset + colon + 2, rest))
}

fn letter_names(tok: &Token, line: usize) -> Result<Vec<String>, ParseError> {
    let t = &tok.text;
    if !t.starts_with('{') || !t.ends_with('}') {
        return Err(ParseError::new(
            line,
            tok.col,
            format!("expected a letter like `{{a,b}}`, found `{t}`"),
        ));
    }
    Ok(t[1..t.len() - 1]
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect())
}

/// Parses `{a,b}` over `spec`.
pub(crate) fn parse_letter(tok: &Token, line: usize, spec: &AlphabetSpec) -> Result<Letter, ParseError> {
    let names = letter_names(tok, line)?;
    spec.letter_from_names(&names)
        .map_err(|e| ParseError::new(line, tok.col, e.to_string()))
}

fn parse_alphabet_letter(tok: &Token, line: usize, alphabet: &Alphabet) -> Result<Letter, ParseError> {
    match alphabet {
        Alphabet::Props(spec) => parse_letter(tok, line, spec),
        Alphabet::Symbols(names) => {
            let name = if tok.text.starts_with('{') {
                let mut inner = letter_names(tok, line)?;
                if inner.len() != 1 {
                    return Err(ParseError::new(
                        line,
                        tok.col,
                        "a symbol letter names exactly one symbol",
                    ));
                }
                inner.pop().unwrap()
            } else {
                tok.text.clone()
            };
            names
                .iter()
                .position(|n| *n == name)
                .map(|i| Letter(i as u32))
                .ok_or_else(|| ParseError::new(line, tok.col, format!("unknown symbol `{name}`")))
        }
        Alphabet::Pairs(_) => Err(ParseError::new(line, tok.col, "pair alphabets have no text form")),
    }
}

fn parse_usize(tok: &Token, line: usize) -> Result<usize, ParseError> {
    tok.text
        .parse()
        .map_err(|_| ParseError::new(line, tok.col, format!("expected a number, found `{}`", tok.text)))
}

fn names_from(rest: &str, line: usize, col: usize) -> Result<Vec<Token>, ParseError> {
    Ok(tokenize(rest, line)?
        .into_iter()
        .map(|t| Token {
            col: t.col + col - 1,
            text: t.text,
        })
        .collect())
}

// ---------------------------------------------------------------- systems

pub fn parse_system(text: &str) -> Result<System, ParseError> {
    let mut inputs: Option<Vec<String>> = None;
    let mut outputs: Option<Vec<String>> = None;
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut init: Option<(usize, usize, String)> = None;
    let mut labels: Vec<(usize, Token, Token)> = Vec::new();
    let mut trans: Vec<(usize, Token, Token, Token)> = Vec::new();
    let mut last_line = 0;

    for (no, line) in content_lines(text) {
        last_line = no;
        if let Some((key, col, rest)) = split_key(line) {
            let toks = names_from(rest, no, col)?;
            let names = || toks.iter().map(|t| t.text.clone()).collect::<Vec<_>>();
            match key {
                "inputs" => inputs = Some(names()),
                "outputs" => outputs = Some(names()),
                "states" => {
                    if toks.is_empty() {
                        return Err(ParseError::new(no, col, "the states section is empty"));
                    }
                    states = Some((no, names()));
                }
                "init" => {
                    if toks.len() != 1 {
                        return Err(ParseError::new(no, col, "expected exactly one initial state"));
                    }
                    init = Some((no, toks[0].col, toks[0].text.clone()));
                }
                other => {
                    return Err(ParseError::new(no, 1, format!("unknown section `{other}`")));
                }
            }
            continue;
        }
        let toks = tokenize(line, no)?;
        match toks[0].text.as_str() {
            "label" if toks.len() == 3 => labels.push((no, toks[1].clone(), toks[2].clone())),
            "trans" if toks.len() == 4 => trans.push((no, toks[1].clone(), toks[2].clone(), toks[3].clone())),
            "label" | "trans" => {
                return Err(ParseError::new(
                    no,
                    toks[0].col,
                    format!("malformed `{}` line", toks[0].text),
                ));
            }
            other => {
                return Err(ParseError::new(no, toks[0].col, format!("unexpected `{other}`")));
            }
        }
    }

    let missing = |what: &str| ParseError::new(last_line.max(1), 1, format!("missing `{what}:` section"));
    let inputs = inputs.ok_or_else(|| missing("inputs"))?;
    let outputs = outputs.ok_or_else(|| missing("outputs"))?;
    let (states_line, names) = states.ok_or_else(|| missing("states"))?;
    let (init_line, init_col, init_name) = init.ok_or_else(|| missing("init"))?;
    let spec = AlphabetSpec::new(&inputs, &outputs).map_err(|e| ParseError::new(1, 1, e.to_string()))?;

    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(ParseError::new(states_line, 1, format!("duplicate state `{n}`")));
        }
    }
    let state = |tok: &Token, line: usize| {
        index
            .get(&tok.text)
            .copied()
            .ok_or_else(|| ParseError::new(line, tok.col, format!("unknown state `{}`", tok.text)))
    };
    let initial = *index
        .get(&init_name)
        .ok_or_else(|| ParseError::new(init_line, init_col, format!("unknown state `{init_name}`")))?;

    let mut label_of = vec![Letter::EMPTY; names.len()];
    let mut labelled = vec![false; names.len()];
    for (no, s, l) in &labels {
        let s_idx = state(s, *no)?;
        if labelled[s_idx] {
            return Err(ParseError::new(
                *no,
                s.col,
                format!("state `{}` labelled twice", s.text),
            ));
        }
        labelled[s_idx] = true;
        let letter = parse_letter(l, *no, &spec)?;
        if letter.bits() & spec.input_mask() != 0 {
            return Err(ParseError::new(*no, l.col, "labels may only contain outputs"));
        }
        label_of[s_idx] = letter;
    }
    let mut edges = Vec::with_capacity(trans.len());
    for (no, s, l, t) in &trans {
        let from = state(s, *no)?;
        let to = state(t, *no)?;
        let letter = parse_letter(l, *no, &spec)?;
        if letter.bits() & spec.output_mask() != 0 {
            return Err(ParseError::new(
                *no,
                l.col,
                "transition letters may only contain inputs",
            ));
        }
        edges.push((from, letter, to));
    }
    System::new(spec, names, initial, label_of, &edges).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

pub fn serialize_system(t: &System) -> String {
    let spec = t.spec();
    let mut out = String::new();
    writeln!(out, "inputs: {}", spec.inputs().join(" ")).unwrap();
    writeln!(out, "outputs: {}", spec.outputs().join(" ")).unwrap();
    writeln!(out, "states: {}", t.state_names().join(" ")).unwrap();
    writeln!(out, "init: {}", t.state_name(t.initial())).unwrap();
    for s in 0..t.num_states() {
        writeln!(
            out,
            "label {} {}",
            t.state_name(s),
            spec.format_letter(t.label(s))
        )
        .unwrap();
    }
    for (s, c, u) in t.transitions() {
        writeln!(
            out,
            "trans {} {} {}",
            t.state_name(s),
            spec.format_letter(c),
            t.state_name(u)
        )
        .unwrap();
    }
    out
}

// ---------------------------------------------------------------- words

/// Parses `"<letters> | <letters>"` over `alphabet`.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<LassoWord, ParseError> {
    let mut found: Option<(usize, Vec<Token>)> = None;
    for (no, line) in content_lines(text) {
        if found.is_some() {
            return Err(ParseError::new(no, 1, "a word occupies a single line"));
        }
        found = Some((no, tokenize(line.trim().trim_matches('"'), no)?));
    }
    let (no, toks) = found.ok_or_else(|| ParseError::new(1, 1, "empty word"))?;
    let bars: Vec<usize> = toks
        .iter()
        .enumerate()
        .filter(|(_, t)| t.text == "|")
        .map(|(i, _)| i)
        .collect();
    if bars.len() != 1 {
        return Err(ParseError::new(
            no,
            1,
            "expected exactly one `|` between stem and loop",
        ));
    }
    let mut stem = Vec::new();
    let mut cycle = Vec::new();
    for (i, tok) in toks.iter().enumerate() {
        if i == bars[0] {
            continue;
        }
        let l = parse_alphabet_letter(tok, no, alphabet)?;
        if i < bars[0] {
            stem.push(l);
        } else {
            cycle.push(l);
        }
    }
    let bar_col = toks[bars[0]].col;
    LassoWord::new(stem, cycle).map_err(|e| ParseError::new(no, bar_col, e.to_string()))
}

/// Parses a finite word: whitespace-separated letters, `ε` or nothing for
/// the empty word. Comment lines are not recognized, so `#` may be a symbol.
pub fn parse_finite_word(text: &str, alphabet: &Alphabet) -> Result<Vec<Letter>, ParseError> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
        for tok in tokenize(line.trim().trim_matches('"'), no)? {
            if tok.text == "|" {
                return Err(ParseError::new(no, tok.col, "finite words have no loop"));
            }
            if tok.text != "ε" {
                out.push(parse_alphabet_letter(&tok, no, alphabet)?);
            }
        }
    }
    Ok(out)
}

/// Parses a trace over the propositions of `spec`.
pub fn parse_trace(text: &str, spec: &AlphabetSpec) -> Result<LassoWord, ParseError> {
    parse_word(text, &Alphabet::Props(spec.clone()))
}

pub fn serialize_word(w: &LassoWord, alphabet: &Alphabet) -> String {
    format!("{}\n", w.format(alphabet))
}

// ---------------------------------------------------------------- automata

/// How a finite-word automaton describes an ω-language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixSemantics {
    BadPrefixes,
    GoodPrefixes,
}

impl PrefixSemantics {
    pub fn name(self) -> &'static str {
        match self {
            PrefixSemantics::BadPrefixes => "bad-prefixes",
            PrefixSemantics::GoodPrefixes => "good-prefixes",
        }
    }
}

impl FromStr for PrefixSemantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bad-prefixes" => Ok(PrefixSemantics::BadPrefixes),
            "good-prefixes" => Ok(PrefixSemantics::GoodPrefixes),
            other => Err(format!("unknown semantics `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedAutomaton {
    pub automaton: Automaton,
    pub semantics: Option<PrefixSemantics>,
}

pub fn parse_automaton(text: &str) -> Result<ParsedAutomaton, ParseError> {
    let mut lines = content_lines(text);
    let (hno, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, 1, "empty automaton file"))?;
    let htoks = tokenize(header, hno)?;
    if htoks.len() != 2 || htoks[0].text != "automaton" || !htoks[1].text.starts_with("kind=") {
        return Err(ParseError::new(hno, 1, "expected header `automaton kind=<TAG>`"));
    }
    let tag = &htoks[1].text[5..];
    let (branching, acceptance) = parse_kind_tag(tag)
        .ok_or_else(|| ParseError::new(hno, htoks[1].col + 5, format!("unknown kind `{tag}`")))?;

    let mut alphabet: Option<Alphabet> = None;
    let mut states: Option<usize> = None;
    let mut init: Vec<(usize, Token)> = Vec::new();
    let mut acc: Vec<(usize, Token)> = Vec::new();
    let mut semantics = None;
    let mut trans: Vec<(usize, Vec<Token>)> = Vec::new();
    let mut seen_init = false;
    let mut last_line = hno;

    for (no, line) in lines {
        last_line = no;
        if let Some((key, col, rest)) = split_key(line) {
            let toks = names_from(rest, no, col)?;
            match key {
                "aps" => {
                    let names: Vec<String> = toks.iter().map(|t| t.text.clone()).collect();
                    let spec = AlphabetSpec::inputs_only(&names)
                        .map_err(|e| ParseError::new(no, col, e.to_string()))?;
                    alphabet = Some(Alphabet::Props(spec));
                }
                "symbols" => {
                    let names: Vec<String> = toks.iter().map(|t| t.text.clone()).collect();
                    alphabet =
                        Some(Alphabet::symbols(&names).map_err(|e| ParseError::new(no, col, e.to_string()))?);
                }
                "states" => {
                    if toks.len() != 1 {
                        return Err(ParseError::new(no, col, "expected the number of states"));
                    }
                    let n = parse_usize(&toks[0], no)?;
                    if n == 0 {
                        return Err(ParseError::new(
                            no,
                            toks[0].col,
                            "an automaton needs at least one state",
                        ));
                    }
                    states = Some(n);
                }
                "init" => {
                    seen_init = true;
                    init.extend(toks.into_iter().map(|t| (no, t)));
                }
                "acc" => acc.extend(toks.into_iter().map(|t| (no, t))),
                "semantics" => {
                    if toks.len() != 1 {
                        return Err(ParseError::new(no, col, "expected bad-prefixes or good-prefixes"));
                    }
                    semantics = Some(
                        toks[0]
                            .text
                            .parse()
                            .map_err(|e: String| ParseError::new(no, toks[0].col, e))?,
                    );
                }
                other => return Err(ParseError::new(no, 1, format!("unknown section `{other}`"))),
            }
            continue;
        }
        let toks = tokenize(line, no)?;
        if toks[0].text != "trans" || toks.len() != 4 {
            return Err(ParseError::new(
                no,
                toks[0].col,
                "expected `trans <q> <letter> <q'>`",
            ));
        }
        trans.push((no, toks));
    }

    let alphabet =
        alphabet.ok_or_else(|| ParseError::new(last_line, 1, "missing `aps:` or `symbols:` section"))?;
    let n = states.ok_or_else(|| ParseError::new(last_line, 1, "missing `states:` section"))?;
    if !seen_init {
        return Err(ParseError::new(last_line, 1, "missing `init:` section"));
    }
    let state = |no: usize, tok: &Token| -> Result<usize, ParseError> {
        let q = parse_usize(tok, no)?;
        if q >= n {
            return Err(ParseError::new(no, tok.col, format!("state {q} out of range")));
        }
        Ok(q)
    };
    let mut b = Automaton::builder(alphabet.clone(), branching, acceptance, n);
    for (no, t) in &init {
        b.initial(state(*no, t)?);
    }
    for (no, t) in &acc {
        b.accepting(state(*no, t)?);
    }
    for (no, toks) in &trans {
        let from = state(*no, &toks[1])?;
        let letter = parse_alphabet_letter(&toks[2], *no, &alphabet)?;
        let to = state(*no, &toks[3])?;
        b.transition(from, letter, to);
    }
    let automaton = b
        .build()
        .map_err(|e| ParseError::new(hno, 1, format!("kind {tag}: {e}")))?;
    if semantics.is_some() && acceptance != crate::automaton::Acceptance::Finite {
        return Err(ParseError::new(
            hno,
            1,
            "prefix semantics only apply to finite-word automata",
        ));
    }
    Ok(ParsedAutomaton { automaton, semantics })
}

pub fn serialize_automaton(a: &Automaton, semantics: Option<PrefixSemantics>) -> String {
    let mut out = String::new();
    writeln!(out, "automaton kind={}", kind_tag(a.branching(), a.acceptance())).unwrap();
    match a.alphabet() {
        Alphabet::Props(spec) => writeln!(out, "aps: {}", spec.aps().join(" ")).unwrap(),
        Alphabet::Symbols(names) => writeln!(out, "symbols: {}", names.join(" ")).unwrap(),
        Alphabet::Pairs(spec) => writeln!(out, "# pair alphabet over {}", spec.aps().join(" ")).unwrap(),
    }
    if let Some(s) = semantics {
        writeln!(out, "semantics: {}", s.name()).unwrap();
    }
    writeln!(out, "states: {}", a.num_states()).unwrap();
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    writeln!(out, "init: {}", join(a.initial())).unwrap();
    writeln!(out, "acc: {}", join(&a.accepting_states())).unwrap();
    for (q, l, t) in a.transitions() {
        writeln!(out, "trans {} {} {}", q, a.alphabet().format_letter(l), t).unwrap();
    }
    out
}

/// Reads an automaton over propositions and reorders its letters to follow
/// `spec`, which must declare the same names.
pub fn align_to_spec(a: &Automaton, spec: &AlphabetSpec) -> Result<Automaton, String> {
    let own = a
        .alphabet()
        .props()
        .ok_or_else(|| "automaton is not over propositions".to_string())?;
    if !own.same_names(spec) {
        return Err(format!(
            "automaton propositions {{{}}} differ from {{{}}}",
            own.aps().join(","),
            spec.aps().join(",")
        ));
    }
    let map = spec.translation_to(own).map_err(|e| e.to_string())?;
    a.relabel(Alphabet::Props(spec.clone()), &map)
        .map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- bundles

/// File references of a synthesis instance, relative to the bundle file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstanceBundle {
    pub system: String,
    pub trace: String,
    pub effect: String,
    pub class: String,
    pub decoder: Option<String>,
}

pub fn parse_bundle(text: &str) -> Result<InstanceBundle, ParseError> {
    let mut b = InstanceBundle::default();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (no, line) in content_lines(text) {
        let (key, col, rest) =
            split_key(line).ok_or_else(|| ParseError::new(no, 1, "expected `key: value`"))?;
        let value = rest.trim().to_string();
        if value.is_empty() {
            return Err(ParseError::new(no, col, format!("empty value for `{key}`")));
        }
        if let Some(prev) = seen.insert(key.to_string(), no) {
            return Err(ParseError::new(
                no,
                1,
                format!("`{key}` already given on line {prev}"),
            ));
        }
        match key {
            "system" => b.system = value,
            "trace" => b.trace = value,
            "effect" => b.effect = value,
            "class" => b.class = value,
            "decoder" => b.decoder = Some(value),
            other => return Err(ParseError::new(no, 1, format!("unknown key `{other}`"))),
        }
    }
    for (key, v) in [
        ("system", &b.system),
        ("trace", &b.trace),
        ("effect", &b.effect),
        ("class", &b.class),
    ] {
        if v.is_empty() {
            return Err(ParseError::new(1, 1, format!("missing `{key}:`")));
        }
    }
    Ok(b)
}

pub fn serialize_bundle(b: &InstanceBundle) -> String {
    let mut out = format!(
        "system: {}\ntrace: {}\neffect: {}\nclass: {}\n",
        b.system, b.trace, b.effect, b.class
    );
    if let Some(d) = &b.decoder {
        writeln!(out, "decoder: {d}").unwrap();
    }
    out
}
