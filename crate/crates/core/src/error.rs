use thiserror::Error;

use crate::automaton::{Acceptance, Branching};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("too many atomic propositions ({0}, limit {max})", max = crate::alphabet::MAX_APS)]
    TooManyPropositions(usize),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("duplicate name `{0}`")]
    DuplicateProposition(String),
    #[error("unknown atomic proposition `{0}`")]
    UnknownProposition(String),
    #[error("alphabets declare different propositions")]
    Mismatch,
    #[error("alphabet is empty")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("state index {0} out of range")]
    InvalidState(usize),
    #[error("letter index {0} out of range")]
    InvalidLetter(u32),
    #[error("deterministic automaton needs exactly one initial state")]
    InitialNotSingleton,
    #[error("state {state} has several successors on letter {letter}")]
    NotDeterministic { state: usize, letter: u32 },
    #[error("expected {expected:?} branching, found {found:?}")]
    WrongBranching { expected: Branching, found: Branching },
    #[error("expected {expected:?} acceptance, found {found:?}")]
    WrongAcceptance { expected: Acceptance, found: Acceptance },
    #[error("automaton is not complete")]
    Incomplete,
    #[error("automata are over incompatible alphabets")]
    IncompatibleAlphabets,
    #[error("construction exceeded its state bound ({count} > {bound})")]
    BoundExceeded { count: usize, bound: usize },
    #[error("unsupported combination: {0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("state index {0} out of range")]
    InvalidState(usize),
    #[error("label of state {0} contains input propositions")]
    LabelNotOutput(usize),
    #[error("word is not a trace of the system")]
    NotATrace,
    #[error("word is over a different alphabet")]
    AlphabetMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("observed word is not a trace of the system")]
    NotATrace,
    #[error("effect class {found} does not match the requested pipeline ({expected})")]
    ClassMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("effect automaton invalid for its class: {0}")]
    InvalidEffect(String),
    #[error("prefix automaton accepting set is not absorbing")]
    NotAbsorbing,
    #[error("safety synthesis requires an input-enabled system (state {0} has no successor on some input)")]
    NotInputEnabled(usize),
    #[error("stage `{stage}` has {count} states, exceeding the bound {bound}")]
    BoundViolated {
        stage: &'static str,
        count: usize,
        bound: usize,
    },
    #[error("effect alphabet differs from the system alphabet")]
    AlphabetMismatch,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("alphabet of {0} symbols exceeds the encoding limit")]
    AlphabetTooLarge(usize),
    #[error("automaton has {0} states, exceeding the generator limit")]
    TooManyStates(usize),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("generator input must have exactly one initial state")]
    InitialNotSingleton,
    #[error("generator input has the wrong kind: {0}")]
    WrongKind(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
}

/// A syntax or validation error in one of the textual formats, with a
/// 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}
