//! Construction of temporal causes for effects of reactive systems.
//!
//! Given a system, an observed trace and an ω-regular effect, the cause is
//! the set of traces whose every similar system trace lies in the effect.
//! The crate computes it as a deterministic automaton for recurrence,
//! safety and guarantee effects and checks the result with an independent
//! product-and-emptiness oracle.

pub mod alphabet;
pub mod automaton;
pub mod effect;
pub mod emptiness;
pub mod error;
pub mod format;
pub mod generators;
pub mod graph;
pub mod ops;
pub mod oracle;
pub mod random;
pub mod synthesis;
pub mod system;
pub mod word;

pub use alphabet::{Alphabet, AlphabetSpec, Letter};
pub use automaton::{Acceptance, Automaton, AutomatonBuilder, Branching};
pub use effect::{EffectClass, EffectSpec};
pub use error::{AlphabetError, AutomatonError, ParseError};
pub use error::{SynthesisError, SystemError};
pub use oracle::Oracle;
pub use synthesis::{synthesize, CauseResult, SynthesisOptions};
pub use system::{ObservedTrace, System};
pub use word::LassoWord;
