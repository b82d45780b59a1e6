//! Valence automata and transducers: bounded simulation, determinism,
//! pruning and conversion to classical devices when the gate is finite.

mod automaton;
mod transducer;

use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::load::LoadError;
use crate::monoid::MonoidError;
use crate::words::{length_lex, Alphabet, Word, WordError};

pub use automaton::{Edge, ValenceAutomaton};
pub use transducer::{TransducerEdge, Transduction, ValenceTransducer};

/// Classical automata are valence automata over the trivial monoid.
pub type Nfa = ValenceAutomaton;
/// Classical transducers are valence transducers over the trivial monoid.
pub type Fst = ValenceTransducer;

#[derive(Debug, Error)]
pub enum MachineError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("state {0:?} declared twice")]
    DuplicateState(String),
    #[error("the automaton has no states")]
    NoStates,
    #[error("E(N) is not available: {0}")]
    ESetUnavailable(String),
}

impl MachineError {
    /// The gate verdict behind a conversion refusal, if this is one.
    pub fn refusal(&self) -> Option<&crate::analysis::GateVerdict> {
        match self {
            MachineError::Analysis(AnalysisError::GateRefused(v)) => Some(v),
            _ => None,
        }
    }
}

/// Limits for configuration searches over infinite monoids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Configurations whose monoid component has a larger norm are dropped.
    pub norm_cap: u64,
    /// Maximum number of edges (or derivation steps) in a run; `None` is
    /// unbounded.
    pub max_steps: Option<usize>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { norm_cap: crate::analysis::DEFAULT_NORM_CAP, max_steps: None }
    }
}

impl SearchBudget {
    pub fn new(norm_cap: u64, max_steps: Option<usize>) -> Self {
        SearchBudget { norm_cap, max_steps }
    }

    pub(crate) fn allows(&self, norm: u64, steps: usize) -> bool {
        norm <= self.norm_cap && self.max_steps.map_or(true, |s| steps <= s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Acceptance {
    Yes,
    No,
    /// Not found, but some configuration was cut off by the budget.
    NoWithinBudget,
}

impl Acceptance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Acceptance::Yes => "yes",
            Acceptance::No => "no",
            Acceptance::NoWithinBudget => "no-within-budget",
        }
    }

    pub fn is_yes(&self) -> bool {
        *self == Acceptance::Yes
    }
}

/// A finite slice of a language: words up to a length bound in
/// length-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LangSample {
    pub maxlen: usize,
    pub words: Vec<Word>,
    /// False when the budget cut off part of the search.
    pub complete: bool,
}

impl LangSample {
    pub fn new(maxlen: usize, mut words: Vec<Word>, complete: bool) -> Self {
        words.sort_by(|a, b| length_lex(a, b));
        words.dedup();
        LangSample { maxlen, words, complete }
    }

    pub fn contains(&self, w: &[usize]) -> bool {
        self.words.binary_search_by(|x| length_lex(x, w)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn render(&self, alphabet: &Alphabet) -> Vec<String> {
        self.words.iter().map(|w| alphabet.render(w)).collect()
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        json!({
            "maxlen": self.maxlen,
            "complete": self.complete,
            "count": self.words.len(),
            "words": self.render(alphabet),
        })
    }
}

pub(crate) fn label_from_json(alphabet: &Alphabet, v: Option<&Value>) -> Result<Word, MachineError> {
    match v {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::String(s)) => Ok(alphabet.parse_word(s)?),
        Some(other) => Err(LoadError::Schema(format!("edge labels must be strings, got {other}")).into()),
    }
}
