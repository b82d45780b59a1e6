//! Valence grammars, derivation trees, valence trees with their evaluations,
//! and conversion to context-free grammars when the control group is finite.

mod cfg;
mod derivation;
mod grammar;
pub mod sequences;
pub mod tree;

use thiserror::Error;

use crate::analysis::{AnalysisError, GateVerdict};
use crate::load::LoadError;
use crate::monoid::MonoidError;
use crate::words::WordError;

pub use cfg::{sequence_bound, CfgOptions, DEFAULT_MAX_SEQUENCES};
pub use derivation::{derivation_tree_of, tree_value_check, yield_of, DerivationTree, Label, Step};
pub use grammar::{Production, Sym, ValenceGrammar};
pub use sequences::{in_joined_shuffle, join_sequences, join_set, shuffle_sequences, Seq};
pub use tree::{
    commute_indices, commutes_at, factor_count, find_commuting_indices, u_decomposition, Evaluation, TreeError,
    UDecomposition, ValenceTree, DEFAULT_EVALUATION_CAP,
};

/// Context-free grammars are valence grammars over the trivial monoid.
pub type Cfg = ValenceGrammar;

#[derive(Debug, Error)]
pub enum GrammarError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("unknown or duplicate symbol {0:?}")]
    UnknownSymbol(String),
    #[error("{0:?} is both a terminal and a nonterminal")]
    Overlap(String),
    #[error("the grammar is not normalized; run normalize first")]
    NotNormalized,
    #[error("{size} valence sequences exceed the construction limit of {limit}")]
    ConstructionTooLarge { size: usize, limit: usize },
    #[error("derivation step {step}: {reason}")]
    InvalidDerivation { step: usize, reason: String },
}

impl GrammarError {
    /// The gate verdict behind a conversion refusal, if this is one.
    pub fn refusal(&self) -> Option<&GateVerdict> {
        match self {
            GrammarError::Analysis(AnalysisError::GateRefused(v)) => Some(v),
            _ => None,
        }
    }
}
