//! Witness languages for the two non-regularity and non-context-freeness
//! constructions, with membership oracles, Myhill-Nerode separators and an
//! Ogden-condition falsifier.

mod nerode;
mod ogden;
mod witness;

use thiserror::Error;

use crate::grammars::GrammarError;
use crate::load::LoadError;
use crate::machines::MachineError;
use crate::monoid::MonoidError;
use crate::words::WordError;

pub use nerode::{nerode_separators, NerodeReport, PairWitness};
pub use ogden::{ogden_falsify, Decomposition, OgdenReport};
pub use witness::{mirror_symbol, WitnessKind, WitnessSpec};

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error("symbol index {0} is outside the witness alphabet")]
    ForeignSymbol(usize),
    #[error("symbol {0:?} is used twice in the witness alphabet")]
    Overlap(String),
    #[error("invalid marks: {0}")]
    Marks(String),
}
