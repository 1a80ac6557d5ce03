//! Topic-sensitive ignorance logics.
//!
//! Formulas, finite topic models and Kripke models, truth evaluation for the
//! classic systems IW, IU, DI and their hyperintensional refinements HIW,
//! HIU, HDI, bounded countermodel search, soundness fuzzing and a Hilbert
//! proof checker.

pub mod cli;
pub mod decision;
pub mod fixtures;
pub mod gen;
pub mod model;
pub mod proofsys;
pub mod semantics;
pub mod syntax;
pub mod topic;
