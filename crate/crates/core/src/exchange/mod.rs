//! Exchange-law closure and hypotheses.

mod closure;
mod hypothesis;

pub use closure::{
    closure, closure_conc, equiv_modulo_exchs_bounded, par_split, preclosure, seq_split, SplitKind,
    SplitPair,
};
pub use hypothesis::{Hypothesis, HypothesisSet};
