//! Pomsets with communication, series-communication(-parallel) rational
//! expressions and the machinery around them: bounded denotational
//! semantics, a structural operational semantics, step/pomset/history
//! preserving bisimilarity, closure under the exchange laws, and pomset
//! automata with fork and merge transitions.

pub mod automata;
pub mod bisim;
pub mod error;
pub mod exchange;
pub mod expr;
pub mod lang;
pub mod lts;
pub mod pomset;
pub mod symbol;

pub use error::{Error, Result};
pub use expr::Expr;
pub use lang::PomsetLanguage;
pub use pomset::{LabelledPosetC, Pomsetc};
pub use symbol::{ActionSymbol, CommTable};
