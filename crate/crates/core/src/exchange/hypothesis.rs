//! Hypotheses `lhs <= rhs` and hypothesis files.

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{parse_with, Expr};
use crate::symbol::{ActionSymbol, CommTable};

/// An inequation `lhs <= rhs` between expressions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hypothesis {
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Hypothesis {
    pub fn new(lhs: Expr, rhs: Expr) -> Self {
        Hypothesis { lhs, rhs }
    }

    /// The action word on the right, if it is a non-empty sequence of actions.
    pub fn grounded_word(&self) -> Option<Vec<ActionSymbol>> {
        fn go(x: &Expr, out: &mut Vec<ActionSymbol>) -> bool {
            match x {
                Expr::Act(a) => {
                    out.push(a.clone());
                    true
                }
                Expr::Seq(l, r) => go(l, out) && go(r, out),
                _ => false,
            }
        }
        let mut out = vec![];
        go(&self.rhs, &mut out).then_some(out)
    }

    pub fn is_grounded(&self) -> bool {
        self.grounded_word().is_some()
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

/// Contents of a hypothesis file: explicit hypotheses plus an optional
/// request for the exchange laws.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HypothesisSet {
    pub hypotheses: Vec<Hypothesis>,
    pub exchange_laws: bool,
}

impl HypothesisSet {
    /// Parses one `lhs <= rhs` per line; the line `exchs` adds the exchange
    /// laws. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str, table: &CommTable) -> Result<Self> {
        let mut set = HypothesisSet::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "exchs" {
                set.exchange_laws = true;
                continue;
            }
            let (l, r) = line.split_once("<=").ok_or_else(|| {
                Error::Format(format!("hypothesis line {}: expected `lhs <= rhs`", no + 1))
            })?;
            let side = |s: &str| {
                parse_with(s, table)
                    .map_err(|e| Error::Format(format!("hypothesis line {}: {e}", no + 1)))
            };
            set.hypotheses.push(Hypothesis::new(side(l)?, side(r)?));
        }
        Ok(set)
    }
}
