//! Action symbols and the communication table.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A base action or a communication action `rho(a,b)`.
///
/// The operands of a communication action are kept in sorted order, so
/// `rho(a,b)` and `rho(b,a)` are the same value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ActionSymbol {
    Base(Arc<str>),
    Comm(Arc<str>, Arc<str>),
}

impl ActionSymbol {
    pub fn base(name: &str) -> Self {
        ActionSymbol::Base(Arc::from(name))
    }

    /// Communication symbol without consulting a table.
    pub fn comm_unchecked(a: &str, b: &str) -> Self {
        if a <= b {
            ActionSymbol::Comm(Arc::from(a), Arc::from(b))
        } else {
            ActionSymbol::Comm(Arc::from(b), Arc::from(a))
        }
    }

    pub fn is_comm(&self) -> bool {
        matches!(self, ActionSymbol::Comm(..))
    }

    pub fn base_name(&self) -> Option<&str> {
        match self {
            ActionSymbol::Base(n) => Some(n),
            ActionSymbol::Comm(..) => None,
        }
    }

    /// Parses `name` or `rho(a,b)`; the table is consulted for the latter.
    pub fn parse(text: &str, table: &CommTable) -> Result<Self> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix("rho(").and_then(|r| r.strip_suffix(')')) {
            let mut parts = inner.split(',');
            let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a.trim(), b.trim()),
                _ => return Err(Error::Format(format!("bad label `{t}`"))),
            };
            if !is_ident(a) || !is_ident(b) {
                return Err(Error::Format(format!("bad label `{t}`")));
            }
            return table.symbol(a, b);
        }
        if is_ident(t) {
            Ok(ActionSymbol::base(t))
        } else {
            Err(Error::Format(format!("bad label `{t}`")))
        }
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for ActionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionSymbol::Base(n) => write!(f, "{n}"),
            ActionSymbol::Comm(a, b) => write!(f, "rho({a},{b})"),
        }
    }
}

/// The partial communication function on base actions.
///
/// A table is either total (every pair communicates, the default) or an
/// explicit symmetric list of entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommTable {
    total: bool,
    entries: BTreeMap<(Arc<str>, Arc<str>), String>,
}

impl Default for CommTable {
    fn default() -> Self {
        Self::total()
    }
}

impl CommTable {
    /// Every pair of base actions communicates.
    pub fn total() -> Self {
        CommTable {
            total: true,
            entries: BTreeMap::new(),
        }
    }

    /// No pair communicates.
    pub fn empty() -> Self {
        CommTable {
            total: false,
            entries: BTreeMap::new(),
        }
    }

    fn key(a: &str, b: &str) -> (Arc<str>, Arc<str>) {
        if a <= b {
            (Arc::from(a), Arc::from(b))
        } else {
            (Arc::from(b), Arc::from(a))
        }
    }

    pub fn insert(&mut self, a: &str, b: &str, result: &str) {
        self.entries.insert(Self::key(a, b), result.to_string());
    }

    pub fn is_total(&self) -> bool {
        self.total
    }

    pub fn defines(&self, a: &str, b: &str) -> bool {
        self.total || self.entries.contains_key(&Self::key(a, b))
    }

    /// Name of the result action, if the table lists one.
    pub fn result(&self, a: &str, b: &str) -> Option<&str> {
        self.entries.get(&Self::key(a, b)).map(String::as_str)
    }

    /// The communication symbol for `(a,b)`, if defined.
    pub fn symbol(&self, a: &str, b: &str) -> Result<ActionSymbol> {
        if self.defines(a, b) {
            Ok(ActionSymbol::comm_unchecked(a, b))
        } else {
            Err(Error::CommTable(a.to_string(), b.to_string()))
        }
    }

    /// Parses lines of the form `a b result`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = CommTable::empty();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.len() != 3 || !words.iter().all(|w| is_ident(w)) {
                return Err(Error::Format(format!(
                    "communication table line {}: expected `a b result`",
                    no + 1
                )));
            }
            table.insert(words[0], words[1], words[2]);
        }
        Ok(table)
    }
}
