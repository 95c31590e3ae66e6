//! Pomset automata with sequential, fork and merge transitions.

mod accept;
mod solve;
mod structure;
mod syntactic;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::{ActionSymbol, CommTable};

pub use accept::{accepts, language_bounded};
pub use solve::{solve, solve_linear_system, LinearSystem};
pub use syntactic::syntactic_pa;

/// Index of a state.
pub type StateId = usize;

/// A pomset automaton. Fork and merge multisets are stored sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PomsetAutomaton {
    names: Vec<String>,
    finals: BTreeSet<StateId>,
    delta: BTreeSet<(StateId, ActionSymbol, StateId)>,
    gamma: BTreeSet<(StateId, Vec<StateId>, StateId)>,
    eta: BTreeSet<(Vec<StateId>, StateId, StateId)>,
}

impl PomsetAutomaton {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a state, or returns the existing one with this name.
    pub fn add_state(&mut self, name: &str) -> StateId {
        if let Some(q) = self.state(name) {
            return q;
        }
        self.names.push(name.to_string());
        self.names.len() - 1
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn set_final(&mut self, q: StateId) {
        self.finals.insert(q);
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(&q)
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn add_delta(&mut self, from: StateId, label: ActionSymbol, to: StateId) {
        self.delta.insert((from, label, to));
    }

    pub fn add_gamma(&mut self, from: StateId, mut fork: Vec<StateId>, to: StateId) {
        fork.sort_unstable();
        self.gamma.insert((from, fork, to));
    }

    pub fn add_eta(&mut self, mut join: Vec<StateId>, from: StateId, to: StateId) {
        join.sort_unstable();
        self.eta.insert((join, from, to));
    }

    pub fn delta(&self) -> impl Iterator<Item = &(StateId, ActionSymbol, StateId)> {
        self.delta.iter()
    }

    pub fn gamma(&self) -> impl Iterator<Item = &(StateId, Vec<StateId>, StateId)> {
        self.gamma.iter()
    }

    pub fn eta(&self) -> impl Iterator<Item = &(Vec<StateId>, StateId, StateId)> {
        self.eta.iter()
    }

    /// Labels of sequential transitions, sorted.
    pub fn alphabet(&self) -> Vec<ActionSymbol> {
        self.delta
            .iter()
            .map(|(_, a, _)| a.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Whether `q` has no sequential or fork transition.
    pub fn has_no_transitions(&self, q: StateId) -> bool {
        !self.delta.iter().any(|t| t.0 == q) && !self.gamma.iter().any(|t| t.0 == q)
    }

    pub(crate) fn forks_from(&self, q: StateId) -> Vec<(&[StateId], StateId)> {
        self.gamma
            .iter()
            .filter(|t| t.0 == q)
            .map(|t| (t.1.as_slice(), t.2))
            .collect()
    }

    /// Merge transitions `(join, to)` that resume at `from`.
    pub(crate) fn merges_at(&self, from: StateId) -> Vec<(&[StateId], StateId)> {
        self.eta
            .iter()
            .filter(|t| t.1 == from)
            .map(|t| (t.0.as_slice(), t.2))
            .collect()
    }

    pub(crate) fn delta_by_state(&self) -> Vec<Vec<(ActionSymbol, StateId)>> {
        let mut out = vec![vec![]; self.len()];
        for (q, a, r) in &self.delta {
            out[*q].push((a.clone(), *r));
        }
        out
    }

    pub fn from_json(text: &str, table: &CommTable) -> Result<Self> {
        let j: AutomatonJson =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let mut a = PomsetAutomaton::new();
        for s in &j.states {
            if a.state(s).is_some() {
                return Err(Error::Format(format!("duplicate state `{s}`")));
            }
            a.add_state(s);
        }
        let get = |a: &PomsetAutomaton, s: &str| {
            a.state(s)
                .ok_or_else(|| Error::Format(format!("unknown state `{s}`")))
        };
        for f in &j.finals {
            let q = get(&a, f)?;
            a.set_final(q);
        }
        for d in &j.delta {
            let (q, r) = (get(&a, &d.from)?, get(&a, &d.to)?);
            a.add_delta(q, ActionSymbol::parse(&d.label, table)?, r);
        }
        for g in &j.gamma {
            let fork = g
                .fork
                .iter()
                .map(|s| get(&a, s))
                .collect::<Result<Vec<_>>>()?;
            let (q, r) = (get(&a, &g.from)?, get(&a, &g.to)?);
            a.add_gamma(q, fork, r);
        }
        for e in &j.eta {
            let join = e
                .join
                .iter()
                .map(|s| get(&a, s))
                .collect::<Result<Vec<_>>>()?;
            let (q, r) = (get(&a, &e.from)?, get(&a, &e.to)?);
            a.add_eta(join, q, r);
        }
        Ok(a)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = |q: &StateId| self.names[*q].clone();
        let j = AutomatonJson {
            states: self.names.clone(),
            finals: self.finals.iter().map(n).collect(),
            delta: self
                .delta
                .iter()
                .map(|(q, a, r)| DeltaJson {
                    from: n(q),
                    label: a.to_string(),
                    to: n(r),
                })
                .collect(),
            gamma: self
                .gamma
                .iter()
                .map(|(q, f, r)| GammaJson {
                    from: n(q),
                    fork: f.iter().map(n).collect(),
                    to: n(r),
                })
                .collect(),
            eta: self
                .eta
                .iter()
                .map(|(f, q, r)| EtaJson {
                    join: f.iter().map(n).collect(),
                    from: n(q),
                    to: n(r),
                })
                .collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    /// Graphviz rendering; each fork and merge gets a small point node.
    pub fn to_dot(&self) -> String {
        let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
        let mut s = String::from("digraph pa {\n  rankdir=LR;\n");
        for (i, name) in self.names.iter().enumerate() {
            let shape = if self.finals.contains(&i) {
                "doublecircle"
            } else {
                "circle"
            };
            s.push_str(&format!(
                "  q{i} [shape={shape}, label=\"{}\"];\n",
                esc(name)
            ));
        }
        for (q, a, r) in &self.delta {
            s.push_str(&format!(
                "  q{q} -> q{r} [label=\"{}\"];\n",
                esc(&a.to_string())
            ));
        }
        for (k, (q, fork, r)) in self.gamma.iter().enumerate() {
            s.push_str(&format!(
                "  f{k} [shape=point];\n  q{q} -> f{k} [arrowhead=none];\n"
            ));
            for b in fork {
                s.push_str(&format!("  f{k} -> q{b};\n"));
            }
            s.push_str(&format!("  q{q} -> q{r} [style=dashed];\n"));
        }
        for (k, (join, q, r)) in self.eta.iter().enumerate() {
            s.push_str(&format!("  m{k} [shape=point];\n"));
            for b in join {
                s.push_str(&format!("  q{b} -> m{k} [arrowhead=none];\n"));
            }
            s.push_str(&format!(
                "  m{k} -> q{r} [label=\"after {}\"];\n",
                esc(&self.names[*q])
            ));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Serialize, Deserialize)]
struct DeltaJson {
    from: String,
    label: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct GammaJson {
    from: String,
    fork: Vec<String>,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct EtaJson {
    join: Vec<String>,
    from: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct AutomatonJson {
    states: Vec<String>,
    #[serde(default)]
    finals: Vec<String>,
    #[serde(default)]
    delta: Vec<DeltaJson>,
    #[serde(default)]
    gamma: Vec<GammaJson>,
    #[serde(default)]
    eta: Vec<EtaJson>,
}
