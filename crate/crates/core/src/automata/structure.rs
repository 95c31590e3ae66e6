use std::collections::BTreeSet;

use super::{PomsetAutomaton, StateId};
use crate::error::{Error, Result};

impl PomsetAutomaton {
    /// For each state, the states it directly depends on: targets of its
    /// transitions, its fork branches, and the join states of merges that
    /// resume at it.
    fn below(&self) -> Vec<BTreeSet<StateId>> {
        let mut out = vec![BTreeSet::new(); self.len()];
        for (q, _, r) in self.delta() {
            out[*q].insert(*r);
        }
        for (q, fork, r) in self.gamma() {
            out[*q].insert(*r);
            out[*q].extend(fork.iter().copied());
        }
        for (join, q, r) in self.eta() {
            out[*q].insert(*r);
            for j in join {
                out[*j].insert(*q);
            }
        }
        out
    }

    /// The smallest support-closed set containing `q`.
    pub fn support(&self, q: StateId) -> BTreeSet<StateId> {
        let below = self.below();
        let mut seen = BTreeSet::from([q]);
        let mut stack = vec![q];
        while let Some(s) = stack.pop() {
            for &t in &below[s] {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// `le[p]` holds every state `r` with `r ⪯ p`.
    pub fn support_preorder(&self) -> Vec<BTreeSet<StateId>> {
        (0..self.len()).map(|q| self.support(q)).collect()
    }

    /// Whether `set` contains the support of each of its members.
    pub fn is_support_closed(&self, set: &BTreeSet<StateId>) -> bool {
        let below = self.below();
        set.iter().all(|q| below[*q].is_subset(set))
    }

    /// Whether no fork branch can reach back to the state that forked it.
    pub fn is_fork_acyclic(&self) -> bool {
        let le = self.support_preorder();
        self.gamma()
            .all(|(q, fork, _)| fork.iter().all(|r| !le[*r].contains(q)))
    }

    fn strictly_below(le: &[BTreeSet<StateId>], r: StateId, q: StateId) -> bool {
        le[q].contains(&r) && !le[r].contains(&q)
    }

    /// States whose forks may spawn a copy of themselves, in a controlled way.
    pub fn is_recursive(&self, q: StateId) -> bool {
        let le = self.support_preorder();
        self.recursive_with(&le, q)
    }

    fn recursive_with(&self, le: &[BTreeSet<StateId>], q: StateId) -> bool {
        let lt = |r: StateId| Self::strictly_below(le, r, q);
        if !self.delta().filter(|t| t.0 == q).all(|t| lt(t.2)) {
            return false;
        }
        for (fork, target) in self.forks_from(q) {
            if !lt(target) {
                return false;
            }
            let selfs = fork.iter().filter(|r| **r == q).count();
            let rest_ok = fork.iter().filter(|r| **r != q).all(|r| lt(*r));
            let ok = match selfs {
                0 => rest_ok,
                1 => rest_ok && self.has_no_transitions(target),
                _ => false,
            };
            if !ok {
                return false;
            }
        }
        self.eta()
            .filter(|(_, from, _)| *from == q)
            .all(|(join, _, _)| join.iter().all(|r| Self::strictly_below(le, q, *r)))
    }

    /// States whose fork branches all lie strictly below them.
    pub fn is_progressive(&self, q: StateId) -> bool {
        let le = self.support_preorder();
        self.progressive_with(&le, q)
    }

    fn progressive_with(&self, le: &[BTreeSet<StateId>], q: StateId) -> bool {
        self.forks_from(q)
            .iter()
            .all(|(fork, _)| fork.iter().all(|r| Self::strictly_below(le, *r, q)))
    }

    /// Every state is recursive or progressive.
    pub fn is_well_nested(&self) -> bool {
        let le = self.support_preorder();
        (0..self.len()).all(|q| self.recursive_with(&le, q) || self.progressive_with(&le, q))
    }

    /// Non-accepting states without outgoing transitions.
    pub fn deadlock_states(&self) -> BTreeSet<StateId> {
        (0..self.len())
            .filter(|q| !self.is_final(*q) && self.has_no_transitions(*q))
            .collect()
    }

    /// The sub-automaton on a support-closed set of states.
    pub fn restrict(&self, keep: &BTreeSet<StateId>) -> Result<PomsetAutomaton> {
        if keep.iter().any(|q| *q >= self.len()) || !self.is_support_closed(keep) {
            return Err(Error::Precondition(
                "state set is not support-closed".into(),
            ));
        }
        let mut out = PomsetAutomaton::new();
        let map: Vec<Option<StateId>> = (0..self.len())
            .map(|q| keep.contains(&q).then(|| out.add_state(self.name(q))))
            .collect();
        let m = |q: &StateId| map[*q].expect("closed");
        let inside = |q: &StateId| map[*q].is_some();
        for q in keep {
            if self.is_final(*q) {
                out.set_final(m(q));
            }
        }
        for (q, a, r) in self.delta().filter(|t| inside(&t.0)) {
            out.add_delta(m(q), a.clone(), m(r));
        }
        for (q, fork, r) in self.gamma().filter(|t| inside(&t.0)) {
            out.add_gamma(m(q), fork.iter().map(m).collect(), m(r));
        }
        for (join, q, r) in self
            .eta()
            .filter(|t| inside(&t.1) && t.0.iter().all(inside))
        {
            out.add_eta(join.iter().map(m).collect(), m(q), m(r));
        }
        Ok(out)
    }
}
