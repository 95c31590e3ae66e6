//! Partition refinement and greatest simulations over labelled graphs.

use std::collections::{BTreeMap, BTreeSet};

/// A finite labelled graph with a termination predicate.
pub(crate) struct Graph<L> {
    pub terminating: Vec<bool>,
    pub succ: Vec<Vec<(L, usize)>>,
}

impl<L: Ord + Clone> Graph<L> {
    /// Disjoint union; states of `other` are shifted by `self.len()`.
    pub fn union(mut self, other: Graph<L>) -> Graph<L> {
        let off = self.terminating.len();
        self.terminating.extend(other.terminating);
        self.succ.extend(
            other
                .succ
                .into_iter()
                .map(|v| v.into_iter().map(|(l, t)| (l, t + off)).collect()),
        );
        self
    }

    pub fn len(&self) -> usize {
        self.terminating.len()
    }
}

/// Block assignments after each refinement round; the last is stable.
pub(crate) struct Refinement {
    pub rounds: Vec<Vec<usize>>,
}

impl Refinement {
    pub fn blocks(&self) -> &[usize] {
        self.rounds.last().expect("at least one round")
    }

    /// First round in which `s` and `t` are separated, if any.
    pub fn separation(&self, s: usize, t: usize) -> Option<usize> {
        self.rounds.iter().position(|r| r[s] != r[t])
    }
}

pub(crate) fn refine<L: Ord + Clone>(g: &Graph<L>) -> Refinement {
    let first: Vec<usize> = g.terminating.iter().map(|&b| usize::from(b)).collect();
    let mut rounds = vec![first];
    loop {
        let prev = rounds.last().expect("non-empty");
        let mut ids: BTreeMap<(usize, BTreeSet<(L, usize)>), usize> = BTreeMap::new();
        let mut next = Vec::with_capacity(g.len());
        for s in 0..g.len() {
            let sig: BTreeSet<(L, usize)> = g.succ[s]
                .iter()
                .map(|(l, t)| (l.clone(), prev[*t]))
                .collect();
            let fresh = ids.len();
            next.push(*ids.entry((prev[s], sig)).or_insert(fresh));
        }
        let before = prev.iter().collect::<BTreeSet<_>>().len();
        let stable = ids.len() == before;
        rounds.push(next);
        if stable {
            return Refinement { rounds };
        }
    }
}

/// A move that cannot be answered, followed until the difference is
/// immediate. Each entry names the side that moves and the label.
pub(crate) fn distinguishing_trace<L: Ord + Clone + ToString>(
    g: &Graph<L>,
    r: &Refinement,
    mut s: usize,
    mut t: usize,
) -> (Vec<String>, String) {
    let mut trace = vec![];
    loop {
        let Some(level) = r.separation(s, t) else {
            return (trace, "states are equivalent".into());
        };
        if level == 0 {
            let who = if g.terminating[s] { "left" } else { "right" };
            return (trace, format!("only the {who} side can terminate"));
        }
        let prev = &r.rounds[level - 1];
        let mut found = None;
        'outer: for (side, a, b) in [("left", s, t), ("right", t, s)] {
            for (l, a2) in &g.succ[a] {
                let answers: Vec<usize> = g.succ[b]
                    .iter()
                    .filter(|(m, _)| m == l)
                    .map(|(_, b2)| *b2)
                    .collect();
                if answers.iter().all(|&b2| prev[b2] != prev[*a2]) {
                    found = Some((side, l.clone(), *a2, answers));
                    break 'outer;
                }
            }
        }
        let (side, label, a2, answers) = found.expect("separated states differ in signature");
        trace.push(format!("{side} {}", label.to_string()));
        // follow the answer that survived refinement longest
        let Some(b2) = answers
            .into_iter()
            .max_by_key(|&b2| r.separation(a2, b2).unwrap_or(usize::MAX))
        else {
            let other = if side == "left" { "right" } else { "left" };
            return (trace, format!("the {other} side has no matching move"));
        };
        if side == "left" {
            s = a2;
            t = b2;
        } else {
            s = b2;
            t = a2;
        }
    }
}

/// Greatest simulation `rel[s][t]`: `t` can match every move of `s`, and
/// terminates whenever `s` does.
pub(crate) fn greatest_simulation<L: Ord + Clone>(g: &Graph<L>) -> Vec<Vec<bool>> {
    let n = g.len();
    let mut rel: Vec<Vec<bool>> = (0..n)
        .map(|s| {
            (0..n)
                .map(|t| !g.terminating[s] || g.terminating[t])
                .collect()
        })
        .collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            for t in 0..n {
                if !rel[s][t] {
                    continue;
                }
                let ok = g.succ[s]
                    .iter()
                    .all(|(l, s2)| g.succ[t].iter().any(|(m, t2)| m == l && rel[*s2][*t2]));
                if !ok {
                    rel[s][t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

/// Checks that `pairs` is a bisimulation between the states they mention.
pub(crate) fn is_bisimulation<L: Ord + Clone>(
    g: &Graph<L>,
    pairs: &BTreeSet<(usize, usize)>,
) -> bool {
    pairs.iter().all(|&(s, t)| {
        g.terminating[s] == g.terminating[t]
            && g.succ[s].iter().all(|(l, s2)| {
                g.succ[t]
                    .iter()
                    .any(|(m, t2)| m == l && pairs.contains(&(*s2, *t2)))
            })
            && g.succ[t].iter().all(|(m, t2)| {
                g.succ[s]
                    .iter()
                    .any(|(l, s2)| m == l && pairs.contains(&(*s2, *t2)))
            })
    })
}
