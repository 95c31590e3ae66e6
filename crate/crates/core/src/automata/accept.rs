use std::collections::{BTreeSet, HashMap};

use super::{PomsetAutomaton, StateId};
use crate::error::{Error, Result};
use crate::lang::{par_set, seq_set, PomsetLanguage};
use crate::pomset::{bit, full_mask, Pomsetc};
use crate::symbol::ActionSymbol;

/// Which states each state can reach by a run on a fixed pomset.
type Reach = Vec<BTreeSet<StateId>>;

fn compose(a: &Reach, b: &Reach, into: &mut Reach) {
    for (q, mids) in a.iter().enumerate() {
        for &m in mids {
            into[q].extend(b[m].iter().copied());
        }
    }
}

/// Every way to hand out `parts` items to `slots` positions.
fn assignments(parts: usize, slots: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..parts {
        out = out
            .into_iter()
            .flat_map(|a: Vec<usize>| {
                (0..slots).map(move |s| {
                    let mut b = a.clone();
                    b.push(s);
                    b
                })
            })
            .collect();
    }
    out
}

/// Whether some bijection sends each fork branch `i` to a join state in `ends[i]`.
pub(crate) fn match_join(ends: &[BTreeSet<StateId>], join: &[StateId]) -> bool {
    fn go(i: usize, ends: &[BTreeSet<StateId>], join: &[StateId], used: &mut [bool]) -> bool {
        if i == ends.len() {
            return true;
        }
        for k in 0..join.len() {
            if !used[k] && ends[i].contains(&join[k]) {
                used[k] = true;
                let ok = go(i + 1, ends, join, used);
                used[k] = false;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    ends.len() == join.len() && go(0, ends, join, &mut vec![false; join.len()])
}

/// Distinct orderings of a sorted multiset.
pub(crate) fn permutations(items: &[StateId]) -> Vec<Vec<StateId>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = vec![];
    for i in 0..items.len() {
        if i > 0 && items[i] == items[i - 1] {
            continue;
        }
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

struct Runner<'a> {
    a: &'a PomsetAutomaton,
    delta: Vec<Vec<(ActionSymbol, StateId)>>,
    forks: Vec<(StateId, Vec<StateId>, StateId)>,
    memo: HashMap<Pomsetc, Reach>,
}

impl<'a> Runner<'a> {
    fn new(a: &'a PomsetAutomaton) -> Self {
        let forks = a.gamma().filter(|g| g.1.len() > 1).cloned().collect();
        Runner {
            a,
            delta: a.delta_by_state(),
            forks,
            memo: HashMap::new(),
        }
    }

    /// Least relation closed under the run rules, for runs on `v`.
    fn reach(&mut self, v: &Pomsetc) -> Reach {
        if let Some(r) = self.memo.get(v) {
            return r.clone();
        }
        let n = self.a.len();
        let one = if v.is_empty() {
            None
        } else {
            Some(self.reach(&Pomsetc::empty()))
        };
        let full = full_mask(v.len());
        let pred = v.pred_rows();

        let mut seq_parts = vec![];
        if !v.is_empty() {
            if let Some(factors) = v.seq_components(full, &pred) {
                let mut prefix = 0u64;
                for f in factors.iter().take(factors.len().saturating_sub(1)) {
                    prefix |= f;
                    let (a, b) = (v.restrict(prefix), v.restrict(full & !prefix));
                    seq_parts.push((self.reach(&a), self.reach(&b)));
                }
            }
        }

        let comps = if v.is_empty() {
            vec![]
        } else {
            v.par_components(full, &pred)
        };
        let mut by_mask: HashMap<u64, Reach> = HashMap::new();
        for sub in 0u64..(1u64 << comps.len()) {
            let mask = comps
                .iter()
                .enumerate()
                .filter(|(i, _)| sub & bit(*i) != 0)
                .fold(0, |m, (_, c)| m | c);
            if mask != full && !by_mask.contains_key(&mask) {
                let r = self.reach(&v.restrict(mask));
                by_mask.insert(mask, r);
            }
        }

        let mut r: Reach = vec![BTreeSet::new(); n];
        loop {
            let mut next = r.clone();
            match &one {
                None => {
                    for (q, s) in next.iter_mut().enumerate() {
                        s.insert(q);
                    }
                    compose(&r, &r, &mut next);
                }
                Some(one) => {
                    if v.len() == 1 && !v.has_comm_edges() {
                        for (q, ts) in self.delta.iter().enumerate() {
                            next[q].extend(
                                ts.iter().filter(|(a, _)| a == v.label(0)).map(|(_, t)| *t),
                            );
                        }
                    }
                    for (a, b) in &seq_parts {
                        compose(a, b, &mut next);
                    }
                    compose(one, &r, &mut next);
                    compose(&r, one, &mut next);
                }
            }
            for (q, fork, target) in &self.forks {
                for asg in assignments(comps.len(), fork.len()) {
                    let ends: Vec<&BTreeSet<StateId>> = fork
                        .iter()
                        .enumerate()
                        .map(|(i, branch)| {
                            let mask = asg
                                .iter()
                                .zip(&comps)
                                .filter(|(s, _)| **s == i)
                                .fold(0, |m, (_, c)| m | c);
                            let rel = if mask == full { &r } else { &by_mask[&mask] };
                            &rel[*branch]
                        })
                        .collect();
                    if ends.iter().all(|e| e.iter().any(|s| self.a.is_final(*s))) {
                        next[*q].insert(*target);
                    }
                    let owned: Vec<BTreeSet<StateId>> = ends.into_iter().cloned().collect();
                    for (join, to) in self.a.merges_at(*target) {
                        if match_join(&owned, join) {
                            next[*q].insert(to);
                        }
                    }
                }
            }
            if next == r {
                break;
            }
            r = next;
        }
        self.memo.insert(v.clone(), r.clone());
        r
    }
}

/// Whether `u` has a run from `q` to an accepting state. `u` must not carry
/// communication edges; synchronised events are ordinary labels here.
pub fn accepts(a: &PomsetAutomaton, q: StateId, u: &Pomsetc) -> Result<bool> {
    if u.has_comm_edges() {
        return Err(Error::InputForm(
            "automata read pomsets without communication edges".into(),
        ));
    }
    if q >= a.len() {
        return Err(Error::Precondition(format!("no state {q}")));
    }
    let r = Runner::new(a).reach(u);
    Ok(r[q].iter().any(|s| a.is_final(*s)))
}

type PathTable = Vec<Vec<BTreeSet<Pomsetc>>>;

/// All pomsets of size at most `n` accepted from `q`.
pub fn language_bounded(a: &PomsetAutomaton, q: StateId, n: usize) -> Result<PomsetLanguage> {
    if q >= a.len() {
        return Err(Error::Precondition(format!("no state {q}")));
    }
    let states: Vec<StateId> = a.support(q).into_iter().collect();
    let idx = |s: StateId| states.binary_search(&s).expect("support is closed");
    let k = states.len();
    let bound = Some(n);
    let delta = a.delta_by_state();
    let one: BTreeSet<Pomsetc> = [Pomsetc::empty()].into();
    let to_final = |paths: &PathTable, i: usize| -> BTreeSet<Pomsetc> {
        (0..k)
            .filter(|j| a.is_final(states[*j]))
            .flat_map(|j| paths[i][j].iter().cloned())
            .collect()
    };

    // paths[i][j]: pomsets labelling runs from states[i] to states[j].
    let mut paths: PathTable = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { one.clone() } else { BTreeSet::new() })
                .collect()
        })
        .collect();
    loop {
        let mut units: Vec<Vec<(BTreeSet<Pomsetc>, usize)>> = vec![vec![]; k];
        for (i, &s) in states.iter().enumerate() {
            for (sym, t) in &delta[s] {
                units[i].push(([Pomsetc::primitive(sym.clone())].into(), idx(*t)));
            }
            for (fork, target) in a.forks_from(s) {
                if fork.len() < 2 {
                    continue;
                }
                let branches: Vec<usize> = fork.iter().map(|b| idx(*b)).collect();
                let mut acc = one.clone();
                for &b in &branches {
                    acc = par_set(&acc, &to_final(&paths, b), bound);
                }
                units[i].push((acc, idx(target)));
                for (join, to) in a.merges_at(target) {
                    if join.len() != fork.len() {
                        continue;
                    }
                    for perm in permutations(join) {
                        let mut acc = one.clone();
                        for (b, e) in branches.iter().zip(&perm) {
                            acc = par_set(&acc, &paths[*b][idx(*e)], bound);
                        }
                        units[i].push((acc, idx(to)));
                    }
                }
            }
        }
        let mut next = paths.clone();
        for i in 0..k {
            for (set, m) in &units[i] {
                for j in 0..k {
                    let more = seq_set(set, &paths[*m][j], bound);
                    next[i][j].extend(more);
                }
            }
        }
        if next == paths {
            return Ok(PomsetLanguage::new(to_final(&paths, idx(q)), bound));
        }
        paths = next;
    }
}
