//! Finite pomset languages and their compositions.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::exchange::Hypothesis;
use crate::expr::denote_bounded;
use crate::pomset::{
    bit, bits, compose_comm, compose_par, compose_seq, full_mask, LabelledPosetC, Pomsetc,
};
use crate::symbol::ActionSymbol;

/// A finite set of pomsets, optionally recording the event bound used to
/// truncate an infinite language.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PomsetLanguage {
    members: BTreeSet<Pomsetc>,
    bound: Option<usize>,
}

/// Pointwise composition operators on languages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LangOp {
    Union,
    Seq,
    Par,
    Comm,
    Conc,
}

impl PomsetLanguage {
    pub fn new(members: impl IntoIterator<Item = Pomsetc>, bound: Option<usize>) -> Self {
        let members = members
            .into_iter()
            .filter(|u| bound.is_none_or(|n| u.len() <= n))
            .collect();
        PomsetLanguage { members, bound }
    }

    pub fn empty(bound: Option<usize>) -> Self {
        PomsetLanguage {
            members: BTreeSet::new(),
            bound,
        }
    }

    pub fn one(bound: Option<usize>) -> Self {
        Self::new([Pomsetc::empty()], bound)
    }

    pub fn members(&self) -> &BTreeSet<Pomsetc> {
        &self.members
    }

    pub fn into_members(self) -> BTreeSet<Pomsetc> {
        self.members
    }

    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: &Pomsetc) -> bool {
        self.members.contains(u)
    }

    pub fn contains_one(&self) -> bool {
        self.members.contains(&Pomsetc::empty())
    }

    /// Members with at most `n` events.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(
            self.members.iter().cloned(),
            Some(self.bound.map_or(n, |b| b.min(n))),
        )
    }
}

fn min_bound(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Groups members by event count so bounded products skip oversized pairs.
fn by_size(k: &BTreeSet<Pomsetc>) -> Vec<Vec<&Pomsetc>> {
    let max = k.iter().map(Pomsetc::len).max().unwrap_or(0);
    let mut out = vec![vec![]; max + 1];
    for v in k {
        out[v.len()].push(v);
    }
    out
}

pub(crate) fn product(
    l: &BTreeSet<Pomsetc>,
    k: &BTreeSet<Pomsetc>,
    n: Option<usize>,
    mut f: impl FnMut(&Pomsetc, &Pomsetc, &mut BTreeSet<Pomsetc>),
) -> BTreeSet<Pomsetc> {
    let groups = by_size(k);
    let mut out = BTreeSet::new();
    for u in l {
        let room = n.map_or(usize::MAX, |n| n.saturating_sub(u.len()));
        if n.is_some_and(|n| u.len() > n) {
            continue;
        }
        for g in groups.iter().take(room.saturating_add(1).min(groups.len())) {
            for v in g {
                f(u, v, &mut out);
            }
        }
    }
    out
}

pub(crate) fn seq_set(
    l: &BTreeSet<Pomsetc>,
    k: &BTreeSet<Pomsetc>,
    n: Option<usize>,
) -> BTreeSet<Pomsetc> {
    product(l, k, n, |u, v, out| {
        out.insert(compose_seq(u, v));
    })
}

pub(crate) fn par_set(
    l: &BTreeSet<Pomsetc>,
    k: &BTreeSet<Pomsetc>,
    n: Option<usize>,
) -> BTreeSet<Pomsetc> {
    product(l, k, n, |u, v, out| {
        out.insert(compose_par(u, v));
    })
}

/// Communication composition; pairs with an empty operand are excluded.
pub(crate) fn comm_set(
    l: &BTreeSet<Pomsetc>,
    k: &BTreeSet<Pomsetc>,
    n: Option<usize>,
) -> BTreeSet<Pomsetc> {
    product(l, k, n, |u, v, out| {
        if !u.is_empty() && !v.is_empty() {
            out.insert(compose_comm(u, v));
        }
    })
}

pub(crate) fn conc_set(
    l: &BTreeSet<Pomsetc>,
    k: &BTreeSet<Pomsetc>,
    n: Option<usize>,
) -> BTreeSet<Pomsetc> {
    product(l, k, n, |u, v, out| {
        out.insert(compose_par(u, v));
        if !u.is_empty() && !v.is_empty() {
            out.insert(compose_comm(u, v));
        }
    })
}

/// Pointwise composition of two languages; the bound is the smaller of the two.
pub fn lang_compose(op: LangOp, l: &PomsetLanguage, k: &PomsetLanguage) -> PomsetLanguage {
    let bound = min_bound(l.bound, k.bound);
    let members = match op {
        LangOp::Union => l.members.union(&k.members).cloned().collect(),
        LangOp::Seq => seq_set(&l.members, &k.members, bound),
        LangOp::Par => par_set(&l.members, &k.members, bound),
        LangOp::Comm => comm_set(&l.members, &k.members, bound),
        LangOp::Conc => conc_set(&l.members, &k.members, bound),
    };
    PomsetLanguage::new(members, bound)
}

fn iterate(
    l: &BTreeSet<Pomsetc>,
    n: usize,
    step: fn(&Pomsetc, &Pomsetc) -> Pomsetc,
) -> BTreeSet<Pomsetc> {
    let body: BTreeSet<Pomsetc> = l
        .iter()
        .filter(|u| !u.is_empty() && u.len() <= n)
        .cloned()
        .collect();
    let mut result = BTreeSet::from([Pomsetc::empty()]);
    let mut frontier = result.clone();
    while !frontier.is_empty() {
        let grown = product(&frontier, &body, Some(n), |u, v, out| {
            out.insert(step(u, v));
        });
        frontier = grown.into_iter().filter(|u| !result.contains(u)).collect();
        result.extend(frontier.iter().cloned());
    }
    result
}

/// Members of the Kleene star with at most `n` events.
pub fn lang_star_bounded(l: &PomsetLanguage, n: usize) -> PomsetLanguage {
    PomsetLanguage::new(iterate(&l.members, n, compose_seq), Some(n))
}

/// Members of the parallel star with at most `n` events.
pub fn lang_parstar_bounded(l: &PomsetLanguage, n: usize) -> PomsetLanguage {
    PomsetLanguage::new(iterate(&l.members, n, compose_par), Some(n))
}

type Rel = (Vec<u64>, Vec<u64>);

/// All series-communication-parallel refinements of `v`: same events, at
/// least its execution order, exactly its communication pairs.
pub fn scp_extensions(v: &Pomsetc) -> BTreeSet<Pomsetc> {
    let n = v.len();
    if n == 0 {
        return BTreeSet::from([Pomsetc::empty()]);
    }
    let mut memo: HashMap<u64, Vec<Rel>> = HashMap::new();
    let rels = extend(v, full_mask(n), &mut memo);
    rels.iter()
        .filter_map(|(e, c)| {
            LabelledPosetC::from_rows(v.labels().to_vec(), e.clone(), c.clone()).ok()
        })
        .map(|lp| lp.canonicalize())
        .collect()
}

fn extend(v: &Pomsetc, mask: u64, memo: &mut HashMap<u64, Vec<Rel>>) -> Vec<Rel> {
    if let Some(r) = memo.get(&mask) {
        return r.clone();
    }
    let n = v.len();
    let mut out: BTreeSet<Rel> = BTreeSet::new();
    if mask.count_ones() == 1 {
        out.insert((vec![0; n], vec![0; n]));
    } else {
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        // enumerate proper non-empty subsets `a` of `mask`
        let mut sub = rest;
        loop {
            let a_with_low = sub | low;
            for a in [a_with_low, mask & !a_with_low] {
                let b = mask & !a;
                if a == 0 || b == 0 {
                    continue;
                }
                let exec_ab = bits(a).any(|i| v.exec_rows()[i] & b != 0);
                let exec_ba = bits(b).any(|i| v.exec_rows()[i] & a != 0);
                let comm_cross: u32 = bits(a).map(|i| (v.comm_rows()[i] & b).count_ones()).sum();
                let full_comm = comm_cross == a.count_ones() * b.count_ones();
                let is_first = a & low != 0;
                // sequential: a before b
                if !exec_ba && comm_cross == 0 {
                    combine(v, a, b, memo, &mut out, |e, _c| {
                        for i in bits(a) {
                            e[i] |= b;
                        }
                    });
                }
                // unordered splits counted once
                if is_first && !exec_ab && !exec_ba {
                    if comm_cross == 0 {
                        combine(v, a, b, memo, &mut out, |_e, _c| {});
                    }
                    if full_comm {
                        combine(v, a, b, memo, &mut out, |_e, c| {
                            for i in bits(a) {
                                c[i] |= b;
                            }
                            for j in bits(b) {
                                c[j] |= a;
                            }
                        });
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let out: Vec<Rel> = out.into_iter().collect();
    memo.insert(mask, out.clone());
    out
}

fn combine(
    v: &Pomsetc,
    a: u64,
    b: u64,
    memo: &mut HashMap<u64, Vec<Rel>>,
    out: &mut BTreeSet<Rel>,
    cross: impl Fn(&mut Vec<u64>, &mut Vec<u64>),
) {
    let ra = extend(v, a, memo);
    let rb = extend(v, b, memo);
    for (ea, ca) in &ra {
        for (eb, cb) in &rb {
            let mut e: Vec<u64> = ea.iter().zip(eb).map(|(x, y)| x | y).collect();
            let mut c: Vec<u64> = ca.iter().zip(cb).map(|(x, y)| x | y).collect();
            cross(&mut e, &mut c);
            out.insert((e, c));
        }
    }
}

/// Downward closure under subsumption, restricted to series-communication-parallel pomsets.
pub fn subsumption_closure(l: &PomsetLanguage) -> PomsetLanguage {
    let mut members = BTreeSet::new();
    for v in &l.members {
        members.extend(scp_extensions(v));
    }
    PomsetLanguage::new(members, l.bound)
}

/// Closure of a language under grounded hypotheses `lhs <= a1...ak`:
/// whenever a member contains an occurrence of the word `a1...ak` as a
/// replaceable block, every lhs member may be substituted for it.
pub fn h_closure_bounded(
    l: &PomsetLanguage,
    hyps: &[Hypothesis],
    n: usize,
) -> Result<PomsetLanguage> {
    let mut rules = vec![];
    for h in hyps {
        let word = h
            .grounded_word()
            .ok_or_else(|| Error::UnsupportedHypothesis(h.to_string()))?;
        let lhs = denote_bounded(&h.lhs, n)?.into_members();
        rules.push((lhs, word));
    }
    let mut result: BTreeSet<Pomsetc> =
        l.members.iter().filter(|u| u.len() <= n).cloned().collect();
    let mut work: Vec<Pomsetc> = result.iter().cloned().collect();
    while let Some(w) = work.pop() {
        for (lhs, word) in &rules {
            for occ in occurrences(&w, word) {
                for x in lhs {
                    if w.len() - word.len() + x.len() > n {
                        continue;
                    }
                    let r = plug(&w, occ, x);
                    if result.insert(r.clone()) {
                        work.push(r);
                    }
                }
            }
        }
    }
    Ok(PomsetLanguage::new(result, Some(n)))
}

/// Event sets of `w` forming the chain `word` whose events relate uniformly to all other events.
fn occurrences(w: &Pomsetc, word: &[ActionSymbol]) -> Vec<u64> {
    let mut out = vec![];
    fn go(w: &Pomsetc, word: &[ActionSymbol], chosen: &mut Vec<usize>, out: &mut Vec<u64>) {
        let k = chosen.len();
        if k == word.len() {
            let s: u64 = chosen.iter().map(|&i| bit(i)).sum();
            if is_module(w, s) {
                out.push(s);
            }
            return;
        }
        for e in 0..w.len() {
            if w.label(e) != &word[k]
                || w.comm_rows()[e] & chosen.iter().map(|&i| bit(i)).sum::<u64>() != 0
            {
                continue;
            }
            if let Some(&last) = chosen.last() {
                if !w.exec(last, e) {
                    continue;
                }
            } else if chosen.contains(&e) {
                continue;
            }
            chosen.push(e);
            go(w, word, chosen, out);
            chosen.pop();
        }
    }
    go(w, word, &mut vec![], &mut out);
    out
}

fn is_module(w: &Pomsetc, s: u64) -> bool {
    let n = w.len();
    let outside = full_mask(n) & !s;
    for o in bits(outside) {
        let succ = w.exec_rows()[o] & s;
        let comm = w.comm_rows()[o] & s;
        let pred = bits(s)
            .filter(|&i| w.exec(i, o))
            .fold(0u64, |m, i| m | bit(i));
        for r in [succ, comm, pred] {
            if r != 0 && r != s {
                return false;
            }
        }
    }
    true
}

/// Replaces the block `s` of `w` by `x`.
fn plug(w: &Pomsetc, s: u64, x: &Pomsetc) -> Pomsetc {
    let n = w.len();
    let keep: Vec<usize> = bits(full_mask(n) & !s).collect();
    let rep = s.trailing_zeros() as usize;
    let m = keep.len();
    let total = m + x.len();
    let mut labels: Vec<ActionSymbol> = keep.iter().map(|&i| w.label(i).clone()).collect();
    labels.extend(x.labels().iter().cloned());
    let mut exec = vec![0u64; total];
    let mut comm = vec![0u64; total];
    let xmask = full_mask(total) & !full_mask(m);
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            if w.exec(i, j) {
                exec[a] |= bit(b);
            }
            if w.comm(i, j) {
                comm[a] |= bit(b);
            }
        }
        if w.exec(i, rep) {
            exec[a] |= xmask;
        }
        if w.exec(rep, i) {
            for k in 0..x.len() {
                exec[m + k] |= bit(a);
            }
        }
        if w.comm(i, rep) {
            comm[a] |= xmask;
            for k in 0..x.len() {
                comm[m + k] |= bit(a);
            }
        }
    }
    for k in 0..x.len() {
        exec[m + k] |= x.exec_rows()[k] << m;
        comm[m + k] |= x.comm_rows()[k] << m;
    }
    LabelledPosetC::from_rows(labels, exec, comm)
        .expect("plugging into a module preserves the order")
        .canonicalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pomset::testutil::*;

    fn lang(ms: &[Pomsetc]) -> PomsetLanguage {
        PomsetLanguage::new(ms.iter().cloned(), None)
    }

    #[test]
    fn compose_examples() {
        let a = lang(&[act("a")]);
        let b = lang(&[act("b")]);
        assert_eq!(
            lang_compose(LangOp::Seq, &a, &b).members(),
            lang(&[seq(&[act("a"), act("b")])]).members()
        );
        assert!(lang_compose(LangOp::Comm, &a, &PomsetLanguage::one(None)).is_empty());
        let c = lang_compose(LangOp::Conc, &a, &b);
        assert_eq!(c.len(), 2);
        assert!(c.contains(&par(&[act("a"), act("b")])));
        assert_eq!(
            lang_compose(LangOp::Seq, &a.truncate(3), &b.truncate(1)).bound(),
            Some(1)
        );
    }

    #[test]
    fn star_examples() {
        let a = lang(&[act("a")]);
        let s = lang_star_bounded(&a, 3);
        let expect: BTreeSet<Pomsetc> = (0..=3).map(|k| seq(&vec![act("a"); k])).collect();
        assert_eq!(s.members(), &expect);
        assert_eq!(
            lang_star_bounded(&lang(&[]), 4).members(),
            PomsetLanguage::one(None).members()
        );
        assert_eq!(
            lang_star_bounded(&PomsetLanguage::one(None), 4).members(),
            PomsetLanguage::one(None).members()
        );
    }

    #[test]
    fn parstar_examples() {
        let a = lang(&[act("a")]);
        let expect: BTreeSet<Pomsetc> = (0..=3).map(|k| par(&vec![act("a"); k])).collect();
        assert_eq!(lang_parstar_bounded(&a, 3).members(), &expect);
        let ab = seq(&[act("a"), act("b")]);
        let got = lang_parstar_bounded(&lang(std::slice::from_ref(&ab)), 4);
        let expect: BTreeSet<Pomsetc> =
            [Pomsetc::empty(), ab.clone(), par(&[ab.clone(), ab])].into();
        assert_eq!(got.members(), &expect);
    }

    #[test]
    fn closure_examples() {
        assert_eq!(
            subsumption_closure(&lang(&[act("a")])).members(),
            lang(&[act("a")]).members()
        );
        let ab = par(&[act("a"), act("b")]);
        let expect: BTreeSet<Pomsetc> = [
            ab.clone(),
            seq(&[act("a"), act("b")]),
            seq(&[act("b"), act("a")]),
        ]
        .into();
        assert_eq!(subsumption_closure(&lang(&[ab])).members(), &expect);
        let v = par(&[seq(&[act("a"), act("b")]), seq(&[act("c"), act("d")])]);
        let u = seq(&[par(&[act("a"), act("c")]), par(&[act("b"), act("d")])]);
        assert!(subsumption_closure(&lang(&[v])).contains(&u));
    }

    #[test]
    fn closure_matches_brute_force_on_small_posets() {
        // every SCP pomset over the same labels that is subsumed, found by scanning all of them
        let alphabet = [ActionSymbol::base("a"), ActionSymbol::base("b")];
        let all = crate::pomset::all_scp(&alphabet, 4);
        for v in all.iter().filter(|v| v.len() == 4).take(60) {
            let fast = scp_extensions(v);
            let slow: BTreeSet<Pomsetc> = all
                .iter()
                .filter(|u| crate::pomset::subsumes(u, v))
                .cloned()
                .collect();
            assert_eq!(fast, slow, "extensions of {v}");
        }
    }

    #[test]
    fn hypothesis_closure_examples() {
        use crate::expr::parse;
        let h = |l: &str, r: &str| Hypothesis::new(parse(l).unwrap(), parse(r).unwrap());
        let l = lang(&[seq(&[act("c"), act("a"), act("d")])]);
        assert_eq!(
            h_closure_bounded(&l, &[], 5).unwrap().members(),
            l.members()
        );
        let got = h_closure_bounded(&lang(&[act("b")]), &[h("a", "b")], 3).unwrap();
        assert_eq!(got.members(), lang(&[act("a"), act("b")]).members());
        let got = h_closure_bounded(&l, &[h("a.a", "a")], 5).unwrap();
        let expect: BTreeSet<Pomsetc> = (1..=3)
            .map(|k| {
                let mut v = vec![act("c")];
                v.extend(vec![act("a"); k]);
                v.push(act("d"));
                seq(&v)
            })
            .collect();
        assert_eq!(got.members(), &expect);
        assert!(matches!(
            h_closure_bounded(&l, &[h("a", "a+b")], 5),
            Err(Error::UnsupportedHypothesis(_))
        ));
    }

    #[test]
    fn hypothesis_rewrites_only_whole_blocks() {
        use crate::expr::parse;
        // `b` in a.(b||c) is a block, `a.b` is not since c sits beside b only
        let h = |l: &str, r: &str| Hypothesis::new(parse(l).unwrap(), parse(r).unwrap());
        let u = seq(&[act("a"), par(&[act("b"), act("c")])]);
        let got = h_closure_bounded(&lang(std::slice::from_ref(&u)), &[h("e", "a.b")], 4).unwrap();
        assert_eq!(got.members(), lang(std::slice::from_ref(&u)).members());
        let got = h_closure_bounded(&lang(&[u]), &[h("e.f", "b")], 4).unwrap();
        assert!(got.contains(&seq(&[
            act("a"),
            par(&[seq(&[act("e"), act("f")]), act("c")])
        ])));
    }
}
