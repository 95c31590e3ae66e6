//! History-preserving bisimulation by search over pairs of runs.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::causal::{CausalStep, Event, Node};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::pomset::{bit, bits};
use crate::symbol::CommTable;

/// Replaces every star by its unrolling to at most `depth` iterations.
pub fn unroll(x: &Expr, depth: usize) -> Expr {
    match x {
        Expr::Zero | Expr::One | Expr::Act(_) => x.clone(),
        Expr::Star(y) | Expr::ParStar(y) => {
            let body = unroll(y, depth);
            let mut acc = Expr::One;
            for _ in 0..depth {
                let more = match x {
                    Expr::Star(_) => Expr::seq(body.clone(), acc),
                    _ => Expr::par(body.clone(), acc),
                };
                acc = Expr::alt(Expr::One, more);
            }
            acc
        }
        _ => {
            let (op, l, r) = x.as_binary().expect("binary");
            Expr::binary(op, unroll(l, depth), unroll(r, depth))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub(crate) struct Pair {
    pub left: (Node, Vec<Event>),
    pub right: (Node, Vec<Event>),
    /// Image in the right run of each left event.
    pub iso: Vec<usize>,
}

pub(crate) struct Search<'a> {
    table: &'a CommTable,
    simulation: bool,
    /// Runs with at least this many events are not explored further.
    horizon: Option<usize>,
    memo: HashMap<Arc<Pair>, bool>,
    /// Matched successor pairs of each related pair.
    pub children: HashMap<Arc<Pair>, Vec<Arc<Pair>>>,
}

fn map_mask(m: u64, iso: &[usize]) -> u64 {
    bits(m).fold(0, |acc, i| acc | bit(iso[i]))
}

/// Label-preserving bijections between the new events of two steps that
/// respect the history already matched by `iso`.
fn bijections(a: &[Event], b: &[Event], iso: &[usize], base: usize) -> Vec<Vec<usize>> {
    fn go(
        a: &[Event],
        b: &[Event],
        iso: &[usize],
        base: usize,
        used: u64,
        acc: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = acc.len();
        if i == a.len() {
            out.push(acc.clone());
            return;
        }
        for j in 0..b.len() {
            if used & bit(j) == 0
                && a[i].label == b[j].label
                && map_mask(a[i].before, iso) == b[j].before
            {
                acc.push(base + j);
                go(a, b, iso, base, used | bit(j), acc, out);
                acc.pop();
            }
        }
    }
    let mut out = vec![];
    if a.len() == b.len() {
        go(a, b, iso, base, 0, &mut vec![], &mut out);
    }
    out
}

impl<'a> Search<'a> {
    pub fn new(table: &'a CommTable, simulation: bool) -> Self {
        Search {
            table,
            simulation,
            horizon: None,
            memo: HashMap::new(),
            children: HashMap::new(),
        }
    }

    pub fn with_horizon(mut self, events: usize) -> Self {
        self.horizon = Some(events);
        self
    }

    pub fn root(x: &Expr, y: &Expr) -> Arc<Pair> {
        Arc::new(Pair {
            left: (Node::start(x), vec![]),
            right: (Node::start(y), vec![]),
            iso: vec![],
        })
    }

    fn successor(p: &Pair, s1: &CausalStep, s2: &CausalStep, g: &[usize]) -> Arc<Pair> {
        let mut h1 = p.left.1.clone();
        h1.extend(s1.events.iter().cloned());
        let mut h2 = p.right.1.clone();
        h2.extend(s2.events.iter().cloned());
        let mut iso = p.iso.clone();
        iso.extend_from_slice(g);
        Arc::new(Pair {
            left: (s1.next.clone(), h1),
            right: (s2.next.clone(), h2),
            iso,
        })
    }

    /// Finds a matching move for `s1` among `other`; `flip` swaps the roles of the runs.
    fn answer(
        &mut self,
        p: &Pair,
        s1: &CausalStep,
        other: &[CausalStep],
        flip: bool,
    ) -> Result<Option<Arc<Pair>>> {
        let base = p.left.1.len();
        for s2 in other {
            if s1.label.actions() != s2.label.actions() {
                continue;
            }
            let cands = if flip {
                let inv = invert(&p.iso);
                bijections(&s1.events, &s2.events, &inv, base)
            } else {
                bijections(&s1.events, &s2.events, &p.iso, base)
            };
            for g in cands {
                let next = if flip {
                    // g maps right events to left ones; store its inverse
                    let mut inv = vec![0; g.len()];
                    for (k, &img) in g.iter().enumerate() {
                        inv[img - base] = base + k;
                    }
                    Self::successor(p, s2, s1, &inv)
                } else {
                    Self::successor(p, s1, s2, &g)
                };
                if self.related(&next)? {
                    return Ok(Some(next));
                }
            }
        }
        Ok(None)
    }

    pub fn related(&mut self, p: &Arc<Pair>) -> Result<bool> {
        if let Some(&r) = self.memo.get(p) {
            return Ok(r);
        }
        let (t1, t2) = (p.left.0.terminates(), p.right.0.terminates());
        let term_ok = if self.simulation { !t1 || t2 } else { t1 == t2 };
        let mut kids = vec![];
        let mut ok = term_ok;
        let open = self.horizon.is_none_or(|h| p.left.1.len() < h);
        if ok && open {
            let s1 = p.left.0.steps(&p.left.1, self.table)?;
            let s2 = p.right.0.steps(&p.right.1, self.table)?;
            for a in &s1 {
                match self.answer(p, a, &s2, false)? {
                    Some(k) => kids.push(k),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && !self.simulation {
                for b in &s2 {
                    match self.answer(p, b, &s1, true)? {
                        Some(k) => kids.push(k),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
            }
        }
        self.memo.insert(p.clone(), ok);
        if ok {
            self.children.insert(p.clone(), kids);
        }
        Ok(ok)
    }

    /// Pairs reachable from `root` through matched moves.
    pub fn witness(&self, root: &Arc<Pair>) -> BTreeSet<Arc<Pair>> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![root.clone()];
        while let Some(p) = stack.pop() {
            if seen.insert(p.clone()) {
                stack.extend(self.children.get(&p).into_iter().flatten().cloned());
            }
        }
        seen
    }
}

fn invert(iso: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; iso.len()];
    for (i, &j) in iso.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Whether `iso` is a label- and order-preserving bijection between the histories.
pub(crate) fn is_isomorphism(p: &Pair) -> bool {
    let (h1, h2) = (&p.left.1, &p.right.1);
    h1.len() == h2.len()
        && p.iso.len() == h1.len()
        && p.iso.iter().all(|&j| j < h2.len())
        && p.iso.iter().collect::<BTreeSet<_>>().len() == h1.len()
        && h1.iter().enumerate().all(|(i, e)| {
            h2[p.iso[i]].label == e.label && map_mask(e.before, &p.iso) == h2[p.iso[i]].before
        })
}

/// Whether `child` extends `parent`: same earlier events, same matching on them.
pub(crate) fn extends(child: &Pair, parent: &Pair) -> bool {
    let k = parent.iso.len();
    child.iso.len() >= k
        && child.left.1[..k] == parent.left.1[..]
        && child.right.1[..k] == parent.right.1[..]
        && child.iso[..k] == parent.iso[..]
}

pub(crate) fn require_finite(
    x: &Expr,
    y: &Expr,
    unroll_depth: Option<usize>,
) -> Result<(Expr, Expr)> {
    match unroll_depth {
        Some(d) => Ok((unroll(x, d), unroll(y, d))),
        None if x.has_star() || y.has_star() => Err(Error::UnsupportedInput(
            "starred expressions need an unrolling depth for history-preserving checks".into(),
        )),
        None => Ok((x.clone(), y.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn hp(x: &str, y: &str) -> bool {
        let t = CommTable::total();
        let mut s = Search::new(&t, false);
        s.related(&Search::root(&parse(x).unwrap(), &parse(y).unwrap()))
            .unwrap()
    }

    #[test]
    fn examples() {
        assert!(hp("a||b", "a||b"));
        assert!(hp("a||b", "b||a"));
        assert!(!hp("a.(b+c)", "a.b+a.c"));
        assert!(hp("a.(b||c)", "a.(c||b)"));
        assert!(!hp("(a.b)||c", "(a||c).b"));
    }

    #[test]
    fn unrolling() {
        let x = unroll(&parse("a*").unwrap(), 2);
        assert_eq!(x, parse("1+a.(1+a.1)").unwrap());
        assert!(!x.has_star());
    }
}
