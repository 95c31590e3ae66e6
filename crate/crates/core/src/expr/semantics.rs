//! Bounded language semantics and membership.

use std::collections::{BTreeSet, HashMap};

use super::Expr;
use crate::error::{Error, Result};
use crate::lang::{
    comm_set, conc_set, lang_parstar_bounded, lang_star_bounded, par_set, seq_set, PomsetLanguage,
};
use crate::pomset::{bits, full_mask, Pomsetc};
use crate::symbol::{ActionSymbol, CommTable};

fn reject_left_merge(x: &Expr) -> Result<()> {
    if x.contains_op(super::BinOp::LeftMerge) {
        Err(Error::UnsupportedOperator(
            "left merge has no language semantics".into(),
        ))
    } else {
        Ok(())
    }
}

/// Members of the language of `x` with at most `n` events.
pub fn denote_bounded(x: &Expr, n: usize) -> Result<PomsetLanguage> {
    reject_left_merge(x)?;
    Ok(PomsetLanguage::new(denote(x, n, None), Some(n)))
}

/// Bounded language in which communication merges each pair of single
/// actions into one event labelled by their communication symbol, when the
/// table defines it. Other operators act as in [`denote_bounded`]. The result
/// consists of the translatable images of the ordinary language.
pub fn denote_sync_bounded(x: &Expr, n: usize, table: &CommTable) -> Result<PomsetLanguage> {
    reject_left_merge(x)?;
    Ok(PomsetLanguage::new(denote(x, n, Some(table)), Some(n)))
}

fn sync_singles(
    l: &BTreeSet<Pomsetc>,
    k: &BTreeSet<Pomsetc>,
    table: &CommTable,
) -> BTreeSet<Pomsetc> {
    let singles = |s: &BTreeSet<Pomsetc>| -> Vec<std::sync::Arc<str>> {
        s.iter()
            .filter(|u| u.len() == 1)
            .filter_map(|u| match u.label(0) {
                ActionSymbol::Base(a) => Some(a.clone()),
                ActionSymbol::Comm(..) => None,
            })
            .collect()
    };
    let mut out = BTreeSet::new();
    for a in singles(l) {
        for b in singles(k) {
            if let Ok(sym) = table.symbol(&a, &b) {
                out.insert(Pomsetc::primitive(sym));
            }
        }
    }
    out
}

fn denote(x: &Expr, n: usize, sync: Option<&CommTable>) -> BTreeSet<Pomsetc> {
    Denoter {
        n,
        sync,
        memo: HashMap::new(),
    }
    .eval(x)
}

/// Evaluation memoized by node address, so shared subterms are computed once.
struct Denoter<'a> {
    n: usize,
    sync: Option<&'a CommTable>,
    memo: HashMap<usize, BTreeSet<Pomsetc>>,
}

impl Denoter<'_> {
    fn eval(&mut self, x: &Expr) -> BTreeSet<Pomsetc> {
        let key = x as *const Expr as usize;
        if let Some(s) = self.memo.get(&key) {
            return s.clone();
        }
        let s = self.compute(x);
        if !matches!(x, Expr::Zero | Expr::One | Expr::Act(_)) {
            self.memo.insert(key, s.clone());
        }
        s
    }

    fn compute(&mut self, x: &Expr) -> BTreeSet<Pomsetc> {
        let (n, sync) = (self.n, self.sync);
        let b = Some(n);
        match x {
            Expr::Zero => BTreeSet::new(),
            Expr::One => BTreeSet::from([Pomsetc::empty()]),
            Expr::Act(a) => {
                if n >= 1 {
                    BTreeSet::from([Pomsetc::primitive(a.clone())])
                } else {
                    BTreeSet::new()
                }
            }
            Expr::Alt(l, r) => {
                let mut s = self.eval(l);
                s.extend(self.eval(r));
                s
            }
            Expr::Seq(l, r) => seq_set(&self.eval(l), &self.eval(r), b),
            Expr::Par(l, r) => par_set(&self.eval(l), &self.eval(r), b),
            Expr::CommMerge(l, r) => {
                let (dl, dr) = (self.eval(l), self.eval(r));
                match sync {
                    None => comm_set(&dl, &dr, b),
                    Some(t) if n >= 1 => sync_singles(&dl, &dr, t),
                    Some(_) => BTreeSet::new(),
                }
            }
            Expr::Conc(l, r) => {
                let (dl, dr) = (self.eval(l), self.eval(r));
                match sync {
                    None => conc_set(&dl, &dr, b),
                    Some(t) => {
                        let mut s = par_set(&dl, &dr, b);
                        if n >= 1 {
                            s.extend(sync_singles(&dl, &dr, t));
                        }
                        s
                    }
                }
            }
            Expr::Star(y) => {
                lang_star_bounded(&PomsetLanguage::new(self.eval(y), b), n).into_members()
            }
            Expr::ParStar(y) => {
                lang_parstar_bounded(&PomsetLanguage::new(self.eval(y), b), n).into_members()
            }
            Expr::LeftMerge(..) => unreachable!("rejected before evaluation"),
        }
    }
}

/// Bounded language equality.
pub fn lang_equiv_bounded(x: &Expr, y: &Expr, n: usize) -> Result<bool> {
    Ok(denote_bounded(x, n)?.members() == denote_bounded(y, n)?.members())
}

/// Whether `u` belongs to the language of `x`, decided by recursion over
/// factorizations of `u`.
pub fn member(x: &Expr, u: &Pomsetc) -> Result<bool> {
    reject_left_merge(x)?;
    Ok(Membership::default().check(x, u))
}

#[derive(Default)]
struct Membership {
    memo: HashMap<(usize, Pomsetc), bool>,
}

impl Membership {
    fn check(&mut self, x: &Expr, u: &Pomsetc) -> bool {
        let key = (x as *const Expr as usize, u.clone());
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = self.decide(x, u);
        self.memo.insert(key, r);
        r
    }

    fn decide(&mut self, x: &Expr, u: &Pomsetc) -> bool {
        let full = full_mask(u.len());
        match x {
            Expr::Zero => false,
            Expr::One => u.is_empty(),
            Expr::Act(a) => u.len() == 1 && u.label(0) == a,
            Expr::Alt(l, r) => self.check(l, u) || self.check(r, u),
            Expr::Seq(l, r) => {
                let factors = seq_factors(u);
                (0..=factors.len()).any(|i| {
                    let pre: u64 = factors[..i].iter().fold(0, |m, f| m | f);
                    self.check(l, &u.restrict(pre)) && self.check(r, &u.restrict(full & !pre))
                })
            }
            Expr::Par(l, r) => self.par_split(u, l, r),
            Expr::CommMerge(l, r) => self.comm_split(u, l, r),
            Expr::Conc(l, r) => self.par_split(u, l, r) || self.comm_split(u, l, r),
            Expr::Star(y) => {
                if u.is_empty() {
                    return true;
                }
                let factors = seq_factors(u);
                (1..=factors.len()).any(|i| {
                    let pre: u64 = factors[..i].iter().fold(0, |m, f| m | f);
                    self.check(y, &u.restrict(pre)) && self.check(x, &u.restrict(full & !pre))
                })
            }
            Expr::ParStar(y) => {
                if u.is_empty() {
                    return true;
                }
                let comps = u.par_components(full, &u.pred_rows());
                // the factor holding the first component can be taken first
                let rest = &comps[1..];
                (0..1u64 << rest.len()).any(|s| {
                    let pick = bits(s).fold(comps[0], |m, i| m | rest[i]);
                    self.check(y, &u.restrict(pick)) && self.check(x, &u.restrict(full & !pick))
                })
            }
            Expr::LeftMerge(..) => false,
        }
    }

    fn par_split(&mut self, u: &Pomsetc, l: &Expr, r: &Expr) -> bool {
        let full = full_mask(u.len());
        let comps = u.par_components(full, &u.pred_rows());
        (0..1u64 << comps.len()).any(|s| {
            let pick = bits(s).fold(0, |m, i| m | comps[i]);
            self.check(l, &u.restrict(pick)) && self.check(r, &u.restrict(full & !pick))
        })
    }

    fn comm_split(&mut self, u: &Pomsetc, l: &Expr, r: &Expr) -> bool {
        let full = full_mask(u.len());
        let comps = u.comm_components(full);
        if comps.len() < 2 {
            return false;
        }
        (1..(1u64 << comps.len()) - 1).any(|s| {
            let pick = bits(s).fold(0, |m, i| m | comps[i]);
            self.check(l, &u.restrict(pick)) && self.check(r, &u.restrict(full & !pick))
        })
    }
}

/// Sequential factors as masks in order; a single block when there is no split.
fn seq_factors(u: &Pomsetc) -> Vec<u64> {
    if u.is_empty() {
        return vec![];
    }
    let full = full_mask(u.len());
    u.seq_components(full, &u.pred_rows())
        .unwrap_or_else(|| vec![full])
}
