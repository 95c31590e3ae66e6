//! Parallel and sequential splittings, and the closure of an expression
//! under the exchange laws.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::automata::{solve_linear_system, LinearSystem};
use crate::error::{Error, Result};
use crate::expr::smart::{cat, comm, par, star, sum, sum_all};
use crate::expr::{denote_bounded, Expr};

/// Which splitting relation produced a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SplitKind {
    /// `left ∥ right` lies below the source.
    Parallel,
    /// `left · right` lies below the source, up to the exchange laws.
    Sequential,
}

/// One splitting `(left, right)` of `source`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplitPair {
    pub left: Expr,
    pub right: Expr,
    pub kind: SplitKind,
    pub source: Expr,
}

impl fmt::Display for SplitPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            SplitKind::Parallel => "||",
            SplitKind::Sequential => ".",
        };
        write!(
            f,
            "({}) {op} ({}) from {}",
            self.left, self.right, self.source
        )
    }
}

type Pairs = BTreeSet<(Expr, Expr)>;

fn unsupported(x: &Expr) -> Result<()> {
    match x {
        Expr::LeftMerge(..) => Err(Error::UnsupportedOperator(
            "left merge in exchange closure".into(),
        )),
        Expr::ParStar(..) => Err(Error::UnsupportedOperator(
            "parallel star in exchange closure".into(),
        )),
        _ => Ok(()),
    }
}

#[derive(Default)]
struct Closer {
    par_splits: HashMap<Expr, Pairs>,
    seq_splits: HashMap<Expr, Pairs>,
    closures: HashMap<Expr, Expr>,
}

impl Closer {
    /// Pairs `(l, r)` with `l ∥ r` below `x`.
    fn par_split(&mut self, x: &Expr) -> Result<Pairs> {
        if let Some(p) = self.par_splits.get(x) {
            return Ok(p.clone());
        }
        unsupported(x)?;
        let mut out = Pairs::new();
        match x {
            Expr::Zero | Expr::One | Expr::Act(_) | Expr::CommMerge(..) => {}
            Expr::Par(a, b) | Expr::Conc(a, b) => {
                let (a, b) = ((**a).clone(), (**b).clone());
                out.insert((a.clone(), b.clone()));
                let (la, lb) = (self.par_split(&a)?, self.par_split(&b)?);
                for (l, r) in &la {
                    for (l2, r2) in &lb {
                        out.insert((par(l.clone(), l2.clone()), par(r.clone(), r2.clone())));
                    }
                    out.insert((l.clone(), par(r.clone(), b.clone())));
                }
                for (l, r) in &lb {
                    out.insert((par(a.clone(), l.clone()), r.clone()));
                }
            }
            Expr::Alt(a, b) => {
                out = self.par_split(a)?;
                out.extend(self.par_split(b)?);
            }
            Expr::Star(a) => out = self.par_split(a)?,
            Expr::Seq(a, b) => {
                if b.nullable() {
                    out.extend(self.par_split(a)?);
                }
                if a.nullable() {
                    out.extend(self.par_split(b)?);
                }
            }
            Expr::LeftMerge(..) | Expr::ParStar(_) => unreachable!(),
        }
        // Splittings are unordered pairs.
        let flipped: Vec<_> = out.iter().map(|(l, r)| (r.clone(), l.clone())).collect();
        out.extend(flipped);
        self.par_splits.insert(x.clone(), out.clone());
        Ok(out)
    }

    /// Pairs `(l, r)` with `l · r` below the closure of `x`.
    fn seq_split(&mut self, x: &Expr) -> Result<Pairs> {
        if let Some(p) = self.seq_splits.get(x) {
            return Ok(p.clone());
        }
        unsupported(x)?;
        let mut out = Pairs::new();
        match x {
            Expr::Zero => {}
            Expr::One => {
                out.insert((Expr::One, Expr::One));
            }
            Expr::Act(_) => {
                out.insert((x.clone(), Expr::One));
                out.insert((Expr::One, x.clone()));
            }
            Expr::Alt(a, b) => {
                out = self.seq_split(a)?;
                out.extend(self.seq_split(b)?);
            }
            Expr::Seq(a, b) => {
                for (l, r) in self.seq_split(a)? {
                    out.insert((l, cat(r, (**b).clone())));
                }
                for (l, r) in self.seq_split(b)? {
                    out.insert((cat((**a).clone(), l), r));
                }
            }
            Expr::Star(a) => {
                out.insert((Expr::One, Expr::One));
                for (l, r) in self.seq_split(a)? {
                    out.insert((cat(x.clone(), l), cat(r, x.clone())));
                }
            }
            Expr::Par(a, b) | Expr::Conc(a, b) => {
                let (la, lb) = (self.seq_split(a)?, self.seq_split(b)?);
                for (l, r) in &la {
                    for (l2, r2) in &lb {
                        out.insert((par(l.clone(), l2.clone()), par(r.clone(), r2.clone())));
                    }
                }
                if let Expr::Conc(a, b) = x {
                    let c = comm((**a).clone(), (**b).clone());
                    out.insert((c.clone(), Expr::One));
                    out.insert((Expr::One, c));
                }
            }
            Expr::CommMerge(..) => {
                out.insert((x.clone(), Expr::One));
                out.insert((Expr::One, x.clone()));
            }
            Expr::LeftMerge(..) | Expr::ParStar(_) => unreachable!(),
        }
        self.seq_splits.insert(x.clone(), out.clone());
        Ok(out)
    }

    /// Remainders: right-hand sides reachable by repeated sequential splitting.
    fn remainders(&mut self, x: &Expr) -> Result<Vec<Expr>> {
        let mut seen = BTreeSet::from([x.clone()]);
        let mut order = vec![x.clone()];
        let mut i = 0;
        while i < order.len() {
            let y = order[i].clone();
            for (_, r) in self.seq_split(&y)? {
                if seen.insert(r.clone()) {
                    order.push(r);
                }
            }
            i += 1;
        }
        Ok(order)
    }

    /// Sequentially prime part of the closure of `x ∥ y`.
    fn preclosure_par(&mut self, x: &Expr, y: &Expr) -> Result<Expr> {
        let node = par(x.clone(), y.clone());
        let mut splits = self.par_split(&node)?;
        if !matches!(node, Expr::Par(..)) {
            splits.insert((x.clone(), y.clone()));
            splits.insert((y.clone(), x.clone()));
        }
        let mut terms = vec![];
        for (l, r) in splits.into_iter().filter(|(l, r)| l <= r) {
            terms.push(par(self.closure(&l)?, self.closure(&r)?));
        }
        Ok(sum_all(terms))
    }

    /// Closure of `x ∥ y`: least solution over pairs of remainders.
    fn closure_par(&mut self, x: &Expr, y: &Expr) -> Result<Expr> {
        let (rx, ry) = (self.remainders(x)?, self.remainders(y)?);
        let states: Vec<(usize, usize)> = (0..rx.len())
            .flat_map(|i| (0..ry.len()).map(move |j| (i, j)))
            .collect();
        let pos = |z: &Expr, h: &Expr| {
            let i = rx.iter().position(|e| e == z).expect("remainder");
            let j = ry.iter().position(|e| e == h).expect("remainder");
            i * ry.len() + j
        };
        let mut sys = LinearSystem::new(states.len());
        for (k, &(i, j)) in states.iter().enumerate() {
            let (z, h) = (&rx[i], &ry[j]);
            if z.nullable() && h.nullable() {
                sys.constants[k] = Expr::One;
            }
            for (z0, z1) in self.seq_split(z)? {
                for (h0, h1) in self.seq_split(h)? {
                    let step = self.preclosure_par(&z0, &h0)?;
                    let t = pos(&z1, &h1);
                    sys.matrix[k][t] = sum(sys.matrix[k][t].clone(), step);
                }
            }
        }
        Ok(solve_linear_system(&sys, &Expr::One).swap_remove(0))
    }

    fn closure(&mut self, x: &Expr) -> Result<Expr> {
        if let Some(c) = self.closures.get(x) {
            return Ok(c.clone());
        }
        unsupported(x)?;
        let out = match x {
            Expr::Zero | Expr::One | Expr::Act(_) => x.clone(),
            Expr::Alt(a, b) => sum(self.closure(a)?, self.closure(b)?),
            Expr::Seq(a, b) => cat(self.closure(a)?, self.closure(b)?),
            Expr::Star(a) => star(self.closure(a)?),
            Expr::CommMerge(a, b) => comm(self.closure(a)?, self.closure(b)?),
            Expr::Par(a, b) => self.closure_par(a, b)?,
            Expr::Conc(a, b) => {
                let p = self.closure_par(a, b)?;
                sum(p, comm(self.closure(a)?, self.closure(b)?))
            }
            Expr::LeftMerge(..) | Expr::ParStar(_) => unreachable!(),
        };
        self.closures.insert(x.clone(), out.clone());
        Ok(out)
    }
}

fn pairs(x: &Expr, kind: SplitKind, set: Pairs) -> Vec<SplitPair> {
    set.into_iter()
        .map(|(left, right)| SplitPair {
            left,
            right,
            kind,
            source: x.clone(),
        })
        .collect()
}

/// The parallel splittings of `x`: pairs whose parallel composition lies below `x`.
pub fn par_split(x: &Expr) -> Result<Vec<SplitPair>> {
    let set = Closer::default().par_split(x)?;
    Ok(pairs(x, SplitKind::Parallel, set))
}

/// The sequential splittings of `x`: pairs whose sequential composition lies
/// below `x` once the exchange laws are applied.
pub fn seq_split(x: &Expr) -> Result<Vec<SplitPair>> {
    let set = Closer::default().seq_split(x)?;
    Ok(pairs(x, SplitKind::Sequential, set))
}

/// Sequentially prime part of the closure of `x & y`: the closed parallel
/// splittings, with the trivial splitting kept concurrent.
pub fn preclosure(x: &Expr, y: &Expr) -> Result<Expr> {
    let mut c = Closer::default();
    let node = Expr::par(x.clone(), y.clone());
    let mut terms = vec![];
    for (l, r) in c.par_split(&node)?.into_iter().filter(|(l, r)| l <= r) {
        if (&l, &r) == (x, y) || (&l, &r) == (y, x) {
            continue;
        }
        terms.push(par(c.closure(&l)?, c.closure(&r)?));
    }
    let base = Expr::conc(c.closure(x)?, c.closure(y)?);
    Ok(sum(base, sum_all(terms)))
}

/// Closure of `x & y` under the exchange laws.
pub fn closure_conc(x: &Expr, y: &Expr) -> Result<Expr> {
    Closer::default().closure(&Expr::conc(x.clone(), y.clone()))
}

/// An expression denoting every pomset below some pomset of `x`.
pub fn closure(x: &Expr) -> Result<Expr> {
    Closer::default().closure(x)
}

/// Whether the closures of `x` and `y` agree on pomsets of size at most `n`.
pub fn equiv_modulo_exchs_bounded(x: &Expr, y: &Expr, n: usize) -> Result<bool> {
    let (cx, cy) = (closure(x)?, closure(y)?);
    Ok(denote_bounded(&cx, n)? == denote_bounded(&cy, n)?)
}
