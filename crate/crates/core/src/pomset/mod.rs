//! Finite labelled posets with communications and their canonical forms.
//!
//! Events are numbered `0..n`. The execution order is stored as a
//! transitively closed strict order; the communication relation is stored
//! as a symmetric irreflexive relation. Both are kept as one `u64` bit row
//! per event, which caps pomsets at 64 events.

mod canon;
mod enumerate;
mod json;
mod structure;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::ActionSymbol;

pub use enumerate::{all_scp, all_sp};
pub use json::{language_from_json, language_to_json, pomset_from_json, pomset_to_json};
pub use structure::{subsumes, sync_translate};

/// Maximum number of events a pomset may carry.
pub const MAX_EVENTS: usize = 64;

#[inline]
pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        bit(n) - 1
    }
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// A concrete labelled poset with communications (not yet quotiented by isomorphism).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelledPosetC {
    labels: Vec<ActionSymbol>,
    exec: Vec<u64>,
    comm: Vec<u64>,
}

impl LabelledPosetC {
    /// Builds a poset from labels and edge lists. The execution order is
    /// transitively closed; communication edges are symmetrized.
    pub fn new(
        labels: Vec<ActionSymbol>,
        exec_edges: &[(usize, usize)],
        comm_edges: &[(usize, usize)],
    ) -> Result<Self> {
        let n = labels.len();
        if n > MAX_EVENTS {
            return Err(Error::Structural(format!(
                "{n} events exceed the limit of {MAX_EVENTS}"
            )));
        }
        let mut exec = vec![0u64; n];
        let mut comm = vec![0u64; n];
        for &(i, j) in exec_edges {
            if i >= n || j >= n {
                return Err(Error::Structural(format!(
                    "edge ({i},{j}) refers to a missing event"
                )));
            }
            exec[i] |= bit(j);
        }
        for &(i, j) in comm_edges {
            if i >= n || j >= n {
                return Err(Error::Structural(format!(
                    "edge ({i},{j}) refers to a missing event"
                )));
            }
            if i == j {
                return Err(Error::Structural(format!(
                    "reflexive communication edge on {i}"
                )));
            }
            comm[i] |= bit(j);
            comm[j] |= bit(i);
        }
        Self::from_rows(labels, exec, comm)
    }

    /// Builds from raw rows, closing the execution order and validating invariants.
    pub(crate) fn from_rows(
        labels: Vec<ActionSymbol>,
        mut exec: Vec<u64>,
        comm: Vec<u64>,
    ) -> Result<Self> {
        let n = labels.len();
        close(&mut exec);
        for i in 0..n {
            if exec[i] & bit(i) != 0 {
                return Err(Error::Structural("cycle in the execution order".into()));
            }
        }
        for i in 0..n {
            for j in bits(comm[i]) {
                if exec[i] & bit(j) != 0 || exec[j] & bit(i) != 0 {
                    return Err(Error::Structural(format!(
                        "events {i} and {j} are related by both orders"
                    )));
                }
            }
        }
        Ok(LabelledPosetC { labels, exec, comm })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[ActionSymbol] {
        &self.labels
    }

    pub fn exec(&self, i: usize, j: usize) -> bool {
        self.exec[i] & bit(j) != 0
    }

    pub fn comm(&self, i: usize, j: usize) -> bool {
        self.comm[i] & bit(j) != 0
    }

    pub fn canonicalize(&self) -> Pomsetc {
        canon::canonicalize(&self.labels, &self.exec, &self.comm)
    }
}

/// Warshall closure on bit rows.
fn close(rows: &mut [u64]) {
    let n = rows.len();
    for k in 0..n {
        let rk = rows[k];
        for i in 0..n {
            if rows[i] & bit(k) != 0 {
                rows[i] |= rk;
            }
        }
    }
}

/// Canonicalizes a labelled poset.
pub fn canonicalize(lp: &LabelledPosetC) -> Pomsetc {
    lp.canonicalize()
}

/// Decides isomorphism of two labelled posets.
pub fn isomorphic(u: &LabelledPosetC, v: &LabelledPosetC) -> bool {
    u.len() == v.len() && u.canonicalize() == v.canonicalize()
}

/// An isomorphism class of labelled posets, stored as its canonical representative.
///
/// Ordering is by event count first, then by the canonical encoding.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pomsetc {
    labels: Vec<ActionSymbol>,
    exec: Vec<u64>,
    comm: Vec<u64>,
}

impl Ord for Pomsetc {
    fn cmp(&self, other: &Self) -> Ordering {
        self.labels
            .len()
            .cmp(&other.labels.len())
            .then_with(|| self.labels.cmp(&other.labels))
            .then_with(|| self.exec.cmp(&other.exec))
            .then_with(|| self.comm.cmp(&other.comm))
    }
}

impl PartialOrd for Pomsetc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Pomsetc {
    /// The empty pomset `1`.
    pub fn empty() -> Self {
        Pomsetc {
            labels: vec![],
            exec: vec![],
            comm: vec![],
        }
    }

    /// A single event.
    pub fn primitive(sym: ActionSymbol) -> Self {
        Pomsetc {
            labels: vec![sym],
            exec: vec![0],
            comm: vec![0],
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[ActionSymbol] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &ActionSymbol {
        &self.labels[i]
    }

    pub fn exec(&self, i: usize, j: usize) -> bool {
        self.exec[i] & bit(j) != 0
    }

    pub fn comm(&self, i: usize, j: usize) -> bool {
        self.comm[i] & bit(j) != 0
    }

    pub(crate) fn exec_rows(&self) -> &[u64] {
        &self.exec
    }

    pub(crate) fn comm_rows(&self) -> &[u64] {
        &self.comm
    }

    pub fn has_comm_edges(&self) -> bool {
        self.comm.iter().any(|&r| r != 0)
    }

    /// Number of execution pairs.
    pub fn exec_count(&self) -> usize {
        self.exec.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Number of unordered communication pairs.
    pub fn comm_count(&self) -> usize {
        self.comm
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// The representative as a concrete labelled poset.
    pub fn to_poset(&self) -> LabelledPosetC {
        LabelledPosetC {
            labels: self.labels.clone(),
            exec: self.exec.clone(),
            comm: self.comm.clone(),
        }
    }

    /// Execution edges in covering (Hasse) form.
    pub fn exec_covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = vec![];
        for i in 0..n {
            let mut below_succ = 0u64;
            for j in bits(self.exec[i]) {
                below_succ |= self.exec[j];
            }
            for j in bits(self.exec[i] & !below_succ) {
                out.push((i, j));
            }
        }
        out
    }

    /// Unordered communication pairs `(i, j)` with `i < j`.
    pub fn comm_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for i in 0..self.len() {
            for j in bits(self.comm[i]) {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Induced sub-pomset on the events in `mask`.
    pub(crate) fn restrict(&self, mask: u64) -> Pomsetc {
        let idx: Vec<usize> = bits(mask).collect();
        if idx.len() == self.len() {
            return self.clone();
        }
        let mut pos = [usize::MAX; 64];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let remap = |row: u64| -> u64 {
            let mut r = 0;
            for j in bits(row & mask) {
                r |= bit(pos[j]);
            }
            r
        };
        let labels: Vec<ActionSymbol> = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let exec = idx.iter().map(|&i| remap(self.exec[i])).collect::<Vec<_>>();
        let comm = idx.iter().map(|&i| remap(self.comm[i])).collect::<Vec<_>>();
        canon::canonicalize(&labels, &exec, &comm)
    }
}

fn disjoint_union(u: &Pomsetc, v: &Pomsetc) -> (Vec<ActionSymbol>, Vec<u64>, Vec<u64>, u64, u64) {
    let nu = u.len();
    let nv = v.len();
    assert!(
        nu + nv <= MAX_EVENTS,
        "pomset composition exceeds {MAX_EVENTS} events"
    );
    let mut labels = u.labels.clone();
    labels.extend(v.labels.iter().cloned());
    let mut exec = u.exec.clone();
    exec.extend(v.exec.iter().map(|r| r << nu));
    let mut comm = u.comm.clone();
    comm.extend(v.comm.iter().map(|r| r << nu));
    let um = full_mask(nu);
    let vm = full_mask(nu + nv) & !um;
    (labels, exec, comm, um, vm)
}

/// Sequential composition: every event of `u` precedes every event of `v`.
pub fn compose_seq(u: &Pomsetc, v: &Pomsetc) -> Pomsetc {
    if u.is_empty() {
        return v.clone();
    }
    if v.is_empty() {
        return u.clone();
    }
    let (labels, mut exec, comm, um, vm) = disjoint_union(u, v);
    for i in bits(um) {
        exec[i] |= vm;
    }
    canon::canonicalize(&labels, &exec, &comm)
}

/// Parallel composition: disjoint union without cross edges.
pub fn compose_par(u: &Pomsetc, v: &Pomsetc) -> Pomsetc {
    if u.is_empty() {
        return v.clone();
    }
    if v.is_empty() {
        return u.clone();
    }
    let (labels, exec, comm, _, _) = disjoint_union(u, v);
    canon::canonicalize(&labels, &exec, &comm)
}

/// Communication composition: every event of `u` communicates with every event of `v`.
pub fn compose_comm(u: &Pomsetc, v: &Pomsetc) -> Pomsetc {
    if u.is_empty() {
        return v.clone();
    }
    if v.is_empty() {
        return u.clone();
    }
    let (labels, exec, mut comm, um, vm) = disjoint_union(u, v);
    for i in bits(um) {
        comm[i] |= vm;
    }
    for j in bits(vm) {
        comm[j] |= um;
    }
    canon::canonicalize(&labels, &exec, &comm)
}

/// Concurrent composition: the parallel and the communicating variant.
pub fn compose_conc(u: &Pomsetc, v: &Pomsetc) -> Vec<Pomsetc> {
    let p = compose_par(u, v);
    let c = compose_comm(u, v);
    if p == c {
        vec![p]
    } else {
        let mut out = vec![p, c];
        out.sort();
        out
    }
}

impl fmt::Display for Pomsetc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        write!(f, "[")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}:{l}")?;
        }
        for (i, j) in self.exec_covers() {
            write!(f, " {i}<{j}")?;
        }
        for (i, j) in self.comm_pairs() {
            write!(f, " {i}~{j}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Pomsetc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
