//! Factorizations, structural predicates, subsumption and communication merging.

use super::{bit, bits, canon, full_mask, Pomsetc};
use crate::error::{Error, Result};
use crate::symbol::{ActionSymbol, CommTable};

impl Pomsetc {
    pub(crate) fn pred_rows(&self) -> Vec<u64> {
        let n = self.len();
        let mut pred = vec![0u64; n];
        for i in 0..n {
            for j in bits(self.exec_rows()[i]) {
                pred[j] |= bit(i);
            }
        }
        pred
    }

    /// Connected components of the graph on `mask` given by `nbrs`.
    fn components(mask: u64, nbrs: impl Fn(usize) -> u64) -> Vec<u64> {
        let mut left = mask;
        let mut out = vec![];
        while left != 0 {
            let start = left.trailing_zeros() as usize;
            let mut comp = bit(start);
            let mut frontier = bit(start);
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= nbrs(v) & mask;
                }
                frontier = next & !comp;
                comp |= next;
            }
            left &= !comp;
            out.push(comp);
        }
        out
    }

    /// Components with no edge of either kind between them.
    pub(crate) fn par_components(&self, mask: u64, pred: &[u64]) -> Vec<u64> {
        Self::components(mask, |v| {
            self.exec_rows()[v] | pred[v] | self.comm_rows()[v]
        })
    }

    /// Components of the execution-incomparability graph, in execution order.
    /// Returns `None` if they are not linearly ordered with all cross pairs related.
    pub(crate) fn seq_components(&self, mask: u64, pred: &[u64]) -> Option<Vec<u64>> {
        let comps = Self::components(mask, |v| !(self.exec_rows()[v] | pred[v]) & !bit(v));
        if comps.len() <= 1 {
            return Some(comps);
        }
        let mut keyed: Vec<(u32, u64)> = comps
            .iter()
            .map(|&c| {
                let v = c.trailing_zeros() as usize;
                ((pred[v] & mask & !c).count_ones(), c)
            })
            .collect();
        keyed.sort_unstable();
        let ordered: Vec<u64> = keyed.into_iter().map(|(_, c)| c).collect();
        let mut before = 0u64;
        for &c in &ordered {
            for v in bits(c) {
                if pred[v] & mask & !c != before {
                    return None;
                }
            }
            before |= c;
        }
        Some(ordered)
    }

    /// Components of the non-communication graph.
    pub(crate) fn comm_components(&self, mask: u64) -> Vec<u64> {
        Self::components(mask, |v| !self.comm_rows()[v] & !bit(v))
    }

    fn scp_mask(&self, mask: u64, pred: &[u64]) -> bool {
        if mask.count_ones() <= 1 {
            return true;
        }
        let pc = self.par_components(mask, pred);
        if pc.len() > 1 {
            return pc.iter().all(|&c| self.scp_mask(c, pred));
        }
        match self.seq_components(mask, pred) {
            None => return false,
            Some(sc) if sc.len() > 1 => return sc.iter().all(|&c| self.scp_mask(c, pred)),
            _ => {}
        }
        let cc = self.comm_components(mask);
        if cc.len() > 1 {
            return cc.iter().all(|&c| self.scp_mask(c, pred));
        }
        false
    }

    /// Whether the pomset is built from primitives by sequential, parallel
    /// and communication composition.
    pub fn is_scp(&self) -> bool {
        let pred = self.pred_rows();
        self.scp_mask(full_mask(self.len()), &pred)
    }

    fn require_scp(&self) -> Result<Vec<u64>> {
        if self.is_scp() {
            Ok(self.pred_rows())
        } else {
            Err(Error::NotScp(self.to_string()))
        }
    }

    /// The unique maximal sequential factorization into non-sequential factors.
    pub fn seq_factorize(&self) -> Result<Vec<Pomsetc>> {
        let pred = self.require_scp()?;
        if self.is_empty() {
            return Ok(vec![]);
        }
        let comps = self
            .seq_components(full_mask(self.len()), &pred)
            .expect("SCP pomset");
        Ok(comps.into_iter().map(|c| self.restrict(c)).collect())
    }

    /// The unique parallel factorization into non-parallel factors, sorted.
    pub fn par_factorize(&self) -> Result<Vec<Pomsetc>> {
        let pred = self.require_scp()?;
        let mut out: Vec<Pomsetc> = self
            .par_components(full_mask(self.len()), &pred)
            .into_iter()
            .map(|c| self.restrict(c))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Whether no four events form an N over the union of both relations.
    pub fn is_n_free(&self) -> bool {
        let n = self.len();
        let rel = |u: usize, v: usize| self.exec(u, v) || self.comm(u, v);
        for u0 in 0..n {
            for u1 in 0..n {
                if u1 == u0 || !rel(u0, u1) {
                    continue;
                }
                for u3 in 0..n {
                    if u3 == u0 || u3 == u1 || !rel(u0, u3) {
                        continue;
                    }
                    for u2 in 0..n {
                        if u2 == u0 || u2 == u1 || u2 == u3 || !rel(u2, u3) {
                            continue;
                        }
                        let q = [u0, u1, u2, u3];
                        let mut count = 0;
                        for &x in &q {
                            for &y in &q {
                                if x != y && rel(x, y) {
                                    count += 1;
                                }
                            }
                        }
                        if count == 3 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Size of the largest set of pairwise execution-incomparable events.
    pub fn width(&self) -> usize {
        // Dilworth: n minus a maximum matching in the comparability bipartite graph.
        let n = self.len();
        let mut match_right = vec![usize::MAX; n];
        fn augment(u: usize, rows: &[u64], seen: &mut u64, match_right: &mut [usize]) -> bool {
            for v in bits(rows[u]) {
                if *seen & bit(v) != 0 {
                    continue;
                }
                *seen |= bit(v);
                if match_right[v] == usize::MAX || augment(match_right[v], rows, seen, match_right)
                {
                    match_right[v] = u;
                    return true;
                }
            }
            false
        }
        let mut matching = 0;
        for u in 0..n {
            let mut seen = 0u64;
            if augment(u, self.exec_rows(), &mut seen, &mut match_right) {
                matching += 1;
            }
        }
        n - matching
    }

    /// Nesting depth of the factorization; primitives and `1` have depth 0.
    pub fn depth(&self) -> Result<usize> {
        let pred = self.require_scp()?;
        Ok(self.depth_mask(full_mask(self.len()), &pred))
    }

    fn depth_mask(&self, mask: u64, pred: &[u64]) -> usize {
        if mask.count_ones() <= 1 {
            return 0;
        }
        let mut parts = self.seq_components(mask, pred).unwrap_or_default();
        if parts.len() <= 1 {
            parts = self.par_components(mask, pred);
        }
        if parts.len() <= 1 {
            parts = self.comm_components(mask);
        }
        1 + parts
            .iter()
            .map(|&c| self.depth_mask(c, pred))
            .max()
            .unwrap_or(0)
    }

    /// `self ⊑ v`: some label-preserving bijection from `v` onto `self` maps
    /// every execution pair of `v` to one of `self` and matches the
    /// communication relations exactly.
    pub fn subsumed_by(&self, v: &Pomsetc) -> bool {
        subsumes(self, v)
    }
}

/// `u ⊑ v`: `u` has the same events as `v` with at least its execution order
/// and exactly its communication pairs.
pub fn subsumes(u: &Pomsetc, v: &Pomsetc) -> bool {
    let n = u.len();
    if n != v.len() || u.exec_count() < v.exec_count() || u.comm_count() != v.comm_count() {
        return false;
    }
    let mut lu = u.labels().to_vec();
    let mut lv = v.labels().to_vec();
    lu.sort();
    lv.sort();
    if lu != lv {
        return false;
    }
    let mut h = vec![usize::MAX; n];
    let mut used = 0u64;
    assign(u, v, 0, &mut h, &mut used)
}

fn assign(u: &Pomsetc, v: &Pomsetc, x: usize, h: &mut [usize], used: &mut u64) -> bool {
    let n = v.len();
    if x == n {
        return true;
    }
    for cand in 0..n {
        if *used & bit(cand) != 0 || u.label(cand) != v.label(x) {
            continue;
        }
        let ok = (0..x).all(|y| {
            let hy = h[y];
            (!v.exec(y, x) || u.exec(hy, cand))
                && (!v.exec(x, y) || u.exec(cand, hy))
                && (v.comm(x, y) == u.comm(cand, hy))
        });
        if !ok {
            continue;
        }
        h[x] = cand;
        *used |= bit(cand);
        if assign(u, v, x + 1, h, used) {
            return true;
        }
        *used &= !bit(cand);
    }
    false
}

/// Merges every communicating pair into a single event labelled with their
/// communication action.
pub fn sync_translate(u: &Pomsetc, table: &CommTable) -> Result<Pomsetc> {
    let n = u.len();
    let mut partner = vec![usize::MAX; n];
    for i in 0..n {
        let row = u.comm_rows()[i];
        if row.count_ones() > 1 {
            return Err(Error::Ambiguity(i));
        }
        if row != 0 {
            partner[i] = row.trailing_zeros() as usize;
        }
    }
    if partner.iter().all(|&p| p == usize::MAX) {
        return Ok(u.clone());
    }
    // new index for each old event
    let mut newidx = vec![usize::MAX; n];
    let mut labels: Vec<ActionSymbol> = vec![];
    for i in 0..n {
        if newidx[i] != usize::MAX {
            continue;
        }
        let p = partner[i];
        if p == usize::MAX {
            newidx[i] = labels.len();
            labels.push(u.label(i).clone());
        } else {
            let (a, b) = match (u.label(i), u.label(p)) {
                (ActionSymbol::Base(a), ActionSymbol::Base(b)) => (a.clone(), b.clone()),
                (x, y) => return Err(Error::CommTable(x.to_string(), y.to_string())),
            };
            let sym = table.symbol(&a, &b)?;
            newidx[i] = labels.len();
            newidx[p] = labels.len();
            labels.push(sym);
        }
    }
    let m = labels.len();
    let mut exec = vec![0u64; m];
    for i in 0..n {
        for j in bits(u.exec_rows()[i]) {
            exec[newidx[i]] |= bit(newidx[j]);
        }
    }
    let lp = super::LabelledPosetC::from_rows(labels, exec, vec![0u64; m])?;
    Ok(canon::canonicalize(&lp.labels, &lp.exec, &lp.comm))
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::super::*;
    use super::*;

    fn n_shape() -> Pomsetc {
        lp(&["a", "b", "c", "d"], &[(0, 1), (2, 3), (0, 3)], &[]).canonicalize()
    }

    #[test]
    fn seq_factorization_examples() {
        let abc = seq(&[act("a"), act("b"), act("c")]);
        assert_eq!(
            abc.seq_factorize().unwrap(),
            vec![act("a"), act("b"), act("c")]
        );
        let ab = par(&[act("a"), act("b")]);
        assert_eq!(ab.seq_factorize().unwrap(), vec![ab.clone()]);
        assert!(Pomsetc::empty().seq_factorize().unwrap().is_empty());
        assert!(n_shape().seq_factorize().is_err());
    }

    #[test]
    fn par_factorization_examples() {
        let abc = par(&[act("a"), act("b"), act("c")]);
        assert_eq!(
            abc.par_factorize().unwrap(),
            vec![act("a"), act("b"), act("c")]
        );
        let ab = seq(&[act("a"), act("b")]);
        assert_eq!(ab.par_factorize().unwrap(), vec![ab.clone()]);
        assert_eq!(
            par(&[act("a"), act("a")]).par_factorize().unwrap(),
            vec![act("a"), act("a")]
        );
    }

    #[test]
    fn n_freeness() {
        assert!(!n_shape().is_n_free());
        assert!(!n_shape().is_scp());
        assert!(par(&[seq(&[act("a"), act("b")]), seq(&[act("c"), act("d")])]).is_n_free());
        assert!(seq(&[act("a"), act("b"), act("c")]).is_n_free());
    }

    #[test]
    fn scp_examples() {
        assert!(Pomsetc::empty().is_scp());
        let u = compose_seq(&compose_comm(&act("a"), &act("b")), &act("c"));
        assert!(u.is_scp());
        let partial = lp(&["a", "b", "c"], &[(0, 1)], &[(0, 2)]).canonicalize();
        assert!(!partial.is_scp());
    }

    #[test]
    fn width_and_depth() {
        let abc = par(&[act("a"), act("b"), act("c")]);
        assert_eq!(abc.width(), 3);
        assert_eq!(abc.depth().unwrap(), 1);
        assert_eq!(Pomsetc::empty().width(), 0);
        assert_eq!(Pomsetc::empty().depth().unwrap(), 0);
        assert_eq!(
            par(&[seq(&[act("a"), act("b")]), act("c")])
                .depth()
                .unwrap(),
            2
        );
        assert!(n_shape().depth().is_err());
    }

    #[test]
    fn subsumption_examples() {
        let v = par(&[seq(&[act("a"), act("b")]), seq(&[act("c"), act("d")])]);
        let u = seq(&[par(&[act("a"), act("c")]), par(&[act("b"), act("d")])]);
        assert!(subsumes(&u, &v));
        assert!(!subsumes(&v, &u));
        assert!(subsumes(&v, &v));
        let ab = seq(&[act("a"), act("b")]);
        assert!(!subsumes(&ab, &compose_comm(&act("a"), &act("b"))));
        assert!(!subsumes(
            &compose_comm(&act("a"), &act("b")),
            &par(&[act("a"), act("b")])
        ));
    }

    #[test]
    fn sync_translation() {
        let t = CommTable::total();
        let ab = compose_comm(&act("a"), &act("b"));
        let r = sync_translate(&ab, &t).unwrap();
        assert_eq!(
            r,
            Pomsetc::primitive(ActionSymbol::comm_unchecked("a", "b"))
        );
        let plain = seq(&[act("a"), act("b")]);
        assert_eq!(sync_translate(&plain, &t).unwrap(), plain);
        let amb = compose_comm(&par(&[act("a"), act("b")]), &act("c"));
        assert_eq!(
            sync_translate(&amb, &t),
            Err(Error::Ambiguity(amb_index(&amb)))
        );
        assert!(matches!(
            sync_translate(&ab, &CommTable::empty()),
            Err(Error::CommTable(..))
        ));
    }

    fn amb_index(u: &Pomsetc) -> usize {
        (0..u.len())
            .find(|&i| u.comm_rows()[i].count_ones() > 1)
            .unwrap()
    }

    #[test]
    fn figure_pair_translates_to_five_events() {
        // (a.b.c) || (d.e.f) with b communicating with e
        let x = lp(
            &["a", "b", "c", "d", "e", "f"],
            &[(0, 1), (1, 2), (3, 4), (4, 5)],
            &[(1, 4)],
        )
        .canonicalize();
        let r = sync_translate(&x, &CommTable::total()).unwrap();
        let rho = Pomsetc::primitive(ActionSymbol::comm_unchecked("b", "e"));
        let expected = seq(&[par(&[act("a"), act("d")]), rho, par(&[act("c"), act("f")])]);
        assert_eq!(r, expected);
        assert_eq!(r.len(), 5);
    }
}
