//! Canonical labelling by colour refinement with individualization.
//!
//! Colours are assigned from sorted signatures, so they are invariant under
//! isomorphism. When refinement stalls, the first non-singleton cell is
//! split by individualizing each of its members in turn and the smallest
//! resulting encoding wins. Cells whose members have identical
//! neighbourhoods are interchangeable, so only one member is tried.

use super::{bit, bits, Pomsetc};
use crate::symbol::ActionSymbol;

struct Graph<'a> {
    labels: &'a [ActionSymbol],
    succ: &'a [u64],
    pred: Vec<u64>,
    comm: &'a [u64],
}

pub(crate) fn canonicalize(labels: &[ActionSymbol], exec: &[u64], comm: &[u64]) -> Pomsetc {
    let n = labels.len();
    if n <= 1 {
        return Pomsetc {
            labels: labels.to_vec(),
            exec: exec.to_vec(),
            comm: comm.to_vec(),
        };
    }
    let mut pred = vec![0u64; n];
    for i in 0..n {
        for j in bits(exec[i]) {
            pred[j] |= bit(i);
        }
    }
    let g = Graph {
        labels,
        succ: exec,
        pred,
        comm,
    };

    let mut sorted: Vec<&ActionSymbol> = labels.iter().collect();
    sorted.sort();
    sorted.dedup();
    let colors: Vec<u32> = labels
        .iter()
        .map(|l| sorted.binary_search(&l).unwrap() as u32)
        .collect();

    let mut best: Option<Pomsetc> = None;
    search(&g, colors, &mut best);
    best.unwrap()
}

fn refine(g: &Graph, colors: &mut Vec<u32>) {
    let n = colors.len();
    let mut count = distinct(colors);
    loop {
        let sigs: Vec<(u32, Vec<u32>, Vec<u32>, Vec<u32>)> = (0..n)
            .map(|v| {
                let collect = |row: u64| {
                    let mut c: Vec<u32> = bits(row).map(|u| colors[u]).collect();
                    c.sort_unstable();
                    c
                };
                (
                    colors[v],
                    collect(g.succ[v]),
                    collect(g.pred[v]),
                    collect(g.comm[v]),
                )
            })
            .collect();
        let mut uniq: Vec<&(u32, Vec<u32>, Vec<u32>, Vec<u32>)> = sigs.iter().collect();
        uniq.sort();
        uniq.dedup();
        let new: Vec<u32> = sigs
            .iter()
            .map(|s| uniq.binary_search(&s).unwrap() as u32)
            .collect();
        let c = uniq.len();
        *colors = new;
        if c == count {
            return;
        }
        count = c;
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(g: &Graph, mut colors: Vec<u32>, best: &mut Option<Pomsetc>) {
    refine(g, &mut colors);
    let n = colors.len();
    // Find the first non-singleton cell in colour order.
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c as usize] += 1;
    }
    let target = (0..n).find(|&c| counts[c] > 1);
    let Some(target) = target else {
        let enc = encode(g, &colors);
        if best.as_ref().is_none_or(|b| enc < *b) {
            *best = Some(enc);
        }
        return;
    };
    let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target as u32).collect();
    let first = cell[0];
    let interchangeable = cell.iter().all(|&v| {
        g.succ[v] == g.succ[first] && g.pred[v] == g.pred[first] && g.comm[v] == g.comm[first]
    });
    let candidates: &[usize] = if interchangeable { &cell[..1] } else { &cell };
    for &v in candidates {
        let mut next: Vec<u32> = colors.iter().map(|&c| 2 * c + 1).collect();
        next[v] = 2 * target as u32;
        search(g, next, best);
    }
}

fn encode(g: &Graph, colors: &[u32]) -> Pomsetc {
    let n = colors.len();
    // colors form a permutation after a discrete refinement
    let mut order = vec![0usize; n];
    for v in 0..n {
        order[colors[v] as usize] = v;
    }
    let pos: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
    let remap = |row: u64| -> u64 {
        let mut r = 0;
        for j in bits(row) {
            r |= bit(pos[j]);
        }
        r
    };
    Pomsetc {
        labels: order.iter().map(|&v| g.labels[v].clone()).collect(),
        exec: order.iter().map(|&v| remap(g.succ[v])).collect(),
        comm: order.iter().map(|&v| remap(g.comm[v])).collect(),
    }
}
