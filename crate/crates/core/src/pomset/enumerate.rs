//! Exhaustive generation of small series-(communication-)parallel pomsets.

use std::collections::BTreeSet;

use super::{compose_comm, compose_par, compose_seq, Pomsetc};
use crate::symbol::ActionSymbol;

fn generate(alphabet: &[ActionSymbol], n: usize, with_comm: bool) -> BTreeSet<Pomsetc> {
    let mut levels: Vec<Vec<Pomsetc>> = vec![vec![Pomsetc::empty()]];
    if n >= 1 {
        levels.push(
            alphabet
                .iter()
                .cloned()
                .map(Pomsetc::primitive)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        );
    }
    for k in 2..=n {
        let mut level = BTreeSet::new();
        for i in 1..k {
            let j = k - i;
            for u in &levels[i] {
                for v in &levels[j] {
                    level.insert(compose_seq(u, v));
                    if i <= j {
                        level.insert(compose_par(u, v));
                        if with_comm {
                            level.insert(compose_comm(u, v));
                        }
                    }
                }
            }
        }
        levels.push(level.into_iter().collect());
    }
    levels.into_iter().flatten().collect()
}

/// All series-parallel pomsets (no communication) with at most `n` events.
pub fn all_sp(alphabet: &[ActionSymbol], n: usize) -> BTreeSet<Pomsetc> {
    generate(alphabet, n, false)
}

/// All series-communication-parallel pomsets with at most `n` events.
pub fn all_scp(alphabet: &[ActionSymbol], n: usize) -> BTreeSet<Pomsetc> {
    generate(alphabet, n, true)
}
