use std::collections::{BTreeSet, HashMap};

use super::accept::permutations;
use super::{PomsetAutomaton, StateId};
use crate::error::{Error, Result};
use crate::expr::smart::{cat, par, par_star, star, sum};
use crate::expr::Expr;

/// Equations `s_i = Σ_j matrix[i][j]·s_j + constants[i]` over expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub matrix: Vec<Vec<Expr>>,
    pub constants: Vec<Expr>,
}

impl LinearSystem {
    pub fn new(n: usize) -> Self {
        LinearSystem {
            matrix: vec![vec![Expr::Zero; n]; n],
            constants: vec![Expr::Zero; n],
        }
    }

    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }
}

/// Least solution of `s = M·s + b·e`, by eliminating one unknown at a time.
pub fn solve_linear_system(sys: &LinearSystem, e: &Expr) -> Vec<Expr> {
    let n = sys.len();
    let mut m = sys.matrix.clone();
    let mut b: Vec<Expr> = sys
        .constants
        .iter()
        .map(|c| cat(c.clone(), e.clone()))
        .collect();
    for k in 0..n {
        let loop_k = star(std::mem::replace(&mut m[k][k], Expr::Zero));
        b[k] = cat(loop_k.clone(), b[k].clone());
        for j in 0..n {
            if j != k {
                m[k][j] = cat(loop_k.clone(), m[k][j].clone());
            }
        }
        for i in 0..n {
            if i == k || m[i][k] == Expr::Zero {
                continue;
            }
            let f = std::mem::replace(&mut m[i][k], Expr::Zero);
            b[i] = sum(b[i].clone(), cat(f.clone(), b[k].clone()));
            for j in 0..n {
                if j != k {
                    m[i][j] = sum(m[i][j].clone(), cat(f.clone(), m[k][j].clone()));
                }
            }
        }
    }
    b
}

#[derive(Clone, Debug)]
enum Unit {
    /// A run labelled by the expression, ending in the state.
    Step(Expr, StateId),
    /// A fork where one branch is the state itself: the state's own language
    /// in parallel with the expression, ending in the state.
    SelfFork(Expr, StateId),
}

impl Unit {
    fn target(&self) -> StateId {
        match self {
            Unit::Step(_, t) | Unit::SelfFork(_, t) => *t,
        }
    }
}

struct Solver<'a> {
    a: &'a PomsetAutomaton,
    le: Vec<BTreeSet<StateId>>,
    units: Vec<Option<Vec<Unit>>>,
    memo: HashMap<(StateId, Vec<StateId>), Expr>,
}

impl<'a> Solver<'a> {
    fn below(&self, r: StateId, q: StateId) -> bool {
        self.le[q].contains(&r) && !self.le[r].contains(&q)
    }

    fn finals(&self) -> Vec<StateId> {
        self.a.finals().iter().copied().collect()
    }

    fn units(&mut self, q: StateId) -> Result<Vec<Unit>> {
        if let Some(u) = &self.units[q] {
            return Ok(u.clone());
        }
        let a = self.a;
        let mut out = vec![];
        for (sym, t) in a.delta().filter(|d| d.0 == q).map(|d| (d.1.clone(), d.2)) {
            out.push(Unit::Step(Expr::Act(sym), t));
        }
        let finals = self.finals();
        for (fork, target) in a.forks_from(q) {
            if fork.len() < 2 {
                continue;
            }
            let selfs = fork.iter().filter(|r| **r == q).count();
            let others: Vec<StateId> = fork.iter().copied().filter(|r| *r != q).collect();
            if others.iter().any(|r| !self.below(*r, q)) || selfs > 1 {
                return Err(Error::UnsupportedStructure(format!(
                    "fork at `{}` has a branch that is not below it",
                    a.name(q)
                )));
            }
            let mut rest = Expr::One;
            for r in &others {
                rest = par(rest, self.expr_to(*r, &finals)?);
            }
            if selfs == 1 {
                if !a.has_no_transitions(target) || !a.merges_at(target).is_empty() {
                    return Err(Error::UnsupportedStructure(format!(
                        "fork at `{}` spawns itself and continues",
                        a.name(q)
                    )));
                }
                out.push(Unit::SelfFork(rest, target));
                continue;
            }
            out.push(Unit::Step(rest, target));
            for (join, to) in a.merges_at(target) {
                if join.len() != fork.len() {
                    continue;
                }
                for perm in permutations(join) {
                    let mut e = Expr::One;
                    for (r, end) in fork.iter().zip(&perm) {
                        e = par(e, self.expr_to(*r, &[*end])?);
                    }
                    out.push(Unit::Step(e, to));
                }
            }
        }
        self.units[q] = Some(out.clone());
        Ok(out)
    }

    /// Expression for the pomsets labelling runs from `q` into `targets`.
    fn expr_to(&mut self, q: StateId, targets: &[StateId]) -> Result<Expr> {
        let key = (q, targets.to_vec());
        if let Some(e) = self.memo.get(&key) {
            return Ok(e.clone());
        }
        let states: Vec<StateId> = self.le[q].iter().copied().collect();
        let mut units = HashMap::new();
        for &s in &states {
            units.insert(s, self.units(s)?);
        }
        // Reachability along unit targets, to split into strongly connected parts.
        let reach: HashMap<StateId, BTreeSet<StateId>> = states
            .iter()
            .map(|&s| {
                let mut seen = BTreeSet::from([s]);
                let mut stack = vec![s];
                while let Some(p) = stack.pop() {
                    for u in &units[&p] {
                        if seen.insert(u.target()) {
                            stack.push(u.target());
                        }
                    }
                }
                (s, seen)
            })
            .collect();
        let mut solved: HashMap<StateId, Expr> = HashMap::new();
        let mut pending: BTreeSet<StateId> = states.iter().copied().collect();
        while let Some(&pick) = pending.iter().find(|s| {
            reach[*s]
                .iter()
                .all(|t| solved.contains_key(t) || reach[t].contains(s))
        }) {
            let scc: Vec<StateId> = pending
                .iter()
                .copied()
                .filter(|t| reach[&pick].contains(t) && reach[t].contains(&pick))
                .collect();
            let pos = |s: StateId| scc.iter().position(|t| *t == s);
            let mut sys = LinearSystem::new(scc.len());
            let mut self_forks: Vec<Expr> = vec![Expr::Zero; scc.len()];
            let mut self_targets: Vec<Vec<(Expr, StateId)>> = vec![vec![]; scc.len()];
            for (i, &s) in scc.iter().enumerate() {
                if targets.contains(&s) {
                    sys.constants[i] = Expr::One;
                }
                for u in &units[&s] {
                    match u {
                        Unit::Step(e, t) => match pos(*t) {
                            Some(j) => sys.matrix[i][j] = sum(sys.matrix[i][j].clone(), e.clone()),
                            None => {
                                sys.constants[i] =
                                    sum(sys.constants[i].clone(), cat(e.clone(), solved[t].clone()))
                            }
                        },
                        Unit::SelfFork(e, t) => {
                            if pos(*t).is_some() {
                                return Err(Error::UnsupportedStructure(
                                    "fork target loops back".into(),
                                ));
                            }
                            self_targets[i].push((e.clone(), *t));
                            if solved[t] == Expr::One {
                                self_forks[i] = sum(self_forks[i].clone(), e.clone());
                            } else if solved[t] != Expr::Zero {
                                return Err(Error::UnsupportedStructure(
                                    "fork target loops back".into(),
                                ));
                            }
                        }
                    }
                }
            }
            let has_self = self_targets.iter().any(|v| !v.is_empty());
            if has_self && scc.len() > 1 {
                return Err(Error::UnsupportedStructure(
                    "self-forking state on a cycle".into(),
                ));
            }
            let mut sol = solve_linear_system(&sys, &Expr::One);
            if has_self {
                let finals = self.finals();
                if targets == finals.as_slice() {
                    // s = b + s∥x has least solution x†∥b.
                    sol[0] = par(par_star(self_forks[0].clone()), sol[0].clone());
                } else {
                    let own = self.expr_to(scc[0], &finals)?;
                    for (e, t) in &self_targets[0] {
                        sol[0] = sum(
                            sol[0].clone(),
                            cat(par(own.clone(), e.clone()), solved[t].clone()),
                        );
                    }
                }
            }
            for (s, e) in scc.iter().zip(sol) {
                pending.remove(s);
                solved.insert(*s, e);
            }
        }
        for (s, e) in &solved {
            self.memo.insert((*s, targets.to_vec()), e.clone());
        }
        Ok(solved[&q].clone())
    }
}

/// An expression denoting the language accepted from `q`. The automaton must
/// be fork-acyclic or well-nested.
pub fn solve(a: &PomsetAutomaton, q: StateId) -> Result<Expr> {
    if q >= a.len() {
        return Err(Error::Precondition(format!("no state {q}")));
    }
    if !a.is_fork_acyclic() && !a.is_well_nested() {
        return Err(Error::UnsupportedStructure(
            "automaton is neither fork-acyclic nor well-nested".into(),
        ));
    }
    let mut s = Solver {
        a,
        le: a.support_preorder(),
        units: vec![None; a.len()],
        memo: HashMap::new(),
    };
    let finals = s.finals();
    s.expr_to(q, &finals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{figures, language_bounded, syntactic_pa};
    use crate::expr::{denote_sync_bounded, parse};
    use crate::symbol::CommTable;

    #[test]
    fn arden_on_a_loop() {
        let mut sys = LinearSystem::new(2);
        sys.matrix[0][0] = Expr::act("a");
        sys.matrix[0][1] = Expr::act("b");
        sys.constants[1] = Expr::One;
        let sol = solve_linear_system(&sys, &Expr::One);
        assert_eq!(sol[0], parse("a*.b").unwrap());
        assert_eq!(sol[1], Expr::One);
    }

    #[test]
    fn figures_solve_to_their_language() {
        let t = CommTable::total();
        for text in [
            figures::PAR,
            figures::COMM,
            figures::CONC,
            figures::SYNC_PAIR,
        ] {
            let a = PomsetAutomaton::from_json(text, &t).unwrap();
            let q0 = a.state("q0").unwrap();
            let x = solve(&a, q0).unwrap();
            assert_eq!(
                denote_sync_bounded(&x, 6, &t).unwrap().members(),
                language_bounded(&a, q0, 6).unwrap().members(),
                "{x}"
            );
        }
    }

    #[test]
    fn syntactic_round_trip() {
        let t = CommTable::total();
        for text in [
            "(a.b)*.c",
            "a^",
            "(a||b)*.(c|d)",
            "(a&b)^",
            "a.(b+c)^.d",
            "(a+b.a)*",
        ] {
            let x = parse(text).unwrap();
            let (a, q) = syntactic_pa(&x, &t).unwrap();
            let y = solve(&a, q).unwrap();
            assert_eq!(
                denote_sync_bounded(&x, 4, &t).unwrap().members(),
                denote_sync_bounded(&y, 4, &t).unwrap().members(),
                "{text} vs {y}"
            );
        }
    }

    #[test]
    fn unsupported_structure() {
        let a = PomsetAutomaton::from_json(
            r#"{"states":["q","p","f"],"finals":["f"],
                "gamma":[{"from":"q","fork":["p","f"],"to":"f"}],
                "delta":[{"from":"p","label":"a","to":"q"}]}"#,
            &CommTable::total(),
        )
        .unwrap();
        assert!(matches!(solve(&a, 0), Err(Error::UnsupportedStructure(_))));
    }
}
