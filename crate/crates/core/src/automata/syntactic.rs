use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{PomsetAutomaton, StateId};
use crate::error::{Error, Result};
use crate::expr::{denote_sync_bounded, BinOp, Expr};
use crate::symbol::{ActionSymbol, CommTable};

/// Sequential continuation: `1` followed by `y` is just `y`.
fn then(d: &Expr, y: &Expr) -> Expr {
    match d {
        Expr::One => y.clone(),
        _ => Expr::seq(d.clone(), y.clone()),
    }
}

/// Base actions `a` such that the single-event pomset `a` is denoted by `x`.
fn single_actions(x: &Expr, table: &CommTable) -> Result<BTreeSet<ActionSymbol>> {
    let l = denote_sync_bounded(x, 1, table)?;
    Ok(l.members()
        .iter()
        .filter(|u| u.len() == 1 && !u.label(0).is_comm())
        .map(|u| u.label(0).clone())
        .collect())
}

struct Builder<'t> {
    table: &'t CommTable,
}

type Derivs = BTreeMap<ActionSymbol, BTreeSet<Expr>>;
type Forks = BTreeSet<(Vec<Expr>, Expr)>;

impl Builder<'_> {
    fn derivs(&self, x: &Expr) -> Result<Derivs> {
        let mut out = Derivs::new();
        match x {
            Expr::Zero | Expr::One | Expr::Par(..) | Expr::ParStar(_) => {}
            Expr::Act(a) => {
                out.entry(a.clone()).or_default().insert(Expr::One);
            }
            Expr::Alt(l, r) => {
                out = self.derivs(l)?;
                for (a, ds) in self.derivs(r)? {
                    out.entry(a).or_default().extend(ds);
                }
            }
            Expr::Seq(l, r) => {
                for (a, ds) in self.derivs(l)? {
                    out.entry(a)
                        .or_default()
                        .extend(ds.iter().map(|d| then(d, r)));
                }
                if l.nullable() {
                    for (a, ds) in self.derivs(r)? {
                        out.entry(a).or_default().extend(ds);
                    }
                }
            }
            Expr::Star(y) => {
                for (a, ds) in self.derivs(y)? {
                    out.entry(a)
                        .or_default()
                        .extend(ds.iter().map(|d| then(d, x)));
                }
            }
            Expr::CommMerge(l, r) | Expr::Conc(l, r) => {
                let (ls, rs) = (
                    single_actions(l, self.table)?,
                    single_actions(r, self.table)?,
                );
                for p in &ls {
                    for q in &rs {
                        let (p, q) = (p.base_name().expect("base"), q.base_name().expect("base"));
                        if self.table.defines(p, q) {
                            out.entry(ActionSymbol::comm_unchecked(p, q))
                                .or_default()
                                .insert(Expr::One);
                        }
                    }
                }
            }
            Expr::LeftMerge(..) => return Err(Error::UnsupportedOperator("left merge".into())),
        }
        Ok(out)
    }

    fn forks(&self, x: &Expr) -> Result<Forks> {
        let mut out = Forks::new();
        match x {
            Expr::Zero | Expr::One | Expr::Act(_) | Expr::CommMerge(..) => {}
            Expr::Alt(l, r) => {
                out = self.forks(l)?;
                out.extend(self.forks(r)?);
            }
            Expr::Seq(l, r) => {
                out.extend(self.forks(l)?.into_iter().map(|(f, t)| (f, then(&t, r))));
                if l.nullable() {
                    out.extend(self.forks(r)?);
                }
            }
            Expr::Star(y) => {
                out.extend(self.forks(y)?.into_iter().map(|(f, t)| (f, then(&t, x))));
            }
            Expr::ParStar(y) => {
                out.insert((sorted(vec![(**y).clone(), x.clone()]), Expr::One));
            }
            Expr::Par(l, r) | Expr::Conc(l, r) => {
                out.insert((sorted(vec![(**l).clone(), (**r).clone()]), Expr::One));
            }
            Expr::LeftMerge(..) => return Err(Error::UnsupportedOperator("left merge".into())),
        }
        Ok(out)
    }
}

fn sorted(mut v: Vec<Expr>) -> Vec<Expr> {
    v.sort();
    v
}

/// The automaton whose states are expressions reachable from `x`; its
/// language from the returned state equals the synchronised semantics of `x`.
pub fn syntactic_pa(x: &Expr, table: &CommTable) -> Result<(PomsetAutomaton, StateId)> {
    if x.contains_op(BinOp::LeftMerge) {
        return Err(Error::UnsupportedOperator("left merge".into()));
    }
    let b = Builder { table };
    let mut a = PomsetAutomaton::new();
    let mut ids: BTreeMap<Expr, StateId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut id = |e: &Expr, a: &mut PomsetAutomaton, queue: &mut VecDeque<Expr>| -> StateId {
        *ids.entry(e.clone()).or_insert_with(|| {
            queue.push_back(e.clone());
            a.add_state(&e.to_string())
        })
    };
    let root = id(x, &mut a, &mut queue);
    while let Some(e) = queue.pop_front() {
        let q = id(&e, &mut a, &mut queue);
        if e.nullable() {
            a.set_final(q);
        }
        for (sym, ds) in b.derivs(&e)? {
            for d in ds {
                let t = id(&d, &mut a, &mut queue);
                a.add_delta(q, sym.clone(), t);
            }
        }
        for (fork, target) in b.forks(&e)? {
            let branches = fork.iter().map(|f| id(f, &mut a, &mut queue)).collect();
            let t = id(&target, &mut a, &mut queue);
            a.add_gamma(q, branches, t);
        }
    }
    Ok((a, root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::language_bounded;
    use crate::expr::parse;

    fn check(text: &str, n: usize) {
        let t = CommTable::total();
        let x = parse(text).unwrap();
        let (a, q) = syntactic_pa(&x, &t).unwrap();
        assert!(a.is_fork_acyclic() || a.is_well_nested(), "{text}");
        let got = language_bounded(&a, q, n).unwrap();
        let want = denote_sync_bounded(&x, n, &t).unwrap();
        assert_eq!(got.members(), want.members(), "{text}");
    }

    #[test]
    fn languages_match_semantics() {
        for text in [
            "a.(b||c).d",
            "a.(b|c).d",
            "a.(b&c).d",
            "(a+b)*.c",
            "(a|b)*",
            "(a.b)|c",
            "(a+b.c)|d",
            "(a||b)*",
            "a.b*||c",
            "(a&b)&c",
            "1+a",
            "0",
        ] {
            check(text, 4);
        }
    }

    #[test]
    fn parallel_star() {
        check("a^", 3);
        check("(a.b)^", 4);
        check("(a+b)^.c", 3);
        let (a, _) = syntactic_pa(&parse("a^").unwrap(), &CommTable::total()).unwrap();
        assert!(!a.is_fork_acyclic());
        assert!(a.is_well_nested());
    }

    #[test]
    fn partial_table() {
        let t = CommTable::parse("a b s").unwrap();
        let x = crate::expr::parse_with("(a+c)|b", &t).unwrap();
        let (a, q) = syntactic_pa(&x, &t).unwrap();
        assert_eq!(
            language_bounded(&a, q, 2).unwrap().members(),
            denote_sync_bounded(&x, 2, &t).unwrap().members()
        );
        assert_eq!(a.alphabet().len(), 1);
    }

    #[test]
    fn left_merge_rejected() {
        let x = parse("a%b").unwrap();
        assert!(matches!(
            syntactic_pa(&x, &CommTable::total()),
            Err(Error::UnsupportedOperator(_))
        ));
    }
}
