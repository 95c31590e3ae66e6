//! Step, pomset and history-preserving bisimilarity, and the matching simulations.

mod causal;
mod hp;
mod refine;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::lts::{build_lts, Lts};
use crate::pomset::Pomsetc;
use crate::symbol::{ActionSymbol, CommTable};

pub use hp::unroll;

use causal::{events_pomset, Event, Node};
use refine::{distinguishing_trace, greatest_simulation, is_bisimulation, refine, Graph};

/// Which behavioural equivalence (or preorder) to decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Pomset,
    Step,
    Hp,
    Hhp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Bisimulation,
    Simulation,
}

/// A run that one side can perform and the other cannot follow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Moves in order, each prefixed by the side that makes it.
    pub trace: Vec<String>,
    pub reason: String,
}

/// Outcome of a check. On success the witness lists the related pairs,
/// which have been replayed against the transfer conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub mode: Mode,
    pub holds: bool,
    pub witness: Option<Vec<(String, String)>>,
    pub counterexample: Option<Counterexample>,
}

/// Limits shared by the checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Maximum number of states of a transition system.
    pub cap: usize,
    /// Maximum number of steps assembled into one pomset transition.
    pub pomset_steps: usize,
    /// Star unrolling depth for history-preserving checks.
    pub unroll: Option<usize>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            cap: 10_000,
            pomset_steps: 3,
            unroll: None,
        }
    }
}

/// What an observer sees of a step: its multiset of actions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Observed(Vec<ActionSymbol>);

impl fmt::Display for Observed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [a] = self.0.as_slice() {
            return write!(f, "{a}");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn step_graph(l: &Lts) -> Graph<Observed> {
    Graph {
        terminating: l.terminating.clone(),
        succ: l
            .successors()
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|(lab, t)| (Observed(lab.actions()), t))
                    .collect()
            })
            .collect(),
    }
}

fn decide<L: Ord + Clone + ToString>(
    kind: RelationKind,
    g1: Graph<L>,
    names1: Vec<String>,
    g2: Graph<L>,
    names2: Vec<String>,
) -> Result<Relation> {
    let n1 = g1.len();
    let g = g1.union(g2);
    let r = refine(&g);
    let blocks = r.blocks();
    if blocks[0] != blocks[n1] {
        let (trace, reason) = distinguishing_trace(&g, &r, 0, n1);
        return Ok(Relation {
            kind,
            mode: Mode::Bisimulation,
            holds: false,
            witness: None,
            counterexample: Some(Counterexample { trace, reason }),
        });
    }
    let mut pairs = BTreeSet::new();
    for s in 0..n1 {
        for t in n1..g.len() {
            if blocks[s] == blocks[t] {
                pairs.insert((s, t));
            }
        }
    }
    if !is_bisimulation(&g, &pairs) {
        return Err(Error::Structural(
            "bisimulation witness failed replay".into(),
        ));
    }
    let witness = pairs
        .iter()
        .map(|&(s, t)| (names1[s].clone(), names2[t - n1].clone()))
        .collect();
    Ok(Relation {
        kind,
        mode: Mode::Bisimulation,
        holds: true,
        witness: Some(witness),
        counterexample: None,
    })
}

fn names(l: &Lts) -> Vec<String> {
    l.states.iter().map(ToString::to_string).collect()
}

/// Step bisimilarity: transitions are matched by their multisets of actions.
pub fn step_bisimilar(x: &Expr, y: &Expr, cap: usize, table: &CommTable) -> Result<Relation> {
    let (l1, l2) = (build_lts(x, cap, table)?, build_lts(y, cap, table)?);
    decide(
        RelationKind::Step,
        step_graph(&l1),
        names(&l1),
        step_graph(&l2),
        names(&l2),
    )
}

/// Pomset transitions of `s`: runs of 1 to `k` steps labelled by the
/// causal order of the events they perform.
fn pomset_moves(s: &Expr, k: usize, table: &CommTable) -> Result<BTreeSet<(Pomsetc, Expr)>> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<(Node, Vec<Event>, usize)> = vec![(Node::start(s), vec![], 0)];
    while let Some((node, hist, depth)) = stack.pop() {
        if depth == k {
            continue;
        }
        for st in node.steps(&hist, table)? {
            let mut h = hist.clone();
            h.extend(st.events);
            out.insert((events_pomset(&h), st.next.erase()));
            stack.push((st.next, h, depth + 1));
        }
    }
    Ok(out)
}

fn pomset_graph(
    x: &Expr,
    k: usize,
    cap: usize,
    table: &CommTable,
) -> Result<(Graph<Pomsetc>, Vec<String>)> {
    let mut index = HashMap::from([(x.clone(), 0usize)]);
    let mut states = vec![x.clone()];
    let mut succ = vec![];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut out = vec![];
        for (u, y) in pomset_moves(&states[i].clone(), k, table)? {
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    let j = states.len();
                    if j + 1 > cap {
                        return Err(Error::CapExceeded { cap, count: j + 1 });
                    }
                    index.insert(y.clone(), j);
                    states.push(y);
                    queue.push_back(j);
                    j
                }
            };
            out.push((u, j));
        }
        if succ.len() <= i {
            succ.resize(i + 1, vec![]);
        }
        succ[i] = out;
    }
    succ.resize(states.len(), vec![]);
    let terminating = states.iter().map(crate::lts::terminates).collect();
    Ok((
        Graph { terminating, succ },
        states.iter().map(ToString::to_string).collect(),
    ))
}

/// Pomset bisimilarity approximated by pomset transitions of at most `k` steps.
pub fn pomset_bisimilar_bounded(
    x: &Expr,
    y: &Expr,
    k: usize,
    cap: usize,
    table: &CommTable,
) -> Result<Relation> {
    let (g1, n1) = pomset_graph(x, k, cap, table)?;
    let (g2, n2) = pomset_graph(y, k, cap, table)?;
    decide(RelationKind::Pomset, g1, n1, g2, n2)
}

fn describe(p: &hp::Pair) -> (String, String) {
    let show = |(n, h): &(Node, Vec<Event>)| {
        let evs: Vec<String> = h.iter().map(|e| e.label.to_string()).collect();
        format!("{} after [{}]", n.erase(), evs.join(" "))
    };
    (show(&p.left), show(&p.right))
}

/// Hereditary history-preserving bisimilarity restricted to runs of fewer
/// than `events` events. Every move adds an event, so the search is finite
/// even for starred expressions.
pub fn hhp_bisimilar_up_to(
    x: &Expr,
    y: &Expr,
    events: usize,
    table: &CommTable,
) -> Result<Relation> {
    if events >= 60 {
        return Err(Error::UnsupportedInput(
            "horizon must stay below 60 events".into(),
        ));
    }
    let search = hp::Search::new(table, false).with_horizon(events);
    history_preserving_with(search, x, y, true)
}

/// History-preserving similarity restricted to runs of fewer than `events`
/// events. Stars need no unrolling.
pub fn hp_simulates_up_to(x: &Expr, y: &Expr, events: usize, table: &CommTable) -> Result<bool> {
    if events >= 60 {
        return Err(Error::UnsupportedInput(
            "horizon must stay below 60 events".into(),
        ));
    }
    let mut search = hp::Search::new(table, true).with_horizon(events);
    search.related(&hp::Search::root(x, y))
}

fn history_preserving(
    x: &Expr,
    y: &Expr,
    unroll_depth: Option<usize>,
    table: &CommTable,
    hereditary: bool,
) -> Result<Relation> {
    let (x, y) = hp::require_finite(x, y, unroll_depth)?;
    history_preserving_with(hp::Search::new(table, false), &x, &y, hereditary)
}

fn history_preserving_with(
    mut search: hp::Search,
    x: &Expr,
    y: &Expr,
    hereditary: bool,
) -> Result<Relation> {
    let kind = if hereditary {
        RelationKind::Hhp
    } else {
        RelationKind::Hp
    };
    let root = hp::Search::root(x, y);
    if !search.related(&root)? {
        return Ok(Relation {
            kind,
            mode: Mode::Bisimulation,
            holds: false,
            witness: None,
            counterexample: Some(Counterexample {
                trace: vec![],
                reason: "no history-preserving matching of the runs exists".into(),
            }),
        });
    }
    let witness = search.witness(&root);
    if !witness.iter().all(|p| hp::is_isomorphism(p)) {
        return Err(Error::Structural(
            "history-preserving witness failed replay".into(),
        ));
    }
    if hereditary {
        // every related pair other than the root must restrict to the pair it was reached from
        for p in &witness {
            for c in search.children.get(p).into_iter().flatten() {
                if !hp::extends(c, p) || !witness.contains(c) {
                    return Err(Error::Structural(
                        "witness is not closed under restriction".into(),
                    ));
                }
            }
        }
    }
    Ok(Relation {
        kind,
        mode: Mode::Bisimulation,
        holds: true,
        witness: Some(witness.iter().map(|p| describe(p)).collect()),
        counterexample: None,
    })
}

/// History-preserving bisimilarity. Starred expressions need an unrolling depth.
pub fn hp_bisimilar(
    x: &Expr,
    y: &Expr,
    unroll_depth: Option<usize>,
    table: &CommTable,
) -> Result<Relation> {
    history_preserving(x, y, unroll_depth, table, false)
}

/// Hereditary history-preserving bisimilarity. Runs advance in lockstep
/// steps, so related configurations form a tree and the restriction of a
/// related pair is the pair it extends; the search checks this on its witness.
pub fn hhp_bisimilar(
    x: &Expr,
    y: &Expr,
    unroll_depth: Option<usize>,
    table: &CommTable,
) -> Result<Relation> {
    history_preserving(x, y, unroll_depth, table, true)
}

/// `x ≲ y`: `y` can match every behaviour of `x` under the given relation.
pub fn simulates(
    kind: RelationKind,
    x: &Expr,
    y: &Expr,
    bounds: &Bounds,
    table: &CommTable,
) -> Result<bool> {
    match kind {
        RelationKind::Step => {
            let (l1, l2) = (
                build_lts(x, bounds.cap, table)?,
                build_lts(y, bounds.cap, table)?,
            );
            let n1 = l1.len();
            let g = step_graph(&l1).union(step_graph(&l2));
            Ok(greatest_simulation(&g)[0][n1])
        }
        RelationKind::Pomset => {
            let (g1, _) = pomset_graph(x, bounds.pomset_steps, bounds.cap, table)?;
            let (g2, _) = pomset_graph(y, bounds.pomset_steps, bounds.cap, table)?;
            let n1 = g1.len();
            Ok(greatest_simulation(&g1.union(g2))[0][n1])
        }
        RelationKind::Hp | RelationKind::Hhp => {
            let (x, y) = hp::require_finite(x, y, bounds.unroll)?;
            let mut search = hp::Search::new(table, true);
            search.related(&hp::Search::root(&x, &y))
        }
    }
}

/// Dispatches to the bisimilarity named by `kind`.
pub fn bisimilar(
    kind: RelationKind,
    x: &Expr,
    y: &Expr,
    bounds: &Bounds,
    table: &CommTable,
) -> Result<Relation> {
    match kind {
        RelationKind::Step => step_bisimilar(x, y, bounds.cap, table),
        RelationKind::Pomset => {
            pomset_bisimilar_bounded(x, y, bounds.pomset_steps, bounds.cap, table)
        }
        RelationKind::Hp => hp_bisimilar(x, y, bounds.unroll, table),
        RelationKind::Hhp => hhp_bisimilar(x, y, bounds.unroll, table),
    }
}
