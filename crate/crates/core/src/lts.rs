//! Structural operational semantics and finite transition systems over expressions.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{BinOp, Expr};
use crate::symbol::{ActionSymbol, CommTable};

/// Label of one transition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepLabel {
    Single(ActionSymbol),
    /// Sorted multiset with at least two elements.
    Multi(Vec<ActionSymbol>),
    /// A communication between two single actions.
    Sync(ActionSymbol),
}

impl StepLabel {
    /// Actions of the step as a sorted multiset.
    pub fn actions(&self) -> Vec<ActionSymbol> {
        match self {
            StepLabel::Single(a) | StepLabel::Sync(a) => vec![a.clone()],
            StepLabel::Multi(v) => v.clone(),
        }
    }

    /// Multiset union of two labels.
    pub fn union(&self, other: &StepLabel) -> StepLabel {
        let mut v = self.actions();
        v.extend(other.actions());
        v.sort();
        StepLabel::Multi(v)
    }
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepLabel::Single(a) | StepLabel::Sync(a) => write!(f, "{a}"),
            StepLabel::Multi(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

/// Successful termination. Communication merges never terminate.
pub fn terminates(x: &Expr) -> bool {
    match x {
        Expr::Zero | Expr::Act(_) | Expr::CommMerge(..) => false,
        Expr::One | Expr::Star(_) | Expr::ParStar(_) => true,
        Expr::Alt(l, r) => terminates(l) || terminates(r),
        Expr::Seq(l, r) | Expr::Par(l, r) | Expr::Conc(l, r) | Expr::LeftMerge(l, r) => {
            terminates(l) && terminates(r)
        }
    }
}

/// Transitions with the total communication table.
pub fn steps(x: &Expr) -> Vec<(StepLabel, Expr)> {
    steps_with(x, &CommTable::total())
}

/// All derivable transitions of `x`, sorted and without duplicates.
pub fn steps_with(x: &Expr, table: &CommTable) -> Vec<(StepLabel, Expr)> {
    let mut out = raw_steps(x, table);
    out.sort();
    out.dedup();
    out
}

/// One way two simultaneous steps can communicate: pairs `(i, j, rho)`
/// matching the `i`-th action of the left step with the `j`-th of the right.
pub(crate) type Matching = Vec<(usize, usize, ActionSymbol)>;

/// Every partial matching between base actions of two steps that the table
/// allows to communicate, the empty matching included.
pub(crate) fn matchings(
    left: &[ActionSymbol],
    right: &[ActionSymbol],
    table: &CommTable,
) -> Vec<Matching> {
    fn go(
        i: usize,
        left: &[ActionSymbol],
        right: &[ActionSymbol],
        table: &CommTable,
        used: &mut Vec<bool>,
        acc: &mut Matching,
        out: &mut Vec<Matching>,
    ) {
        if i == left.len() {
            out.push(acc.clone());
            return;
        }
        go(i + 1, left, right, table, used, acc, out);
        let ActionSymbol::Base(a) = &left[i] else {
            return;
        };
        for j in 0..right.len() {
            if used[j] {
                continue;
            }
            if let ActionSymbol::Base(b) = &right[j] {
                if let Ok(c) = table.symbol(a, b) {
                    used[j] = true;
                    acc.push((i, j, c));
                    go(i + 1, left, right, table, used, acc, out);
                    acc.pop();
                    used[j] = false;
                }
            }
        }
    }
    let mut out = vec![];
    go(
        0,
        left,
        right,
        table,
        &mut vec![false; right.len()],
        &mut vec![],
        &mut out,
    );
    out
}

/// Whether an operator admits a joint step with this matching.
pub(crate) fn joint_allowed(op: BinOp, l1: &StepLabel, l2: &StepLabel, m: &Matching) -> bool {
    match op {
        BinOp::Par => m.is_empty(),
        BinOp::LeftMerge => m.is_empty() && l1 <= l2,
        BinOp::Conc => true,
        BinOp::CommMerge => !m.is_empty(),
        BinOp::Alt | BinOp::Seq => false,
    }
}

/// The label of a joint step: unmatched actions of both sides plus one
/// communication per matched pair.
pub(crate) fn joint_label(
    left: &[ActionSymbol],
    right: &[ActionSymbol],
    m: &Matching,
) -> StepLabel {
    if m.is_empty() {
        let mut v = left.to_vec();
        v.extend_from_slice(right);
        v.sort();
        return StepLabel::Multi(v);
    }
    if m.len() == 1 && left.len() == 1 && right.len() == 1 {
        return StepLabel::Sync(m[0].2.clone());
    }
    let mut v: Vec<ActionSymbol> = m.iter().map(|p| p.2.clone()).collect();
    v.extend(
        left.iter()
            .enumerate()
            .filter(|(i, _)| !m.iter().any(|p| p.0 == *i))
            .map(|p| p.1.clone()),
    );
    v.extend(
        right
            .iter()
            .enumerate()
            .filter(|(j, _)| !m.iter().any(|p| p.1 == *j))
            .map(|p| p.1.clone()),
    );
    v.sort();
    StepLabel::Multi(v)
}

fn raw_steps(x: &Expr, table: &CommTable) -> Vec<(StepLabel, Expr)> {
    match x {
        Expr::Zero | Expr::One => vec![],
        Expr::Act(a) => vec![(StepLabel::Single(a.clone()), Expr::One)],
        Expr::Alt(l, r) => {
            let mut v = raw_steps(l, table);
            v.extend(raw_steps(r, table));
            v
        }
        Expr::Seq(l, r) => {
            let mut v: Vec<_> = raw_steps(l, table)
                .into_iter()
                .map(|(lab, l2)| (lab, Expr::seq(l2, (**r).clone())))
                .collect();
            if terminates(l) {
                v.extend(raw_steps(r, table));
            }
            v
        }
        Expr::Star(y) => raw_steps(y, table)
            .into_iter()
            .map(|(lab, y2)| (lab, Expr::seq(y2, x.clone())))
            .collect(),
        Expr::ParStar(y) => raw_steps(y, table)
            .into_iter()
            .map(|(lab, y2)| (lab, Expr::par(y2, x.clone())))
            .collect(),
        Expr::Par(l, r) | Expr::CommMerge(l, r) | Expr::Conc(l, r) | Expr::LeftMerge(l, r) => {
            let (sl, sr) = (raw_steps(l, table), raw_steps(r, table));
            let mut v = vec![];
            // A side may move alone when the other can stop; the stopped side
            // is dropped. Communication merge always synchronises.
            if !matches!(x, Expr::CommMerge(..)) {
                if terminates(r) {
                    v.extend(sl.iter().cloned());
                }
                if terminates(l) {
                    v.extend(sr.iter().cloned());
                }
            }
            let op = x.as_binary().expect("binary").0;
            for (l1, x1) in &sl {
                let a1 = l1.actions();
                for (l2, x2) in &sr {
                    let a2 = l2.actions();
                    for m in matchings(&a1, &a2, table) {
                        if joint_allowed(op, l1, l2, &m) {
                            v.push((
                                joint_label(&a1, &a2, &m),
                                Expr::conc(x1.clone(), x2.clone()),
                            ));
                        }
                    }
                }
            }
            v
        }
    }
}

/// A finite transition system; state 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    pub states: Vec<Expr>,
    /// `(from, label, to)` by state index, sorted.
    pub transitions: Vec<(usize, StepLabel, usize)>,
    pub terminating: Vec<bool>,
}

impl Lts {
    pub fn root(&self) -> &Expr {
        &self.states[0]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Outgoing transitions of each state.
    pub fn successors(&self) -> Vec<Vec<(StepLabel, usize)>> {
        let mut out = vec![vec![]; self.states.len()];
        for (s, l, t) in &self.transitions {
            out[*s].push((l.clone(), *t));
        }
        out
    }

    /// Graphviz rendering; terminating states are double circles.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lts {\n  rankdir=LR;\n");
        for (i, e) in self.states.iter().enumerate() {
            let shape = if self.terminating[i] {
                "doublecircle"
            } else {
                "circle"
            };
            s.push_str(&format!(
                "  s{i} [shape={shape}, label=\"{}\"];\n",
                escape(&e.to_string())
            ));
        }
        for (a, l, b) in &self.transitions {
            s.push_str(&format!(
                "  s{a} -> s{b} [label=\"{}\"];\n",
                escape(&l.to_string())
            ));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct State {
            id: usize,
            expr: String,
            terminating: bool,
        }
        #[derive(Serialize)]
        struct Trans {
            from: usize,
            label: String,
            to: usize,
        }
        #[derive(Serialize)]
        struct Out {
            root: usize,
            states: Vec<State>,
            transitions: Vec<Trans>,
        }
        let out = Out {
            root: 0,
            states: self
                .states
                .iter()
                .enumerate()
                .map(|(id, e)| State {
                    id,
                    expr: e.to_string(),
                    terminating: self.terminating[id],
                })
                .collect(),
            transitions: self
                .transitions
                .iter()
                .map(|(a, l, b)| Trans {
                    from: *a,
                    label: l.to_string(),
                    to: *b,
                })
                .collect(),
        };
        serde_json::to_value(out).expect("serializable")
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Breadth-first closure of the transitions of `x`; fails once more than
/// `cap` states are discovered.
pub fn build_lts(x: &Expr, cap: usize, table: &CommTable) -> Result<Lts> {
    let mut index: HashMap<Expr, usize> = HashMap::new();
    let mut states = vec![x.clone()];
    index.insert(x.clone(), 0);
    let mut transitions = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    if cap == 0 {
        return Err(Error::CapExceeded { cap, count: 1 });
    }
    while let Some(i) = queue.pop_front() {
        for (l, y) in steps_with(&states[i].clone(), table) {
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
            transitions.insert((i, l, j));
        }
    }
    let terminating = states.iter().map(terminates).collect();
    Ok(Lts {
        states,
        transitions: transitions.into_iter().collect(),
        terminating,
    })
}
