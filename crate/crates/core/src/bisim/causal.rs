//! Transitions that keep track of event identity and causality.
//!
//! A [`Node`] is an expression annotated with the events each part causally
//! depends on. Erasing the annotations gives back the expression, and the
//! steps of a node erase to the steps of that expression.

use crate::error::{Error, Result};
use crate::expr::{BinOp, Expr};
use crate::lts::{joint_allowed, joint_label, matchings, terminates, Matching, StepLabel};
use crate::pomset::{bit, bits, LabelledPosetC, Pomsetc, MAX_EVENTS};
use crate::symbol::{ActionSymbol, CommTable};

/// An event and the set of all events before it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Event {
    pub label: ActionSymbol,
    pub before: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Node {
    /// An expression that has not started; its events come after the frontier.
    Wait(u64, Expr),
    /// A running left operand followed by an expression.
    Seq(Box<Node>, Expr),
    /// Two running operands under a concurrency operator.
    Bin(BinOp, Box<Node>, Box<Node>),
}

#[derive(Clone)]
pub(crate) struct CausalStep {
    pub label: StepLabel,
    /// New events, numbered from the `base` passed to [`Node::steps`].
    pub events: Vec<Event>,
    pub next: Node,
}

impl Node {
    pub fn start(x: &Expr) -> Node {
        Node::Wait(0, x.clone())
    }

    pub fn erase(&self) -> Expr {
        match self {
            Node::Wait(_, x) => x.clone(),
            Node::Seq(n, y) => Expr::seq(n.erase(), y.clone()),
            Node::Bin(op, a, b) => Expr::binary(*op, a.erase(), b.erase()),
        }
    }

    pub fn terminates(&self) -> bool {
        match self {
            Node::Wait(_, x) => terminates(x),
            Node::Seq(n, y) => n.terminates() && terminates(y),
            Node::Bin(BinOp::CommMerge, ..) => false,
            Node::Bin(_, a, b) => a.terminates() && b.terminates(),
        }
    }

    fn renumber(&self, f: &impl Fn(u64) -> u64) -> Node {
        match self {
            Node::Wait(m, x) => Node::Wait(f(*m), x.clone()),
            Node::Seq(n, y) => Node::Seq(Box::new(n.renumber(f)), y.clone()),
            Node::Bin(op, a, b) => Node::Bin(*op, Box::new(a.renumber(f)), Box::new(b.renumber(f))),
        }
    }

    /// Events a continuation must wait for once this node has terminated.
    fn final_frontier(&self) -> u64 {
        match self {
            Node::Wait(f, _) => *f,
            Node::Seq(n, _) => n.final_frontier(),
            Node::Bin(_, a, b) => a.final_frontier() | b.final_frontier(),
        }
    }

    /// All steps, given the events so far; new events are numbered from `history.len()`.
    pub fn steps(&self, history: &[Event], table: &CommTable) -> Result<Vec<CausalStep>> {
        if history.len() >= MAX_EVENTS {
            return Err(Error::UnsupportedInput(format!(
                "runs longer than {MAX_EVENTS} events"
            )));
        }
        Ok(self.steps_at(history, history.len(), table))
    }

    fn steps_at(&self, history: &[Event], base: usize, table: &CommTable) -> Vec<CausalStep> {
        match self {
            Node::Wait(f, x) => open(*f, x, history, base, table),
            Node::Seq(n, y) => {
                let mut out: Vec<CausalStep> = n
                    .steps_at(history, base, table)
                    .into_iter()
                    .map(|s| CausalStep {
                        next: Node::Seq(Box::new(s.next), y.clone()),
                        ..s
                    })
                    .collect();
                if n.terminates() {
                    out.extend(
                        Node::Wait(n.final_frontier(), y.clone()).steps_at(history, base, table),
                    );
                }
                out
            }
            Node::Bin(op, a, b) => {
                let left = a.steps_at(history, base, table);
                let mut out = vec![];
                // a side moves alone when the other can stop, which drops it
                if *op != BinOp::CommMerge {
                    if b.terminates() {
                        out.extend(left.iter().cloned());
                    }
                    if a.terminates() {
                        out.extend(b.steps_at(history, base, table));
                    }
                }
                let mut right_at: Vec<Option<Vec<CausalStep>>> = vec![];
                for s1 in &left {
                    let k = s1.events.len();
                    if right_at.len() <= k {
                        right_at.resize_with(k + 1, || None);
                    }
                    if right_at[k].is_none() {
                        right_at[k] = Some(b.steps_at(history, base + k, table));
                    }
                    let l1: Vec<ActionSymbol> = s1.events.iter().map(|e| e.label.clone()).collect();
                    for s2 in right_at[k].as_ref().expect("filled") {
                        let l2: Vec<ActionSymbol> =
                            s2.events.iter().map(|e| e.label.clone()).collect();
                        for m in matchings(&l1, &l2, table) {
                            if joint_allowed(*op, &s1.label, &s2.label, &m) {
                                out.push(joint(s1, s2, &l1, &l2, &m, base));
                            }
                        }
                    }
                }
                out
            }
        }
    }
}

/// Combines simultaneous steps of both operands. Left events keep their
/// numbers; a matched right event is merged into its partner and the other
/// right events close the gap, so the right continuation is renumbered.
fn joint(
    s1: &CausalStep,
    s2: &CausalStep,
    l1: &[ActionSymbol],
    l2: &[ActionSymbol],
    m: &Matching,
    base: usize,
) -> CausalStep {
    let k = s1.events.len();
    let mut events = s1.events.clone();
    let mut target = vec![0; s2.events.len()];
    for (j, e) in s2.events.iter().enumerate() {
        match m.iter().find(|p| p.1 == j) {
            Some((i, _, c)) => {
                events[*i] = Event {
                    label: c.clone(),
                    before: events[*i].before | e.before,
                };
                target[j] = base + i;
            }
            None => {
                target[j] = base + events.len();
                events.push(e.clone());
            }
        }
    }
    let renumber = |mask: u64| {
        let moved = (0..s2.events.len()).filter(|j| mask & bit(base + k + j) != 0);
        let kept = (0..s2.events.len()).fold(mask, |m, j| m & !bit(base + k + j));
        moved.fold(kept, |m, j| m | bit(target[j]))
    };
    CausalStep {
        label: joint_label(l1, l2, m),
        events,
        next: Node::Bin(
            BinOp::Conc,
            Box::new(s1.next.clone()),
            Box::new(s2.next.renumber(&renumber)),
        ),
    }
}

fn close(frontier: u64, history: &[Event]) -> u64 {
    bits(frontier).fold(frontier, |m, e| m | history[e].before)
}

fn open(f: u64, x: &Expr, history: &[Event], base: usize, table: &CommTable) -> Vec<CausalStep> {
    let wait = |y: &Expr| Node::Wait(f, y.clone());
    match x {
        Expr::Zero | Expr::One => vec![],
        Expr::Act(a) => vec![CausalStep {
            label: StepLabel::Single(a.clone()),
            events: vec![Event {
                label: a.clone(),
                before: close(f, history),
            }],
            next: Node::Wait(bit(base), Expr::One),
        }],
        Expr::Alt(l, r) => {
            let mut v = open(f, l, history, base, table);
            v.extend(open(f, r, history, base, table));
            v
        }
        Expr::Seq(l, r) => {
            Node::Seq(Box::new(wait(l)), (**r).clone()).steps_at(history, base, table)
        }
        Expr::Star(y) => open(f, y, history, base, table)
            .into_iter()
            .map(|s| CausalStep {
                next: Node::Seq(Box::new(s.next), x.clone()),
                ..s
            })
            .collect(),
        Expr::ParStar(y) => open(f, y, history, base, table)
            .into_iter()
            .map(|s| CausalStep {
                next: Node::Bin(BinOp::Par, Box::new(s.next), Box::new(wait(x))),
                ..s
            })
            .collect(),
        _ => {
            let (op, l, r) = x.as_binary().expect("binary operator");
            Node::Bin(op, Box::new(wait(l)), Box::new(wait(r))).steps_at(history, base, table)
        }
    }
}

/// The pomset formed by `events`, ordered by causality.
pub(crate) fn events_pomset(events: &[Event]) -> Pomsetc {
    let n = events.len();
    let labels = events.iter().map(|e| e.label.clone()).collect();
    let mut exec = vec![0u64; n];
    for (j, e) in events.iter().enumerate() {
        for i in bits(e.before) {
            exec[i] |= bit(j);
        }
    }
    LabelledPosetC::from_rows(labels, exec, vec![0; n])
        .expect("causality is a strict order")
        .canonicalize()
}
