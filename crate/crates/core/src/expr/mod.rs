//! Series-communication(-parallel) rational expressions.

mod parse;
mod semantics;
pub(crate) mod smart;

use std::fmt;
use std::sync::Arc;

use crate::symbol::ActionSymbol;

pub use parse::{parse, parse_with};
pub use semantics::{denote_bounded, denote_sync_bounded, lang_equiv_bounded, member};

/// Expression syntax tree. Children are shared, so cloning is cheap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Expr {
    Zero,
    One,
    /// A base action or a communication literal `rho(a,b)`.
    Act(ActionSymbol),
    Alt(Arc<Expr>, Arc<Expr>),
    Seq(Arc<Expr>, Arc<Expr>),
    Star(Arc<Expr>),
    Par(Arc<Expr>, Arc<Expr>),
    ParStar(Arc<Expr>),
    CommMerge(Arc<Expr>, Arc<Expr>),
    Conc(Arc<Expr>, Arc<Expr>),
    LeftMerge(Arc<Expr>, Arc<Expr>),
}

/// Binary operators, used where code treats them uniformly.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BinOp {
    Alt,
    Seq,
    Par,
    CommMerge,
    Conc,
    LeftMerge,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Alt => "+",
            BinOp::Seq => ".",
            BinOp::Par => "||",
            BinOp::CommMerge => "|",
            BinOp::Conc => "&",
            BinOp::LeftMerge => "%",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Alt => 0,
            BinOp::Par | BinOp::CommMerge | BinOp::Conc | BinOp::LeftMerge => 1,
            BinOp::Seq => 2,
        }
    }
}

impl Expr {
    pub fn act(name: &str) -> Expr {
        Expr::Act(ActionSymbol::base(name))
    }

    pub fn binary(op: BinOp, x: Expr, y: Expr) -> Expr {
        let (x, y) = (Arc::new(x), Arc::new(y));
        match op {
            BinOp::Alt => Expr::Alt(x, y),
            BinOp::Seq => Expr::Seq(x, y),
            BinOp::Par => Expr::Par(x, y),
            BinOp::CommMerge => Expr::CommMerge(x, y),
            BinOp::Conc => Expr::Conc(x, y),
            BinOp::LeftMerge => Expr::LeftMerge(x, y),
        }
    }

    pub fn alt(x: Expr, y: Expr) -> Expr {
        Expr::binary(BinOp::Alt, x, y)
    }

    pub fn seq(x: Expr, y: Expr) -> Expr {
        Expr::binary(BinOp::Seq, x, y)
    }

    pub fn par(x: Expr, y: Expr) -> Expr {
        Expr::binary(BinOp::Par, x, y)
    }

    pub fn comm(x: Expr, y: Expr) -> Expr {
        Expr::binary(BinOp::CommMerge, x, y)
    }

    pub fn conc(x: Expr, y: Expr) -> Expr {
        Expr::binary(BinOp::Conc, x, y)
    }

    pub fn left_merge(x: Expr, y: Expr) -> Expr {
        Expr::binary(BinOp::LeftMerge, x, y)
    }

    pub fn star(x: Expr) -> Expr {
        Expr::Star(Arc::new(x))
    }

    pub fn par_star(x: Expr) -> Expr {
        Expr::ParStar(Arc::new(x))
    }

    /// The operator and operands of a binary node.
    pub fn as_binary(&self) -> Option<(BinOp, &Expr, &Expr)> {
        match self {
            Expr::Alt(x, y) => Some((BinOp::Alt, x, y)),
            Expr::Seq(x, y) => Some((BinOp::Seq, x, y)),
            Expr::Par(x, y) => Some((BinOp::Par, x, y)),
            Expr::CommMerge(x, y) => Some((BinOp::CommMerge, x, y)),
            Expr::Conc(x, y) => Some((BinOp::Conc, x, y)),
            Expr::LeftMerge(x, y) => Some((BinOp::LeftMerge, x, y)),
            _ => None,
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Expr::Zero | Expr::One | Expr::Act(_) => 1,
            Expr::Star(x) | Expr::ParStar(x) => 1 + x.size(),
            _ => {
                let (_, x, y) = self.as_binary().expect("binary");
                1 + x.size() + y.size()
            }
        }
    }

    /// Whether the empty pomset is denoted. Communication with an empty side
    /// denotes nothing, so `x|y` is never nullable.
    pub fn nullable(&self) -> bool {
        match self {
            Expr::Zero | Expr::Act(_) | Expr::CommMerge(..) => false,
            Expr::One | Expr::Star(_) | Expr::ParStar(_) => true,
            Expr::Alt(x, y) => x.nullable() || y.nullable(),
            Expr::Seq(x, y) | Expr::Par(x, y) | Expr::Conc(x, y) | Expr::LeftMerge(x, y) => {
                x.nullable() && y.nullable()
            }
        }
    }

    /// Nullability by the literal inference rules, under which `x|y` is
    /// nullable when both sides are.
    pub fn nullable_literal(&self) -> bool {
        match self {
            Expr::Zero | Expr::Act(_) => false,
            Expr::One | Expr::Star(_) | Expr::ParStar(_) => true,
            Expr::Alt(x, y) => x.nullable_literal() || y.nullable_literal(),
            Expr::Seq(x, y)
            | Expr::Par(x, y)
            | Expr::Conc(x, y)
            | Expr::LeftMerge(x, y)
            | Expr::CommMerge(x, y) => x.nullable_literal() && y.nullable_literal(),
        }
    }

    /// Whether the operator occurs anywhere in the expression.
    pub fn contains_op(&self, op: BinOp) -> bool {
        match self {
            Expr::Zero | Expr::One | Expr::Act(_) => false,
            Expr::Star(x) | Expr::ParStar(x) => x.contains_op(op),
            _ => {
                let (o, x, y) = self.as_binary().expect("binary");
                o == op || x.contains_op(op) || y.contains_op(op)
            }
        }
    }

    pub fn has_star(&self) -> bool {
        match self {
            Expr::Star(_) | Expr::ParStar(_) => true,
            Expr::Zero | Expr::One | Expr::Act(_) => false,
            _ => {
                let (_, x, y) = self.as_binary().expect("binary");
                x.has_star() || y.has_star()
            }
        }
    }

    pub fn has_par_star(&self) -> bool {
        match self {
            Expr::ParStar(_) => true,
            Expr::Star(x) => x.has_par_star(),
            Expr::Zero | Expr::One | Expr::Act(_) => false,
            _ => {
                let (_, x, y) = self.as_binary().expect("binary");
                x.has_par_star() || y.has_par_star()
            }
        }
    }

    /// Action symbols occurring in the expression, sorted.
    pub fn alphabet(&self) -> Vec<ActionSymbol> {
        fn go(x: &Expr, out: &mut Vec<ActionSymbol>) {
            match x {
                Expr::Act(a) => out.push(a.clone()),
                Expr::Zero | Expr::One => {}
                Expr::Star(y) | Expr::ParStar(y) => go(y, out),
                _ => {
                    let (_, y, z) = x.as_binary().expect("binary");
                    go(y, out);
                    go(z, out);
                }
            }
        }
        let mut out = vec![];
        go(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Concurrency depth. The concurrent, parallel and communication depths
    /// share one recursion, so the triple always has equal entries.
    pub fn conc_depth(&self) -> (usize, usize, usize) {
        let d = self.concurrency_depth();
        (d, d, d)
    }

    fn concurrency_depth(&self) -> usize {
        match self {
            Expr::Zero | Expr::One | Expr::Act(_) => 0,
            Expr::Star(x) | Expr::ParStar(x) => x.concurrency_depth(),
            Expr::Alt(x, y) | Expr::Seq(x, y) => x.concurrency_depth().max(y.concurrency_depth()),
            Expr::Par(x, y) | Expr::CommMerge(x, y) | Expr::Conc(x, y) | Expr::LeftMerge(x, y) => {
                x.concurrency_depth().max(y.concurrency_depth()) + 1
            }
        }
    }

    /// Nesting depth of parallel stars.
    pub fn dagger_depth(&self) -> usize {
        match self {
            Expr::Zero | Expr::One | Expr::Act(_) => 0,
            Expr::Star(x) => x.dagger_depth(),
            Expr::ParStar(x) => x.dagger_depth() + 1,
            _ => {
                let (_, x, y) = self.as_binary().expect("binary");
                x.dagger_depth().max(y.dagger_depth())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Star(_) | Expr::ParStar(_) => 3,
            Expr::Zero | Expr::One | Expr::Act(_) => 4,
            _ => self.as_binary().expect("binary").0.precedence(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, x: &Expr, min: u8) -> fmt::Result {
            if x.precedence() < min {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        }
        match self {
            Expr::Zero => write!(f, "0"),
            Expr::One => write!(f, "1"),
            Expr::Act(a) => write!(f, "{a}"),
            Expr::Star(x) => {
                wrap(f, x, 3)?;
                write!(f, "*")
            }
            Expr::ParStar(x) => {
                wrap(f, x, 3)?;
                write!(f, "^")
            }
            _ => {
                let (op, x, y) = self.as_binary().expect("binary");
                let p = op.precedence();
                wrap(f, x, p)?;
                write!(f, "{}", op.symbol())?;
                wrap(f, y, p + 1)
            }
        }
    }
}
