//! Constructors that fold away units and zeros.

use super::Expr;

pub(crate) fn sum(x: Expr, y: Expr) -> Expr {
    match (&x, &y) {
        (Expr::Zero, _) => y,
        (_, Expr::Zero) => x,
        _ if x == y => x,
        _ => Expr::alt(x, y),
    }
}

pub(crate) fn cat(x: Expr, y: Expr) -> Expr {
    match (&x, &y) {
        (Expr::Zero, _) | (_, Expr::Zero) => Expr::Zero,
        (Expr::One, _) => y,
        (_, Expr::One) => x,
        _ => Expr::seq(x, y),
    }
}

pub(crate) fn par(x: Expr, y: Expr) -> Expr {
    match (&x, &y) {
        (Expr::Zero, _) | (_, Expr::Zero) => Expr::Zero,
        (Expr::One, _) => y,
        (_, Expr::One) => x,
        _ => Expr::par(x, y),
    }
}

/// Communication with a zero side denotes nothing.
pub(crate) fn comm(x: Expr, y: Expr) -> Expr {
    match (&x, &y) {
        (Expr::Zero, _) | (_, Expr::Zero) => Expr::Zero,
        _ => Expr::comm(x, y),
    }
}

pub(crate) fn star(x: Expr) -> Expr {
    match x {
        Expr::Zero | Expr::One => Expr::One,
        Expr::Star(_) => x,
        _ => Expr::star(x),
    }
}

pub(crate) fn par_star(x: Expr) -> Expr {
    match x {
        Expr::Zero | Expr::One => Expr::One,
        _ => Expr::par_star(x),
    }
}

/// Sum of many terms, `0` when empty.
pub(crate) fn sum_all(items: impl IntoIterator<Item = Expr>) -> Expr {
    items.into_iter().fold(Expr::Zero, sum)
}
