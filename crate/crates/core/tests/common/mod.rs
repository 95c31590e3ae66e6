#![allow(dead_code)]

use ckac::expr::BinOp;
use ckac::Expr;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// What random expressions may contain.
#[derive(Clone, Debug)]
pub struct Shape {
    pub letters: Vec<&'static str>,
    pub ops: Vec<BinOp>,
    pub star: bool,
    pub par_star: bool,
    /// Largest size of a star body.
    pub star_body: usize,
    pub constants: bool,
}

impl Shape {
    /// Sequential, parallel, communication and concurrent composition with star.
    pub fn scr(letters: &[&'static str]) -> Self {
        Shape {
            letters: letters.to_vec(),
            ops: vec![
                BinOp::Alt,
                BinOp::Seq,
                BinOp::Par,
                BinOp::CommMerge,
                BinOp::Conc,
            ],
            star: true,
            par_star: false,
            star_body: usize::MAX,
            constants: true,
        }
    }

    pub fn scpr(letters: &[&'static str]) -> Self {
        Shape {
            par_star: true,
            ..Self::scr(letters)
        }
    }

    pub fn star_free(mut self) -> Self {
        self.star = false;
        self.par_star = false;
        self
    }

    pub fn star_body(mut self, n: usize) -> Self {
        self.star_body = n;
        self
    }

    pub fn without_constants(mut self) -> Self {
        self.constants = false;
        self
    }
}

/// A random expression of exactly `size` nodes.
pub fn expr_of_size(r: &mut impl Rng, shape: &Shape, size: usize) -> Expr {
    let unary = shape.star || shape.par_star;
    if size <= 1 {
        let k = r.gen_range(0..10);
        return match k {
            0 if shape.constants => Expr::Zero,
            1 if shape.constants => Expr::One,
            _ => Expr::act(shape.letters[r.gen_range(0..shape.letters.len())]),
        };
    }
    if size == 2 && !unary {
        return expr_of_size(r, shape, 1);
    }
    let star_ok = unary && size - 1 <= shape.star_body;
    if star_ok && (size == 2 || r.gen_bool(0.2)) {
        let body = expr_of_size(r, shape, size - 1);
        let par = shape.par_star && (!shape.star || r.gen_bool(0.5));
        return if par {
            Expr::par_star(body)
        } else {
            Expr::star(body)
        };
    }
    if size == 2 {
        return expr_of_size(r, shape, 1);
    }
    let left = r.gen_range(1..size - 1);
    let op = shape.ops[r.gen_range(0..shape.ops.len())];
    Expr::binary(
        op,
        expr_of_size(r, shape, left),
        expr_of_size(r, shape, size - 1 - left),
    )
}

/// A random expression with between 1 and `max` nodes.
pub fn expr(r: &mut impl Rng, shape: &Shape, max: usize) -> Expr {
    let size = r.gen_range(1..=max);
    expr_of_size(r, shape, size)
}
