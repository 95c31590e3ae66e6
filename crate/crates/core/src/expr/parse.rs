//! Recursive-descent parser for the ASCII expression grammar.
//!
//! ```text
//! sum     := conc ('+' conc)*
//! conc    := seq (('||' | '|' | '&' | '%') seq)*
//! seq     := postfix ('.' postfix)*
//! postfix := atom ('*' | '^')*
//! atom    := '0' | '1' | ident | 'rho(' ident ',' ident ')' | '(' sum ')'
//! ```

use super::{BinOp, Expr};
use crate::error::{Error, Result};
use crate::symbol::{ActionSymbol, CommTable};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Zero,
    One,
    Ident(String),
    Op(BinOp),
    Star,
    Hat,
    LParen,
    RParen,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = vec![];
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0' => Tok::Zero,
            '1' => Tok::One,
            '+' => Tok::Op(BinOp::Alt),
            '.' => Tok::Op(BinOp::Seq),
            '&' => Tok::Op(BinOp::Conc),
            '%' => Tok::Op(BinOp::LeftMerge),
            '|' if bytes.get(i + 1) == Some(&b'|') => {
                i += 1;
                Tok::Op(BinOp::Par)
            }
            '|' => Tok::Op(BinOp::CommMerge),
            '*' => Tok::Star,
            '^' => Tok::Hat,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            other => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    table: &'a CommTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut x = self.conc()?;
        while self.peek() == Some(&Tok::Op(BinOp::Alt)) {
            self.pos += 1;
            x = Expr::alt(x, self.conc()?);
        }
        Ok(x)
    }

    fn conc(&mut self) -> Result<Expr> {
        let mut x = self.seq()?;
        while let Some(Tok::Op(
            op @ (BinOp::Par | BinOp::CommMerge | BinOp::Conc | BinOp::LeftMerge),
        )) = self.peek()
        {
            let op = *op;
            self.pos += 1;
            x = Expr::binary(op, x, self.seq()?);
        }
        Ok(x)
    }

    fn seq(&mut self) -> Result<Expr> {
        let mut x = self.postfix()?;
        while self.peek() == Some(&Tok::Op(BinOp::Seq)) {
            self.pos += 1;
            x = Expr::seq(x, self.postfix()?);
        }
        Ok(x)
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut x = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => x = Expr::star(x),
                Some(Tok::Hat) => x = Expr::par_star(x),
                _ => return Ok(x),
            }
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error("expected an action name"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        let at = self.offset();
        self.pos += 1;
        match tok {
            Tok::Zero => Ok(Expr::Zero),
            Tok::One => Ok(Expr::One),
            Tok::Ident(name) if name == "rho" && self.peek() == Some(&Tok::LParen) => {
                self.pos += 1;
                let a = self.ident()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.ident()?;
                self.expect(Tok::RParen, "`)`")?;
                match self.table.symbol(&a, &b) {
                    Ok(sym) => Ok(Expr::Act(sym)),
                    Err(_) => Err(Error::Syntax {
                        pos: at,
                        msg: format!("communication undefined for ({a},{b})"),
                    }),
                }
            }
            Tok::Ident(name) => Ok(Expr::Act(ActionSymbol::base(&name))),
            Tok::LParen => {
                let x = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(x)
            }
            _ => {
                self.pos -= 1;
                self.error("expected an expression")
            }
        }
    }
}

/// Parses with the total communication table.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with(text, &CommTable::total())
}

/// Parses, checking `rho(a,b)` literals against `table`.
pub fn parse_with(text: &str, table: &CommTable) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
        table,
    };
    let x = p.sum()?;
    if p.pos != p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(x)
}
