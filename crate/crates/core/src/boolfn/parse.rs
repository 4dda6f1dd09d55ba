//! Recursive-descent parser for Boolean expressions.
//!
//! Grammar, lowest precedence first, all binary operators left-associative:
//!
//! ```text
//! or    := xor ('|' xor)*
//! xor   := and ('^' and)*
//! and   := unary ('&' unary)*
//! unary := '~' unary | atom
//! atom  := 'x' digits | '0' | '1' | '(' or ')'
//! ```

use bitvec::prelude::*;

use super::{Bits, TruthTable};
use crate::error::{Error, Result};
use crate::Var;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    Var(Var),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn parse(text: &str, n: usize) -> Result<Expr> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            n,
        };
        let e = p.or()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Whole-table evaluation: every node becomes a `2^n`-bit column.
    fn table(&self, n: usize) -> Bits {
        match self {
            Expr::Const(v) => BitVec::repeat(*v, 1 << n),
            Expr::Var(v) => (0..1usize << n).map(|b| b >> v & 1 == 1).collect(),
            Expr::Not(e) => !e.table(n),
            Expr::And(a, b) => a.table(n) & b.table(n),
            Expr::Xor(a, b) => a.table(n) ^ b.table(n),
            Expr::Or(a, b) => a.table(n) | b.table(n),
        }
    }
}

/// Parse `text` over variables `x1..xn` into its truth table.
pub fn parse_expression(text: &str, n: usize) -> Result<TruthTable> {
    TruthTable::check_n(n)?;
    let e = Expr::parse(text, n)?;
    TruthTable::from_bits(n, e.table(n))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<Expr> {
        let mut lhs = self.xor()?;
        while self.eat(b'|') {
            lhs = Expr::Or(Box::new(lhs), Box::new(self.xor()?));
        }
        Ok(lhs)
    }

    fn xor(&mut self) -> Result<Expr> {
        let mut lhs = self.and()?;
        while self.eat(b'^') {
            lhs = Expr::Xor(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat(b'&') {
            lhs = Expr::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'~') {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.or()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(Expr::Const(false))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Expr::Const(true))
            }
            Some(b'x') => {
                self.pos += 1;
                let digits_start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if digits_start == self.pos {
                    return Err(self.error("expected variable number after `x`"));
                }
                let text = std::str::from_utf8(&self.src[digits_start..self.pos])
                    .expect("ascii digits");
                let index: usize = text.parse().map_err(|_| Error::Syntax {
                    position: start,
                    message: "variable number too large".into(),
                })?;
                if index == 0 || index > self.n {
                    return Err(Error::VariableOutOfRange { index, n: self.n });
                }
                Ok(Expr::Var(index - 1))
            }
            Some(&c) => Err(self.error(&format!("unexpected character `{}`", c as char))),
        }
    }
}
