//! Text form of [`CylExpr`].
//!
//! ```text
//! expr    := diff ( '|' diff )*
//! diff    := inter ( '\' inter )*
//! inter   := primary ( '&' primary )*
//! primary := 'S(' [ nat ( ',' nat )* ] ')' | '0' | '(' expr ')'
//! ```
//!
//! `S()` is the whole space and `0` the empty set. All operators associate
//! to the left.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::CylExpr;
use crate::seq::{FinSeq, Nat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(alloc::format!("expected `{}`", c as char))
        }
    }

    fn expr(&mut self) -> Result<CylExpr, ParseError> {
        let mut lhs = self.diff()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            lhs = lhs.union(self.diff()?);
        }
        Ok(lhs)
    }

    fn diff(&mut self) -> Result<CylExpr, ParseError> {
        let mut lhs = self.inter()?;
        while self.peek() == Some(b'\\') {
            self.pos += 1;
            lhs = lhs.minus(self.inter()?);
        }
        Ok(lhs)
    }

    fn inter(&mut self) -> Result<CylExpr, ParseError> {
        let mut lhs = self.primary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            lhs = lhs.intersect(self.primary()?);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<CylExpr, ParseError> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(CylExpr::Empty)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'S') => {
                self.pos += 1;
                self.expect(b'(')?;
                let mut entries = Vec::new();
                if self.peek() != Some(b')') {
                    entries.push(self.nat()?);
                    while self.peek() == Some(b',') {
                        self.pos += 1;
                        entries.push(self.nat()?);
                    }
                }
                self.expect(b')')?;
                Ok(CylExpr::cylinder(FinSeq::from(entries)))
            }
            Some(_) => self.err("expected `S(`, `0` or `(`"),
            None => self.err("unexpected end of input"),
        }
    }

    fn nat(&mut self) -> Result<Nat, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a natural number");
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        digits.parse().or_else(|_| {
            Err(ParseError { offset: start, message: "number out of range".to_string() })
        })
    }
}

impl FromStr for CylExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(e)
    }
}

fn precedence(e: &CylExpr) -> u8 {
    match e {
        CylExpr::Union(..) => 1,
        CylExpr::Difference(..) => 2,
        CylExpr::Intersection(..) => 3,
        _ => 4,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &CylExpr, needs_parens: bool) -> fmt::Result {
    if needs_parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Minimal-parenthesis rendering in the grammar above; parses back to an
/// identical tree.
impl fmt::Display for CylExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r, op) = match self {
            CylExpr::Empty => return f.write_str("0"),
            CylExpr::Full => return f.write_str("S()"),
            CylExpr::Atom(a) => {
                f.write_str("S(")?;
                for (i, x) in a.entries().iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                return f.write_str(")");
            }
            CylExpr::Union(l, r) => (l, r, " | "),
            CylExpr::Difference(l, r) => (l, r, " \\ "),
            CylExpr::Intersection(l, r) => (l, r, " & "),
        };
        let p = precedence(self);
        write_operand(f, l, precedence(l) < p)?;
        f.write_str(op)?;
        write_operand(f, r, precedence(r) <= p)
    }
}
