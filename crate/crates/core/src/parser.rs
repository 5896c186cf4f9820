//! Text syntax for expressions.
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := "-" unary | factor
//! factor   := atom ("^" exponent)?
//! atom     := rational | "n" | "(" expr ")"
//!           | "sqrt" "(" expr ")" | "root" "(" integer "," expr ")"
//! exponent := signed-integer | "(" signed-integer ("/" integer)? ")"
//! rational := integer | decimal | "(" signed-integer "/" integer ")"
//! ```
//!
//! A parenthesized `(p/q)` with integer literals is always a rational
//! constant, never a division. Unary minus folds into constants and
//! otherwise becomes `0 - e`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::expr::{desugar_root, Expr};
use crate::rational::{from_decimal, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Integer,
    Decimal,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl TokenKind {
    fn describe(self) -> &'static str {
        match self {
            TokenKind::Integer => "integer",
            TokenKind::Decimal => "decimal",
            TokenKind::Ident => "identifier",
            TokenKind::Plus => "'+'",
            TokenKind::Minus => "'-'",
            TokenKind::Star => "'*'",
            TokenKind::Slash => "'/'",
            TokenKind::Caret => "'^'",
            TokenKind::LParen => "'('",
            TokenKind::RParen => "')'",
            TokenKind::Comma => "','",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub lexeme: &'a str,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: found {}", self.offset, self.found)?;
        if !self.expected.is_empty() {
            write!(f, ", expected {}", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl ParseError {
    /// Renders the error with the offending input position underlined.
    pub fn annotate(&self, input: &str) -> String {
        let col = input[..self.offset.min(input.len())].chars().count();
        format!("{input}\n{}^\nerror: {self}", " ".repeat(col))
    }
}

pub fn tokenize(text: &str) -> Result<Vec<Token<'_>>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let kind = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    TokenKind::Decimal
                } else {
                    TokenKind::Integer
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                TokenKind::Ident
            }
            _ => {
                let kind = match b {
                    b'+' => TokenKind::Plus,
                    b'-' => TokenKind::Minus,
                    b'*' => TokenKind::Star,
                    b'/' => TokenKind::Slash,
                    b'^' => TokenKind::Caret,
                    b'(' => TokenKind::LParen,
                    b')' => TokenKind::RParen,
                    b',' => TokenKind::Comma,
                    _ => {
                        let ch = text[i..].chars().next().unwrap_or('?');
                        return Err(ParseError {
                            offset: i,
                            expected: vec![],
                            found: format!("illegal character {ch:?}"),
                        });
                    }
                };
                i += 1;
                kind
            }
        };
        out.push(Token { kind, lexeme: &text[start..i], offset: start });
    }
    Ok(out)
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos < p.tokens.len() {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

struct Parser<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self, ahead: usize) -> Option<TokenKind> {
        self.tokens.get(self.pos + ahead).map(|t| t.kind)
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                offset: t.offset,
                expected: expected.to_vec(),
                found: match t.kind {
                    TokenKind::Integer | TokenKind::Decimal | TokenKind::Ident => {
                        format!("{} {:?}", t.kind.describe(), t.lexeme)
                    }
                    k => k.describe().to_string(),
                },
            },
            None => ParseError { offset: self.end, expected: expected.to_vec(), found: "end of input".into() },
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token<'a>, ParseError> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                let t = t.clone();
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error(&[kind.describe()])),
        }
    }

    fn eat(&mut self, kind: TokenKind) -> bool {
        if self.peek_kind(0) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(TokenKind::Plus) {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat(TokenKind::Minus) {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(TokenKind::Star) {
                lhs = Expr::mul(lhs, self.unary()?);
            } else if self.eat(TokenKind::Slash) {
                lhs = Expr::div(lhs, self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(TokenKind::Minus) {
            return Ok(match self.unary()? {
                Expr::Const(v) => Expr::Const(-v),
                e => Expr::negate(e),
            });
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(TokenKind::Caret) {
            let e = self.exponent()?;
            return Ok(Expr::pow(base, e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let t = self.expect(TokenKind::Integer)?;
        Ok(t.lexeme.parse().expect("digit run"))
    }

    fn signed_integer(&mut self) -> Result<BigInt, ParseError> {
        let neg = self.eat(TokenKind::Minus);
        let v = self.integer()?;
        Ok(if neg { -v } else { v })
    }

    /// `integer` just consumed as a denominator; rejects zero.
    fn denominator(&mut self) -> Result<BigInt, ParseError> {
        let offset = self.peek().map_or(self.end, |t| t.offset);
        let d = self.integer()?;
        if d.is_zero() {
            return Err(ParseError { offset, expected: vec!["nonzero denominator"], found: "0".into() });
        }
        Ok(d)
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        if self.eat(TokenKind::LParen) {
            let num = self.signed_integer()?;
            let den = if self.eat(TokenKind::Slash) { self.denominator()? } else { BigInt::from(1) };
            self.expect(TokenKind::RParen)?;
            return Ok(Rational::new(num, den));
        }
        match self.peek_kind(0) {
            Some(TokenKind::Minus | TokenKind::Integer) => Ok(Rational::from_integer(self.signed_integer()?)),
            _ => Err(self.error(&["integer", "'('"])),
        }
    }

    /// Matches `( -? int / int )` without consuming anything.
    fn at_rational_literal(&self) -> bool {
        let k = |i| self.peek_kind(i);
        let off = usize::from(k(1) == Some(TokenKind::Minus));
        k(0) == Some(TokenKind::LParen)
            && k(1 + off) == Some(TokenKind::Integer)
            && k(2 + off) == Some(TokenKind::Slash)
            && k(3 + off) == Some(TokenKind::Integer)
            && k(4 + off) == Some(TokenKind::RParen)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        if self.at_rational_literal() {
            self.pos += 1;
            let num = self.signed_integer()?;
            self.expect(TokenKind::Slash)?;
            let den = self.denominator()?;
            self.expect(TokenKind::RParen)?;
            return Ok(Expr::Const(Rational::new(num, den)));
        }
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error(&["number", "'n'", "'('"]));
        };
        match tok.kind {
            TokenKind::Integer => Ok(Expr::Const(Rational::from_integer(self.integer()?))),
            TokenKind::Decimal => {
                self.pos += 1;
                let (i, f) = tok.lexeme.split_once('.').expect("decimal token has a point");
                Ok(Expr::Const(from_decimal(i, f).expect("digit runs")))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Ident => match tok.lexeme {
                "n" => {
                    self.pos += 1;
                    Ok(Expr::Var)
                }
                "sqrt" => {
                    self.pos += 1;
                    self.expect(TokenKind::LParen)?;
                    let e = self.expr()?;
                    self.expect(TokenKind::RParen)?;
                    Ok(desugar_root(2, e).expect("nonzero index"))
                }
                "root" => {
                    self.pos += 1;
                    self.expect(TokenKind::LParen)?;
                    let offset = self.peek().map_or(self.end, |t| t.offset);
                    let k = self.integer()?;
                    let k = u64::try_from(&k).ok().filter(|k| *k > 0).ok_or_else(|| ParseError {
                        offset,
                        expected: vec!["positive root index"],
                        found: k.to_string(),
                    })?;
                    self.expect(TokenKind::Comma)?;
                    let e = self.expr()?;
                    self.expect(TokenKind::RParen)?;
                    Ok(desugar_root(k, e).expect("nonzero index"))
                }
                _ => Err(self.error(&["'n'", "'sqrt'", "'root'"])),
            },
            _ => Err(self.error(&["number", "'n'", "'('"])),
        }
    }
}

fn fmt_literal(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("({}/{})", v.numer(), v.denom())
    }
}

/// Fully parenthesized text; `parse(&format(e)) == e` for every tree.
pub fn format(e: &Expr) -> String {
    match e {
        Expr::Const(v) => format!("({})", fmt_literal(v)),
        Expr::Var => "n".into(),
        Expr::Pow(b, a) => {
            let exp = if a.is_integer() { a.numer().to_string() } else { format!("({}/{})", a.numer(), a.denom()) };
            format!("({})^{}", format(b), exp)
        }
        Expr::Mul(a, b) => format!("({} * {})", format(a), format(b)),
        Expr::Div(a, b) => format!("({} / {})", format(a), format(b)),
        Expr::Add(a, b) => format!("({} + {})", format(a), format(b)),
        Expr::Sub(a, b) => format!("({} - {})", format(a), format(b)),
    }
}

/// Conventional infix rendering with minimal parentheses, for humans.
/// Not guaranteed to round-trip structurally.
pub fn pretty(e: &Expr) -> String {
    fn prec(e: &Expr) -> u8 {
        match e {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 4,
            Expr::Const(v) if v.is_negative() || !v.is_integer() => 3,
            _ => 5,
        }
    }
    fn wrap(e: &Expr, min: u8) -> String {
        let s = pretty(e);
        if prec(e) < min {
            format!("({s})")
        } else {
            s
        }
    }
    match e {
        Expr::Const(v) if v.is_integer() => v.numer().to_string(),
        Expr::Const(v) => format!("({}/{})", v.numer(), v.denom()),
        Expr::Var => "n".into(),
        Expr::Pow(b, a) => {
            let exp = if a.is_integer() && !a.is_negative() {
                a.numer().to_string()
            } else {
                format!("({})", crate::rational::to_plain_string(a))
            };
            format!("{}^{}", wrap(b, 5), exp)
        }
        Expr::Mul(a, b) => format!("{}*{}", wrap(a, 2), wrap(b, 3)),
        Expr::Div(a, b) => format!("{}/{}", wrap(a, 2), wrap(b, 3)),
        Expr::Add(a, b) => format!("{} + {}", wrap(a, 1), wrap(b, 2)),
        Expr::Sub(a, b) if matches!(&**a, Expr::Const(z) if z.is_zero()) => {
            format!("-{}", wrap(b, 3))
        }
        Expr::Sub(a, b) => format!("{} - {}", wrap(a, 1), wrap(b, 2)),
    }
}
