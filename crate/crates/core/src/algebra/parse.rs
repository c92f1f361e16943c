//! Text grammar for polynomials:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*')? unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | variable | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Juxtaposition multiplies, so `2x1x2` is accepted.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{AlgebraError, Axis, Poly2, Scalar};

/// Which variable names are accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarSet {
    X,
    Y,
}

impl VarSet {
    pub fn names(self) -> [&'static str; 2] {
        match self {
            VarSet::X => ["x1", "x2"],
            VarSet::Y => ["y1", "y2"],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(Axis),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(pos: usize, msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse { pos, msg: msg.into() }
}

fn lex(src: &str, vars: VarSet) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let letter = vars.names()[0].as_bytes()[0];
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            _ if b == letter => {
                let axis = match bytes.get(i + 1) {
                    Some(b'1') => Axis::One,
                    Some(b'2') => Axis::Two,
                    _ => return Err(err(start, "expected variable index 1 or 2")),
                };
                if bytes.get(i + 2).is_some_and(|c| c.is_ascii_digit()) {
                    return Err(err(start, "unknown variable"));
                }
                out.push((start, Tok::Var(axis)));
                i += 2;
                continue;
            }
            _ => return Err(err(start, format!("unexpected character {:?}", b as char))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly2, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly2, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Int(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly2, AlgebraError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly2, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| err(pos, "exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(err(pos, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly2, AlgebraError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            Ok(Poly2::constant(Scalar::new(n, d)))
                        }
                        Some(Tok::Int(_)) => Err(err(dpos, "zero denominator")),
                        _ => Err(err(dpos, "expected an integer denominator")),
                    }
                } else {
                    Ok(Poly2::constant(Scalar::from_integer(n)))
                }
            }
            Some(Tok::Var(axis)) => Ok(Poly2::var(axis)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let cpos = self.pos();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(err(cpos, "expected ')'")),
                }
            }
            Some(_) => Err(err(pos, "expected a number, variable or '('")),
            None => Err(err(pos, "unexpected end of input")),
        }
    }
}

pub fn parse_poly(src: &str, vars: VarSet) -> Result<Poly2, AlgebraError> {
    let toks = lex(src, vars)?;
    if toks.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let mut p = Parser { toks, at: 0, end: src.len() };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return Err(err(p.pos(), "trailing input"));
    }
    Ok(out)
}

impl std::str::FromStr for Poly2 {
    type Err = AlgebraError;

    /// Parses a polynomial in `x1, x2`.
    fn from_str(s: &str) -> Result<Poly2, AlgebraError> {
        parse_poly(s, VarSet::X)
    }
}
