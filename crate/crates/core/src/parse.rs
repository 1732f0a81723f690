//! Literal syntax for exact scalars and Puiseux series.
//!
//! Series are sums of `coeff*t^(p/q)` terms, e.g. `1 + 2*t^(1/2) - t^3`,
//! with coefficients written `a/b` or `a/b+c/d*i` (parenthesize a complex
//! coefficient attached to a power of t: `(1/2+1/3*i)*t^2`). Plain
//! constants parse as exactly known elements; anything mentioning `t`
//! carries a finite truncation order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::puiseux::{Exponent, PuiseuxSeries, Trunc};
use crate::scalar::ExactScalar;

/// Default truncation order attached to series literals.
pub const DEFAULT_TRUNCATION: i64 = 8;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(char), // 'i' or 't'
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => pos += 1,
            '+' => {
                out.push((pos, Token::Plus));
                pos += 1;
            }
            '-' => {
                out.push((pos, Token::Minus));
                pos += 1;
            }
            '*' => {
                out.push((pos, Token::Star));
                pos += 1;
            }
            '/' => {
                out.push((pos, Token::Slash));
                pos += 1;
            }
            '^' => {
                out.push((pos, Token::Caret));
                pos += 1;
            }
            '(' => {
                out.push((pos, Token::LParen));
                pos += 1;
            }
            ')' => {
                out.push((pos, Token::RParen));
                pos += 1;
            }
            'i' | 't' => {
                out.push((pos, Token::Ident(c)));
                pos += 1;
            }
            '0'..='9' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let n: BigInt = input[start..pos].parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: "invalid integer".into(),
                })?;
                out.push((start, Token::Int(n)));
            }
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens
            .get(self.idx)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).map(|(_, t)| t.clone());
        self.idx += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::Parse {
                pos,
                msg: format!("expected {want:?}"),
            }),
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    // series := ['+'|'-'] term (('+'|'-') term)*
    fn series(&mut self) -> Result<PuiseuxSeries> {
        let mut acc = PuiseuxSeries::zero();
        let mut negate = false;
        match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                negate = true;
            }
            Some(Token::Plus) => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let term = self.term()?;
            acc = if negate {
                acc.sub(&term)
            } else {
                acc.add(&term)
            };
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    negate = false;
                }
                Some(Token::Minus) => {
                    self.bump();
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<PuiseuxSeries> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    // factor := rational | 'i' | 't' ['^' exponent] | '(' series ')'
    fn factor(&mut self) -> Result<PuiseuxSeries> {
        match self.peek().cloned() {
            Some(Token::Int(_)) => {
                let r = self.rational()?;
                Ok(PuiseuxSeries::constant(ExactScalar::from_rational(r)))
            }
            Some(Token::Ident('i')) => {
                self.bump();
                Ok(PuiseuxSeries::constant(ExactScalar::i()))
            }
            Some(Token::Ident('t')) => {
                self.bump();
                let e = if matches!(self.peek(), Some(Token::Caret)) {
                    self.bump();
                    self.exponent()?
                } else {
                    Exponent::from_integer(1)
                };
                Ok(PuiseuxSeries::monomial(ExactScalar::one(), e))
            }
            Some(Token::LParen) => {
                self.bump();
                let inner = self.series()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            _ => self.err("expected a number, 'i', 't' or '('"),
        }
    }

    // rational := Int ['/' Int]
    fn rational(&mut self) -> Result<BigRational> {
        let pos = self.pos();
        let num = match self.bump() {
            Some(Token::Int(n)) => n,
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: "expected an integer".into(),
                })
            }
        };
        if matches!(self.peek(), Some(Token::Slash)) {
            self.bump();
            let dpos = self.pos();
            match self.bump() {
                Some(Token::Int(d)) if d != BigInt::from(0) => Ok(BigRational::new(num, d)),
                _ => Err(Error::Parse {
                    pos: dpos,
                    msg: "expected a nonzero denominator".into(),
                }),
            }
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    // exponent := Int | '(' ['+'|'-'] Int ['/' Int] ')'
    fn exponent(&mut self) -> Result<Exponent> {
        match self.peek().cloned() {
            Some(Token::Int(_)) => {
                let r = self.rational()?;
                to_exponent(&r, self.pos())
            }
            Some(Token::LParen) => {
                self.bump();
                let mut sign = 1i64;
                match self.peek() {
                    Some(Token::Minus) => {
                        self.bump();
                        sign = -1;
                    }
                    Some(Token::Plus) => {
                        self.bump();
                    }
                    _ => {}
                }
                let r = self.rational()?;
                self.expect(Token::RParen)?;
                let e = to_exponent(&r, self.pos())?;
                Ok(e * sign)
            }
            _ => self.err("expected an exponent"),
        }
    }
}

fn to_exponent(r: &BigRational, pos: usize) -> Result<Exponent> {
    let n = r.numer().to_i64();
    let d = r.denom().to_i64();
    match (n, d) {
        (Some(n), Some(d)) => Ok(Exponent::new(n, d)),
        _ => Err(Error::Parse {
            pos,
            msg: "exponent out of range".into(),
        }),
    }
}

/// Parse a Puiseux series literal. Literals mentioning `t` receive the
/// truncation order `max(default_trunc, largest exponent + 1)`; pure
/// constants are exactly known.
pub fn parse_series(input: &str, default_trunc: Option<i64>) -> Result<PuiseuxSeries> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty input".into(),
        });
    }
    let mut p = Parser {
        tokens,
        idx: 0,
        end: input.len(),
    };
    let s = p.series()?;
    if p.idx != p.tokens.len() {
        return p.err("trailing input");
    }
    // literals are exact as written; attach the finite certainty window
    // only when t actually occurs
    let has_t = input.contains('t');
    if !has_t {
        return Ok(s);
    }
    let default = Exponent::from_integer(default_trunc.unwrap_or(DEFAULT_TRUNCATION));
    let max_exp = s
        .terms()
        .map(|(e, _)| *e)
        .max()
        .unwrap_or_else(|| Exponent::from_integer(0));
    let trunc = default.max(max_exp + Exponent::from_integer(1));
    let terms: Vec<_> = s.terms().map(|(e, c)| (*e, c.clone())).collect();
    Ok(PuiseuxSeries::new(terms, Trunc::Finite(trunc)))
}

/// Parse an exact complex-rational literal such as `3/4`, `-i`, `1/2+1/3*i`.
pub fn parse_scalar(input: &str) -> Result<ExactScalar> {
    let s = parse_series(input, None)?;
    if s.is_known_zero() {
        return Ok(ExactScalar::zero());
    }
    let zero = Exponent::from_integer(0);
    let mut value = None;
    for (e, c) in s.terms() {
        if *e != zero || value.is_some() {
            return Err(Error::Parse {
                pos: 0,
                msg: "expected a constant, found a series in t".into(),
            });
        }
        value = Some(c.clone());
    }
    match (value, s.truncation()) {
        (Some(v), Trunc::Infinite) => Ok(v),
        (None, Trunc::Infinite) => Ok(ExactScalar::zero()),
        _ => Err(Error::Parse {
            pos: 0,
            msg: "expected a constant, found a series in t".into(),
        }),
    }
}
