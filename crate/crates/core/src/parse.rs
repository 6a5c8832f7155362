//! Recursive-descent parser for the expression grammar shared by all modules.
//!
//! Rational literals `p/q`, generator names, `+ - * / ^` with nonnegative
//! integer exponents, parentheses, and the literal `i` under the Gaussian
//! field flag. Whitespace is insignificant. Division is exact and only
//! defined when the divisor is a unit of the localized ring (a nonzero
//! scalar times designated invertibles); `p/q` literals are the scalar case.

use crate::element::DenomMap;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::monomial::TermMap;
use crate::scalar::Scalar;
use crate::sig::{SigRef, Signature};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Imag,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut pos = 0usize;
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                pos += 1;
            }
            '+' => {
                toks.push((pos, Tok::Plus));
                pos += 1;
            }
            '-' => {
                toks.push((pos, Tok::Minus));
                pos += 1;
            }
            '*' => {
                toks.push((pos, Tok::Star));
                pos += 1;
            }
            '/' => {
                toks.push((pos, Tok::Slash));
                pos += 1;
            }
            '^' => {
                toks.push((pos, Tok::Caret));
                pos += 1;
            }
            '(' => {
                toks.push((pos, Tok::LParen));
                pos += 1;
            }
            ')' => {
                toks.push((pos, Tok::RParen));
                pos += 1;
            }
            '0'..='9' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let n: BigInt = src[start..pos].parse().expect("digits");
                toks.push((start, Tok::Int(n)));
            }
            c if c.is_ascii_alphabetic() => {
                let start = pos;
                while pos < bytes.len()
                    && ((bytes[pos] as char).is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                let name = &src[start..pos];
                if name == "i" {
                    toks.push((start, Tok::Imag));
                } else {
                    toks.push((start, Tok::Name(name.to_string())));
                }
            }
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    sig: &'a SigRef,
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.at)
            .map(|(p, _)| *p)
            .unwrap_or(usize::MAX)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            other => Err(Error::Parse {
                pos,
                msg: format!("expected {want:?}, found {other:?}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Element> {
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            negate = true;
        } else if self.peek() == Some(&Tok::Plus) {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Element> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.power()?;
                    acc = acc.mul(&f)?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let f = self.power()?;
                    acc = acc.div(&f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Element> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().map_err(|_| Error::Parse {
                        pos,
                        msg: "exponent out of range".to_string(),
                    })?;
                    return base.pow(e);
                }
                other => {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("expected nonnegative integer exponent, found {other:?}"),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Element> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Element::scalar(
                self.sig,
                Scalar {
                    re: BigRational::from_integer(n),
                    im: BigRational::zero(),
                },
            )),
            Some(Tok::Imag) => {
                if !self.sig.gaussian() {
                    return Err(Error::GaussianDisabled);
                }
                Ok(Element::scalar(self.sig, Scalar::i()))
            }
            Some(Tok::Name(name)) => {
                let g = self.sig.require(&name)?;
                Ok(Element::generator(self.sig, g))
            }
            Some(Tok::Minus) => {
                let f = self.power()?;
                Ok(f.neg())
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(Error::Parse {
                pos,
                msg: format!("expected a factor, found {other:?}"),
            }),
        }
    }
}

pub fn parse_element(sig: &SigRef, src: &str) -> Result<Element> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty expression".to_string(),
        });
    }
    let mut p = Parser { sig, toks, at: 0 };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(Error::Parse {
            pos: p.pos(),
            msg: "trailing input".to_string(),
        });
    }
    Ok(e)
}

/// Parse over a bare signature (used while the table itself is being built).
pub fn parse_terms(sig: &Signature, src: &str) -> Result<(TermMap, DenomMap)> {
    let tmp = Arc::new(sig.clone());
    let e = parse_element(&tmp, src)?;
    Ok(e.into_parts())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sig::{FieldKind, Signature};

    #[test]
    fn rational_literals_and_precedence() {
        let s = Signature::builder(FieldKind::Rational)
            .base_var("x")
            .build()
            .unwrap();
        let e = Element::parse(&s, "3/4*x^2 - x + 1/2").unwrap();
        let doubled = e.add(&e).unwrap();
        let want = Element::parse(&s, "3/2*x^2 - 2*x + 1").unwrap();
        assert!(doubled.equals(&want).unwrap());
    }

    #[test]
    fn imaginary_unit_gated_by_field_flag() {
        let rational = Signature::builder(FieldKind::Rational)
            .base_var("x")
            .build()
            .unwrap();
        assert!(matches!(
            Element::parse(&rational, "i*x"),
            Err(Error::GaussianDisabled)
        ));
        let gaussian = Signature::builder(FieldKind::Gaussian)
            .base_var("x")
            .build()
            .unwrap();
        let e = Element::parse(&gaussian, "i*i").unwrap();
        assert!(e.equals(&Element::from_int(&gaussian, -1)).unwrap());
    }

    #[test]
    fn division_requires_units() {
        let s = Signature::builder(FieldKind::Rational)
            .base_var("x")
            .build()
            .unwrap();
        assert!(matches!(
            Element::parse(&s, "1/x"),
            Err(Error::NotInvertible(_))
        ));
    }
}
