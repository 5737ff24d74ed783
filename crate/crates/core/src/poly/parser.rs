//! Recursive-descent parser for the polynomial text grammar.
//!
//! Accepted syntax: sums and differences of terms, `*` products, `^` with a
//! non-negative integer exponent, integer or `p/q` rational literals,
//! parentheses, and implicit multiplication between juxtaposed factors
//! (`2x`, `3 x y^2`).

use super::{Coeff, MultiPoly, PolyError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(text: &'a str) -> Result<Vec<(Tok, usize)>, PolyError> {
        let mut lx = Lexer {
            src: text.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        while lx.pos < lx.src.len() {
            let start = lx.pos;
            let b = lx.src[lx.pos];
            match b {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    lx.pos += 1;
                }
                b'+' => {
                    out.push((Tok::Plus, start));
                    lx.pos += 1;
                }
                b'-' => {
                    out.push((Tok::Minus, start));
                    lx.pos += 1;
                }
                b'*' => {
                    out.push((Tok::Star, start));
                    lx.pos += 1;
                }
                b'^' => {
                    out.push((Tok::Caret, start));
                    lx.pos += 1;
                }
                b'/' => {
                    out.push((Tok::Slash, start));
                    lx.pos += 1;
                }
                b'(' => {
                    out.push((Tok::LParen, start));
                    lx.pos += 1;
                }
                b')' => {
                    out.push((Tok::RParen, start));
                    lx.pos += 1;
                }
                b'0'..=b'9' => {
                    while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_digit() {
                        lx.pos += 1;
                    }
                    let s = std::str::from_utf8(&lx.src[start..lx.pos]).unwrap();
                    out.push((Tok::Int(s.parse().unwrap()), start));
                }
                _ if b.is_ascii_alphabetic() || b == b'_' => {
                    while lx.pos < lx.src.len()
                        && (lx.src[lx.pos].is_ascii_alphanumeric() || lx.src[lx.pos] == b'_')
                    {
                        lx.pos += 1;
                    }
                    let s = std::str::from_utf8(&lx.src[start..lx.pos]).unwrap();
                    out.push((Tok::Ident(s.to_string()), start));
                }
                _ => {
                    return Err(PolyError::Syntax {
                        pos: start,
                        msg: format!("unexpected character `{}`", b as char),
                    })
                }
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'a [&'a str],
    end: usize,
}

/// Parse `text` into the canonical sparse form over the given ordered
/// variable names.
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<MultiPoly, PolyError> {
    let toks = Lexer::tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        vars,
        end: text.len(),
    };
    let poly = p.expr()?;
    if p.at < p.toks.len() {
        return Err(PolyError::Syntax {
            pos: p.toks[p.at].1,
            msg: "trailing input".to_string(),
        });
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.factor()?)?;
                }
                // implicit multiplication: `2x`, `x y`, `3(x+1)`
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let k = self.nat_exponent()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn nat_exponent(&mut self) -> Result<u32, PolyError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => u32::try_from(&n).map_err(|_| PolyError::Syntax {
                pos,
                msg: "exponent too large".to_string(),
            }),
            Some(Tok::Minus) => Err(PolyError::NegativeExponent { pos }),
            _ => Err(PolyError::Syntax {
                pos,
                msg: "expected a non-negative integer exponent".to_string(),
            }),
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, PolyError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                // optional rational literal `p/q`
                if let Some(Tok::Slash) = self.peek() {
                    let save = self.at;
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            if d.is_zero() {
                                return Err(PolyError::Syntax {
                                    pos: dpos,
                                    msg: "zero denominator".to_string(),
                                });
                            }
                            return Ok(MultiPoly::constant(
                                coeff(n) / coeff(d),
                                self.vars.len(),
                            ));
                        }
                        _ => {
                            self.at = save;
                        }
                    }
                }
                Ok(MultiPoly::constant(coeff(n), self.vars.len()))
            }
            Some(Tok::Ident(name)) => {
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(MultiPoly::var(i, self.vars.len())),
                    None => Err(PolyError::UnknownVariable { name, pos }),
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(PolyError::Syntax {
                        pos,
                        msg: "unclosed parenthesis".to_string(),
                    }),
                }
            }
            Some(Tok::Minus) => Ok(self.factor()?.neg()),
            other => Err(PolyError::Syntax {
                pos,
                msg: format!("expected a term, found {:?}", other),
            }),
        }
    }
}

fn coeff(n: BigInt) -> Coeff {
    BigRational::from_integer(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_positions() {
        let err = parse_poly("x + $", &["x"]).unwrap_err();
        assert_eq!(
            err,
            PolyError::Syntax {
                pos: 4,
                msg: "unexpected character `$`".to_string()
            }
        );

        let err = parse_poly("x + w", &["x"]).unwrap_err();
        assert!(matches!(err, PolyError::UnknownVariable { ref name, pos: 4 } if name == "w"));

        let err = parse_poly("x^-2", &["x"]).unwrap_err();
        assert_eq!(err, PolyError::NegativeExponent { pos: 2 });
    }

    #[test]
    fn implicit_multiplication() {
        let a = parse_poly("2x y^2", &["x", "y"]).unwrap();
        let b = parse_poly("2*x*y^2", &["x", "y"]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rational_literals_and_parens() {
        let a = parse_poly("3/2*(x + 1)^2 - 1/2", &["x"]).unwrap();
        let b = parse_poly("3/2*x^2 + 3*x + 1", &["x"]).unwrap();
        assert_eq!(a, b);
    }
}
