//! Parsing of the text forms printed by the `fmt_*` functions.
//!
//! One grammar covers every level of the tower: integers and `[i0,i1,...]`
//! are constants in F_q, `T` is the variable of A, `x` the generator of K and
//! `t` is tau. Sums, products, quotients by scalars and nonnegative integer
//! powers are allowed; products follow the skew rule tau c = c^q tau.

use crate::error::{Error, Result};
use crate::ext::{ExtElem, ExtField};
use crate::fq::{Fq, FqField};
use crate::ideal::IdealA;
use crate::poly::{Poly, PolyRing};
use crate::ratfunc::RatFunc;
use crate::ring::{Field, Ring};
use crate::skew::{SkewPoly, SkewRing};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Fq(Vec<u64>),
    Var(char),
    Op(char),
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                match s[start..i].parse::<u64>() {
                    Ok(v) => out.push((start, Tok::Int(v))),
                    Err(_) => return err(start, "integer literal too large"),
                }
            }
            '[' => {
                let start = i;
                let Some(end) = s[i..].find(']') else {
                    return err(start, "unclosed '['");
                };
                let body = &s[i + 1..i + end];
                let mut coords = Vec::new();
                for part in body.split(',') {
                    let p = part.trim();
                    match p.parse::<u64>() {
                        Ok(v) => coords.push(v),
                        Err(_) => {
                            return err(start + 1, format!("bad coordinate '{p}' in F_q literal"))
                        }
                    }
                }
                out.push((start, Tok::Fq(coords)));
                i += end + 1;
            }
            'T' | 'x' | 't' => {
                out.push((i, Tok::Var(c)));
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push((i, Tok::Op(c)));
                i += 1;
            }
            _ => return err(i, format!("unexpected character '{c}'")),
        }
    }
    Ok(out)
}

/// Recursive-descent evaluation into K{tau}.
struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    ring: &'a SkewRing,
    allow_x: bool,
    allow_t: bool,
}

impl<'a> Parser<'a> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.at) {
            Some((_, Tok::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<SkewPoly> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.at += 1;
            let rhs = self.term()?;
            acc = if op == '+' {
                self.ring.add(&acc, &rhs)
            } else {
                self.ring.sub(&acc, &rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SkewPoly> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.at += 1;
            let pos = self.pos();
            let rhs = self.unary()?;
            acc = if op == '*' {
                self.ring.mul(&acc, &rhs)
            } else {
                if !rhs.is_scalar() {
                    return err(pos, "division by an expression involving t");
                }
                let c = self.ring.coeff(&rhs, 0);
                let Ok(inv) = self.ring.field().inv(&c) else {
                    return err(pos, "division by zero");
                };
                self.ring.scale_right(&acc, &inv)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SkewPoly> {
        if self.peek_op() == Some('-') {
            self.at += 1;
            let v = self.unary()?;
            return Ok(self.ring.neg(&v));
        }
        if self.peek_op() == Some('+') {
            self.at += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<SkewPoly> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.at += 1;
        let pos = self.pos();
        match self.toks.get(self.at) {
            Some((_, Tok::Int(e))) => {
                let e = *e;
                self.at += 1;
                if e > 1 << 16 {
                    return err(pos, "exponent too large");
                }
                Ok(self.ring.pow(&base, e))
            }
            _ => err(pos, "expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<SkewPoly> {
        let pos = self.pos();
        let Some((_, tok)) = self.toks.get(self.at).cloned() else {
            return err(pos, "unexpected end of input");
        };
        self.at += 1;
        let k = self.ring.field();
        match tok {
            Tok::Int(v) => Ok(self.ring.constant(k.from_fq(int_fq(k.fq(), v)))),
            Tok::Fq(c) => match k.fq().from_coords(&c) {
                Ok(f) => Ok(self.ring.constant(k.from_fq(f))),
                Err(e) => err(pos, format!("bad F_q literal: {e}")),
            },
            Tok::Var('T') => Ok(self.ring.constant(k.t())),
            Tok::Var('x') => {
                if !self.allow_x || k.degree() == 1 {
                    return err(pos, "'x' is not available here");
                }
                Ok(self.ring.constant(k.x()))
            }
            Tok::Var(_) => {
                if !self.allow_t {
                    return err(pos, "'t' is not available here");
                }
                Ok(self.ring.tau())
            }
            Tok::Op('(') => {
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return err(self.pos(), "expected ')'");
                }
                self.at += 1;
                Ok(v)
            }
            Tok::Op(c) => err(pos, format!("unexpected '{c}'")),
        }
    }
}

fn int_fq(fq: &FqField, v: u64) -> Fq {
    fq.from_int((v % fq.characteristic()) as i64)
}

fn run(ring: &SkewRing, s: &str, allow_x: bool, allow_t: bool) -> Result<SkewPoly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return err(0, "empty expression");
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: s.len(),
        ring,
        allow_x,
        allow_t,
    };
    let v = p.expr()?;
    if p.at != p.toks.len() {
        return err(p.pos(), "unexpected trailing input");
    }
    Ok(v)
}

pub fn parse_skew(ring: &SkewRing, s: &str) -> Result<SkewPoly> {
    run(ring, s, true, true)
}

pub fn parse_ext(k: &ExtField, s: &str) -> Result<ExtElem> {
    let ring = SkewRing::new(k.clone());
    Ok(ring.coeff(&run(&ring, s, true, false)?, 0))
}

pub fn parse_rat(a: &PolyRing, s: &str) -> Result<RatFunc> {
    let k = ExtField::rational(a.clone());
    let e = parse_ext(&k, s)?;
    Ok(k.coords(&e).remove(0))
}

pub fn parse_poly(a: &PolyRing, s: &str) -> Result<Poly> {
    let r = parse_rat(a, s)?;
    if !r.is_poly() {
        return err(0, "expected a polynomial in T");
    }
    Ok(r.num().clone())
}

pub fn parse_fq(fq: &FqField, s: &str) -> Result<Fq> {
    let a = PolyRing::new(fq.clone());
    let p = parse_poly(&a, s)?;
    if !p.is_constant() {
        return err(0, "expected an element of F_q");
    }
    Ok(p.coeff(0))
}

/// The ideal generated by a nonzero polynomial.
pub fn parse_ideal(a: &PolyRing, s: &str) -> Result<IdealA> {
    let p = parse_poly(a, s)?;
    if p.is_zero() {
        return err(0, "the zero ideal is not allowed");
    }
    IdealA::new(a, &p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> SkewRing {
        crate::example::quadratic_field(FqField::prime(3).unwrap())
            .unwrap()
            .0
    }

    #[test]
    fn printed_forms_parse_back() {
        let r = quad();
        let k = r.field();
        let a = k.poly_ring();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for _ in 0..50 {
            let u = r.random(&mut rng, 3, 3, 2);
            assert_eq!(parse_skew(&r, &r.fmt_skew(&u)).unwrap(), u);
            let c = k.random(&mut rng, 4, 3);
            assert_eq!(parse_ext(k, &k.fmt_elem(&c)).unwrap(), c);
            let p = a.random(&mut rng, 6);
            assert_eq!(parse_poly(a, &a.fmt_poly(&p)).unwrap(), p);
        }
    }

    #[test]
    fn skew_product_rule() {
        let r = quad();
        let lhs = parse_skew(&r, "t*x").unwrap();
        let rhs = parse_skew(&r, "x^3*t").unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(parse_skew(&r, "-(1) + 2").unwrap(), r.one());
    }

    #[test]
    fn extension_field_constants() {
        let f9 = FqField::new(3, &[1, 0, 1]).unwrap();
        let a = PolyRing::new(f9.clone());
        let p = parse_poly(&a, "[0,1]*T^2 + [2,0]").unwrap();
        assert_eq!(a.fmt_poly(&p), "[2,0] + [0,1]*T^2");
    }

    #[test]
    fn errors_carry_positions() {
        let r = quad();
        let a = r.field().poly_ring();
        assert!(matches!(
            parse_skew(&r, "T + * 2"),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(matches!(
            parse_skew(&r, "1 / t"),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(matches!(
            parse_skew(&r, "(T + 1"),
            Err(Error::Parse { pos: 6, .. })
        ));
        assert!(matches!(
            parse_poly(a, "T?"),
            Err(Error::Parse { pos: 1, .. })
        ));
        assert!(matches!(parse_poly(a, "1 / T"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_ext(r.field(), "t"),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            parse_skew(&r, "T / 0"),
            Err(Error::Parse { pos: 4, .. })
        ));
    }
}
