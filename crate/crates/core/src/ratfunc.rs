//! The rational function field Q = F_q(T).

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::poly::{Poly, PolyRing};
use crate::ring::{Field, Ring};

/// num/den in lowest terms with den monic. Zero is 0/1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn from_poly(a: Poly) -> Self {
        RatFunc {
            num: a,
            den: Poly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// deg num - deg den; None for zero.
    pub fn degree(&self) -> Option<i64> {
        if self.num.is_zero() {
            None
        } else {
            Some(self.num.deg_i() - self.den.deg_i())
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatField {
    a: PolyRing,
}

impl RatField {
    pub fn new(a: PolyRing) -> Self {
        RatField { a }
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.a
    }

    /// Build num/den and bring it to canonical form.
    pub fn frac(&self, num: &Poly, den: &Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.normalize(num.clone(), den.clone()))
    }

    fn normalize(&self, num: Poly, den: Poly) -> RatFunc {
        let a = &self.a;
        if num.is_zero() {
            return RatFunc {
                num,
                den: Poly::one(),
            };
        }
        let g = a.gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                a.div_exact(&num, &g).expect("gcd"),
                a.div_exact(&den, &g).expect("gcd"),
            )
        };
        if !den.is_monic() {
            let inv = a.fq().inv_fq(den.lc()).expect("nonzero");
            num = a.scale(&num, inv);
            den = a.scale(&den, inv);
        }
        RatFunc { num, den }
    }

    pub fn from_fq(&self, c: Fq) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn from_int(&self, n: i64) -> RatFunc {
        self.from_fq(self.a.fq().from_int(n))
    }

    pub fn t(&self) -> RatFunc {
        RatFunc::from_poly(Poly::t())
    }

    /// a^q, computed as a(T^q) since F_q is fixed by the q-power map.
    pub fn frobenius(&self, a: &RatFunc) -> RatFunc {
        let q = self.a.q() as usize;
        RatFunc {
            num: a.num.spread(q),
            den: a.den.spread(q),
        }
    }

    pub fn scale(&self, a: &RatFunc, c: Fq) -> RatFunc {
        if c == Fq::ZERO {
            return self.zero();
        }
        RatFunc {
            num: self.a.scale(&a.num, c),
            den: a.den.clone(),
        }
    }

    pub fn random<R: rand::Rng + ?Sized>(
        &self,
        rng: &mut R,
        num_deg: usize,
        den_deg: usize,
    ) -> RatFunc {
        let num = self.a.random(rng, num_deg);
        let den = self.a.random_nonzero(rng, den_deg);
        self.normalize(num, den)
    }

    pub fn fmt_elem(&self, a: &RatFunc) -> String {
        let n = self.a.fmt_poly(&a.num);
        if a.den.is_one() {
            return n;
        }
        let d = self.a.fmt_poly(&a.den);
        let wrap = |s: String, p: &Poly| {
            if p.coeffs().iter().filter(|c| **c != Fq::ZERO).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{} / {}", wrap(n, &a.num), wrap(d, &a.den))
    }
}

impl Ring for RatField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::from_poly(Poly::zero())
    }

    fn one(&self) -> RatFunc {
        RatFunc::from_poly(Poly::one())
    }

    fn add(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        let a = &self.a;
        if x.is_zero() {
            return y.clone();
        }
        if y.is_zero() {
            return x.clone();
        }
        if x.den == y.den {
            return self.normalize(a.add(&x.num, &y.num), x.den.clone());
        }
        let g = a.gcd(&x.den, &y.den);
        let xd = a.div_exact(&x.den, &g).expect("gcd");
        let yd = a.div_exact(&y.den, &g).expect("gcd");
        let num = a.add(&a.mul(&x.num, &yd), &a.mul(&y.num, &xd));
        self.normalize(num, a.mul(&x.den, &yd))
    }

    fn neg(&self, x: &RatFunc) -> RatFunc {
        RatFunc {
            num: self.a.neg(&x.num),
            den: x.den.clone(),
        }
    }

    fn mul(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        let a = &self.a;
        if x.is_zero() || y.is_zero() {
            return self.zero();
        }
        // cross-cancel so the product is already reduced
        let g1 = a.gcd(&x.num, &y.den);
        let g2 = a.gcd(&y.num, &x.den);
        let xn = a.div_exact(&x.num, &g1).expect("gcd");
        let yd = a.div_exact(&y.den, &g1).expect("gcd");
        let yn = a.div_exact(&y.num, &g2).expect("gcd");
        let xd = a.div_exact(&x.den, &g2).expect("gcd");
        let num = a.mul(&xn, &yn);
        let den = a.mul(&xd, &yd);
        let inv = a.fq().inv_fq(den.lc()).expect("nonzero");
        RatFunc {
            num: a.scale(&num, inv),
            den: a.scale(&den, inv),
        }
    }

    fn is_zero(&self, x: &RatFunc) -> bool {
        x.is_zero()
    }
}

impl Field for RatField {
    fn inv(&self, x: &RatFunc) -> Result<RatFunc> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.normalize(x.den.clone(), x.num.clone()))
    }
}
