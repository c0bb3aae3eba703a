//! Finite extensions K = Q[x]/(f) of the rational function field, with f
//! monic and integral over A. Elements are stored over a common monic
//! denominator in A.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqField};
use crate::linalg;
use crate::poly::{Poly, PolyRing};
use crate::ratfunc::{RatField, RatFunc};
use crate::ring::{Field, Ring};

/// (sum_i num[i] x^i) / den with den monic and the content gcd trivial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtElem {
    num: Vec<Poly>,
    den: Poly,
}

impl ExtElem {
    pub fn num(&self) -> &[Poly] {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Poly::is_zero)
    }

    /// True when the element lies in Q.
    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(Poly::is_zero)
    }

    /// True when the element lies in F_q.
    pub fn as_fq(&self) -> Option<Fq> {
        if self.is_rational() && self.den.is_one() && self.num[0].is_constant() {
            Some(self.num[0].coeff(0))
        } else {
            None
        }
    }
}

#[derive(Debug)]
struct ExtInner {
    q: RatField,
    f: Vec<Poly>,
    e: usize,
    /// x^(q i) mod f for i < e.
    xq: Vec<Vec<Poly>>,
}

#[derive(Clone, Debug)]
pub struct ExtField {
    inner: Arc<ExtInner>,
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.f == other.inner.f && self.inner.q == other.inner.q)
    }
}

impl ExtField {
    /// K = Q itself.
    pub fn rational(a: PolyRing) -> Self {
        Self::build(RatField::new(a), vec![Poly::zero(), Poly::one()])
    }

    /// K = Q[x]/(f), f given by its coefficients f_0..f_e in A with f_e = 1.
    /// Rejects f with a root in Q (which covers reducibility for e <= 3).
    pub fn new(a: PolyRing, f: Vec<Poly>) -> Result<Self> {
        let mut f = f;
        while f.last().is_some_and(Poly::is_zero) {
            f.pop();
        }
        if f.len() < 2 {
            return Err(Error::InvalidField(
                "extension modulus must have positive degree".into(),
            ));
        }
        if !f.last().unwrap().is_one() {
            return Err(Error::InvalidField(
                "extension modulus must be monic with coefficients in A".into(),
            ));
        }
        let qf = RatField::new(a);
        if f.len() > 2 {
            let coeffs: Vec<RatFunc> = f.iter().map(|c| RatFunc::from_poly(c.clone())).collect();
            if !crate::roots::rational_roots(&qf, &coeffs)?.is_empty() {
                return Err(Error::InvalidField(
                    "extension modulus has a root in F_q(T)".into(),
                ));
            }
        }
        Ok(Self::build(qf, f))
    }

    fn build(q: RatField, f: Vec<Poly>) -> Self {
        let e = f.len() - 1;
        let mut inner = ExtInner {
            q,
            f,
            e,
            xq: Vec::new(),
        };
        let a = inner.q.poly_ring().clone();
        let qq = a.q();
        let mut xq = Vec::with_capacity(e);
        let mut cur = unit_vec(e, 0);
        let xqv = pow_x(&a, &inner, qq);
        for _ in 0..e {
            xq.push(cur.clone());
            cur = mul_reduce(&a, &inner, &cur, &xqv);
        }
        inner.xq = xq;
        ExtField {
            inner: Arc::new(inner),
        }
    }

    pub fn degree(&self) -> usize {
        self.inner.e
    }

    pub fn modulus(&self) -> &[Poly] {
        &self.inner.f
    }

    pub fn rat(&self) -> &RatField {
        &self.inner.q
    }

    pub fn poly_ring(&self) -> &PolyRing {
        self.inner.q.poly_ring()
    }

    pub fn fq(&self) -> &FqField {
        self.poly_ring().fq()
    }

    pub fn q(&self) -> u64 {
        self.poly_ring().q()
    }

    pub fn is_rational_field(&self) -> bool {
        self.inner.e == 1
    }

    fn make(&self, num: Vec<Poly>, den: Poly) -> ExtElem {
        let a = self.poly_ring();
        if num.iter().all(Poly::is_zero) {
            return self.zero();
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = a.gcd(&g, c);
        }
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.iter()
                    .map(|c| a.div_exact(c, &g).expect("content"))
                    .collect(),
                a.div_exact(&den, &g).expect("content"),
            )
        };
        if !den.is_monic() {
            let inv = a.fq().inv_fq(den.lc()).expect("nonzero");
            num = num.iter().map(|c| a.scale(c, inv)).collect();
            den = a.scale(&den, inv);
        }
        ExtElem { num, den }
    }

    /// Build from A-coordinates over a common denominator.
    pub fn from_parts(&self, num: Vec<Poly>, den: Poly) -> Result<ExtElem> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.len() > self.inner.e {
            return Err(Error::FieldMismatch);
        }
        let mut num = num;
        num.resize(self.inner.e, Poly::zero());
        Ok(self.make(num, den))
    }

    pub fn from_poly(&self, a: &Poly) -> ExtElem {
        let mut num = vec![Poly::zero(); self.inner.e];
        num[0] = a.clone();
        ExtElem {
            num,
            den: Poly::one(),
        }
    }

    pub fn from_rat(&self, r: &RatFunc) -> ExtElem {
        let mut num = vec![Poly::zero(); self.inner.e];
        num[0] = r.num().clone();
        self.make(num, r.den().clone())
    }

    pub fn from_fq(&self, c: Fq) -> ExtElem {
        self.from_poly(&Poly::constant(c))
    }

    pub fn from_int(&self, n: i64) -> ExtElem {
        self.from_fq(self.fq().from_int(n))
    }

    pub fn t(&self) -> ExtElem {
        self.from_poly(&Poly::t())
    }

    /// The generator x (equal to T when e = 1 is not meaningful; errors there).
    pub fn x(&self) -> ExtElem {
        let e = self.inner.e;
        if e == 1 {
            let f0 = &self.inner.f[0];
            return self.from_poly(&self.poly_ring().neg(f0));
        }
        ExtElem {
            num: unit_vec(e, 1),
            den: Poly::one(),
        }
    }

    /// Coordinates in Q w.r.t. 1, x, ..., x^(e-1).
    pub fn coords(&self, a: &ExtElem) -> Vec<RatFunc> {
        let q = &self.inner.q;
        a.num
            .iter()
            .map(|c| q.frac(c, &a.den).expect("monic den"))
            .collect()
    }

    pub fn from_coords(&self, c: &[RatFunc]) -> Result<ExtElem> {
        if c.len() > self.inner.e {
            return Err(Error::FieldMismatch);
        }
        let a = self.poly_ring();
        let mut den = Poly::one();
        for r in c {
            den = a.lcm(&den, r.den());
        }
        let num = c
            .iter()
            .map(|r| a.mul(r.num(), &a.div_exact(&den, r.den()).expect("lcm")))
            .collect();
        self.from_parts(num, den)
    }

    pub fn scale_fq(&self, a: &ExtElem, c: Fq) -> ExtElem {
        if c == Fq::ZERO {
            return self.zero();
        }
        let r = self.poly_ring();
        ExtElem {
            num: a.num.iter().map(|p| r.scale(p, c)).collect(),
            den: a.den.clone(),
        }
    }

    pub fn mul_rat(&self, a: &ExtElem, r: &RatFunc) -> ExtElem {
        let p = self.poly_ring();
        self.make(
            a.num.iter().map(|c| p.mul(c, r.num())).collect(),
            p.mul(&a.den, r.den()),
        )
    }

    /// a^q via T -> T^q on coordinates and the precomputed x^(qi).
    pub fn frobenius(&self, a: &ExtElem) -> ExtElem {
        let p = self.poly_ring();
        let q = p.q() as usize;
        let e = self.inner.e;
        if e == 1 {
            return ExtElem {
                num: vec![a.num[0].spread(q)],
                den: a.den.spread(q),
            };
        }
        let mut num = vec![Poly::zero(); e];
        for (i, c) in a.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = c.spread(q);
            for (j, b) in self.inner.xq[i].iter().enumerate() {
                if !b.is_zero() {
                    num[j] = p.add(&num[j], &p.mul(&cs, b));
                }
            }
        }
        self.make(num, a.den.spread(q))
    }

    /// a^(q^k).
    pub fn frobenius_pow(&self, a: &ExtElem, k: usize) -> ExtElem {
        let mut r = a.clone();
        for _ in 0..k {
            r = self.frobenius(&r);
        }
        r
    }

    /// Q-linear map of multiplication by a, as a matrix over Q (columns a x^j).
    pub fn mult_matrix(&self, a: &ExtElem) -> linalg::Matrix<RatFunc> {
        let e = self.inner.e;
        let q = &self.inner.q;
        let mut m = vec![vec![q.zero(); e]; e];
        for j in 0..e {
            let col = self.coords(&self.mul(
                a,
                &ExtElem {
                    num: unit_vec(e, j),
                    den: Poly::one(),
                },
            ));
            for (i, c) in col.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        m
    }

    pub fn trace(&self, a: &ExtElem) -> RatFunc {
        let m = self.mult_matrix(a);
        let q = &self.inner.q;
        (0..self.inner.e).fold(q.zero(), |acc, i| q.add(&acc, &m[i][i]))
    }

    pub fn norm(&self, a: &ExtElem) -> RatFunc {
        linalg::determinant(&self.inner.q, &self.mult_matrix(a))
    }

    /// det(Tr(x^(i+j))). Lies in A since f is integral; zero iff f is inseparable.
    pub fn discriminant(&self) -> Poly {
        let e = self.inner.e;
        let traces: Vec<RatFunc> = (0..2 * e - 1)
            .map(|k| self.trace(&self.pow(&self.x_basis(1), k as u64)))
            .collect();
        let m: linalg::Matrix<RatFunc> = (0..e)
            .map(|i| (0..e).map(|j| traces[i + j].clone()).collect())
            .collect();
        let d = linalg::determinant(&self.inner.q, &m);
        debug_assert!(d.is_poly());
        d.num().clone()
    }

    fn x_basis(&self, j: usize) -> ExtElem {
        let e = self.inner.e;
        if e == 1 {
            return self.x();
        }
        ExtElem {
            num: unit_vec(e, j),
            den: Poly::one(),
        }
    }

    pub fn random<R: rand::Rng + ?Sized>(
        &self,
        rng: &mut R,
        num_deg: usize,
        den_deg: usize,
    ) -> ExtElem {
        let p = self.poly_ring();
        let num = (0..self.inner.e).map(|_| p.random(rng, num_deg)).collect();
        let den = p.random_nonzero(rng, den_deg);
        self.make(num, den)
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(
        &self,
        rng: &mut R,
        num_deg: usize,
        den_deg: usize,
    ) -> ExtElem {
        loop {
            let a = self.random(rng, num_deg, den_deg);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// Expression text such as `1 + (T)*x`, readable back by the parser.
    pub fn fmt_elem(&self, a: &ExtElem) -> String {
        let q = &self.inner.q;
        if self.inner.e == 1 {
            return q.fmt_elem(&self.coords(a)[0]);
        }
        let mut terms = Vec::new();
        for (i, c) in self.coords(a).iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = q.fmt_elem(c);
            let xs = if i == 1 {
                "x".to_string()
            } else {
                format!("x^{i}")
            };
            terms.push(match i {
                0 => s,
                _ if *c == q.one() => xs,
                _ => format!("({s})*{xs}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn unit_vec(e: usize, j: usize) -> Vec<Poly> {
    let mut v = vec![Poly::zero(); e];
    if j < e {
        v[j] = Poly::one();
    }
    v
}

/// Product of A-coordinate vectors reduced mod the monic f.
fn mul_reduce(a: &PolyRing, inner: &ExtInner, x: &[Poly], y: &[Poly]) -> Vec<Poly> {
    let e = inner.e;
    let mut prod = vec![Poly::zero(); 2 * e - 1];
    for (i, u) in x.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        for (j, v) in y.iter().enumerate() {
            if !v.is_zero() {
                prod[i + j] = a.add(&prod[i + j], &a.mul(u, v));
            }
        }
    }
    for k in (e..2 * e - 1).rev() {
        let c = std::mem::take(&mut prod[k]);
        if c.is_zero() {
            continue;
        }
        for i in 0..e {
            if !inner.f[i].is_zero() {
                prod[k - e + i] = a.sub(&prod[k - e + i], &a.mul(&c, &inner.f[i]));
            }
        }
    }
    prod.truncate(e);
    prod
}

fn pow_x(a: &PolyRing, inner: &ExtInner, mut n: u64) -> Vec<Poly> {
    let e = inner.e;
    let mut base = if e == 1 {
        vec![a.neg(&inner.f[0])]
    } else {
        unit_vec(e, 1)
    };
    let mut acc = unit_vec(e, 0);
    while n > 0 {
        if n & 1 == 1 {
            acc = mul_reduce(a, inner, &acc, &base);
        }
        n >>= 1;
        if n > 0 {
            base = mul_reduce(a, inner, &base, &base);
        }
    }
    acc
}

impl Ring for ExtField {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        ExtElem {
            num: vec![Poly::zero(); self.inner.e],
            den: Poly::one(),
        }
    }

    fn one(&self) -> ExtElem {
        self.from_poly(&Poly::one())
    }

    fn add(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        let a = self.poly_ring();
        if x.is_zero() {
            return y.clone();
        }
        if y.is_zero() {
            return x.clone();
        }
        if x.den == y.den {
            let num = x.num.iter().zip(&y.num).map(|(u, v)| a.add(u, v)).collect();
            return self.make(num, x.den.clone());
        }
        let g = a.gcd(&x.den, &y.den);
        let xd = a.div_exact(&x.den, &g).expect("gcd");
        let yd = a.div_exact(&y.den, &g).expect("gcd");
        let num = x
            .num
            .iter()
            .zip(&y.num)
            .map(|(u, v)| a.add(&a.mul(u, &yd), &a.mul(v, &xd)))
            .collect();
        self.make(num, a.mul(&x.den, &yd))
    }

    fn neg(&self, x: &ExtElem) -> ExtElem {
        let a = self.poly_ring();
        ExtElem {
            num: x.num.iter().map(|c| a.neg(c)).collect(),
            den: x.den.clone(),
        }
    }

    fn mul(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        let a = self.poly_ring();
        if x.is_zero() || y.is_zero() {
            return self.zero();
        }
        let num = mul_reduce(a, &self.inner, &x.num, &y.num);
        self.make(num, a.mul(&x.den, &y.den))
    }

    fn is_zero(&self, x: &ExtElem) -> bool {
        x.is_zero()
    }
}

impl Field for ExtField {
    fn inv(&self, x: &ExtElem) -> Result<ExtElem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = &self.inner.q;
        if self.inner.e == 1 {
            let r = q.frac(&x.den, &x.num[0])?;
            return Ok(self.from_rat(&r));
        }
        // invert the integral part, then multiply back the denominator
        let int = ExtElem {
            num: x.num.clone(),
            den: Poly::one(),
        };
        let m = self.mult_matrix(&int);
        let mut rhs = vec![q.zero(); self.inner.e];
        rhs[0] = q.one();
        let sol = linalg::solve(q, &m, &rhs).map_err(|_| {
            Error::InvalidField("extension modulus is reducible over F_q(T)".into())
        })?;
        let y = self.from_coords(&sol)?;
        let r = self.from_poly(&x.den);
        Ok(self.mul(&y, &r))
    }
}
