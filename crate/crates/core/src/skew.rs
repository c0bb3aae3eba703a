//! The twisted polynomial ring K{tau} with tau c = c^q tau.

use crate::error::{Error, Result};
use crate::ext::{ExtElem, ExtField};
use crate::galois::GaloisDatum;
use crate::ring::{Field, Ring};

/// Coefficient of tau^i at index i, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct SkewPoly {
    c: Vec<ExtElem>,
}

impl SkewPoly {
    pub fn zero() -> Self {
        SkewPoly { c: Vec::new() }
    }

    pub fn from_coeffs(mut c: Vec<ExtElem>) -> Self {
        while c.last().is_some_and(ExtElem::is_zero) {
            c.pop();
        }
        SkewPoly { c }
    }

    pub fn coeffs(&self) -> &[ExtElem] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// tau-degree; None for zero.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg_i(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> Option<&ExtElem> {
        self.c.last()
    }

    /// True when the polynomial is a scalar (tau-degree 0 or zero).
    pub fn is_scalar(&self) -> bool {
        self.c.len() <= 1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkewRing {
    k: ExtField,
}

impl SkewRing {
    pub fn new(k: ExtField) -> Self {
        SkewRing { k }
    }

    pub fn field(&self) -> &ExtField {
        &self.k
    }

    pub fn coeff(&self, a: &SkewPoly, i: usize) -> ExtElem {
        a.c.get(i).cloned().unwrap_or_else(|| self.k.zero())
    }

    pub fn constant(&self, c: ExtElem) -> SkewPoly {
        SkewPoly::from_coeffs(vec![c])
    }

    pub fn tau(&self) -> SkewPoly {
        self.monomial(self.k.one(), 1)
    }

    pub fn monomial(&self, c: ExtElem, i: usize) -> SkewPoly {
        let mut v = vec![self.k.zero(); i + 1];
        v[i] = c;
        SkewPoly::from_coeffs(v)
    }

    /// c * a.
    pub fn scale_left(&self, c: &ExtElem, a: &SkewPoly) -> SkewPoly {
        SkewPoly::from_coeffs(a.c.iter().map(|x| self.k.mul(c, x)).collect())
    }

    /// a * c = sum a_i c^(q^i) tau^i.
    pub fn scale_right(&self, a: &SkewPoly, c: &ExtElem) -> SkewPoly {
        let mut cp = c.clone();
        let mut out = Vec::with_capacity(a.c.len());
        for (i, x) in a.c.iter().enumerate() {
            if i > 0 {
                cp = self.k.frobenius(&cp);
            }
            out.push(self.k.mul(x, &cp));
        }
        SkewPoly::from_coeffs(out)
    }

    /// c a c^(-1).
    pub fn conjugate_scalar(&self, c: &ExtElem, a: &SkewPoly) -> Result<SkewPoly> {
        let ci = self.k.inv(c)?;
        Ok(self.scale_right(&self.scale_left(c, a), &ci))
    }

    /// Left-multiply by the inverse leading coefficient.
    pub fn monic(&self, a: &SkewPoly) -> SkewPoly {
        match a.lc() {
            None => a.clone(),
            Some(l) if self.k.is_one(l) => a.clone(),
            Some(l) => self.scale_left(&self.k.inv(l).expect("nonzero"), a),
        }
    }

    /// Quotient and remainder with a = quot * b + rem, deg rem < deg b.
    pub fn right_divmod(&self, a: &SkewPoly, b: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
        let k = &self.k;
        let Some(n) = b.degree() else {
            return Err(Error::DivisionByZero);
        };
        let Some(da) = a.degree() else {
            return Ok((SkewPoly::zero(), SkewPoly::zero()));
        };
        if da < n {
            return Ok((SkewPoly::zero(), a.clone()));
        }
        // frobenius powers of b's coefficients, filled on demand
        let mut bf: Vec<Vec<ExtElem>> = vec![b.c.clone()];
        let mut binv: Vec<ExtElem> = vec![k.inv(b.lc().unwrap())?];
        let mut r = a.c.clone();
        let mut quot = vec![k.zero(); da - n + 1];
        for m in (n..=da).rev() {
            if r[m].is_zero() {
                continue;
            }
            let s = m - n;
            while bf.len() <= s {
                let next: Vec<ExtElem> =
                    bf.last().unwrap().iter().map(|x| k.frobenius(x)).collect();
                binv.push(k.frobenius(binv.last().unwrap()));
                bf.push(next);
            }
            let c = k.mul(&r[m], &binv[s]);
            for (j, bj) in bf[s].iter().enumerate().take(n) {
                if !bj.is_zero() {
                    r[s + j] = k.sub(&r[s + j], &k.mul(&c, bj));
                }
            }
            r[m] = k.zero();
            quot[s] = c;
        }
        r.truncate(n);
        Ok((SkewPoly::from_coeffs(quot), SkewPoly::from_coeffs(r)))
    }

    pub fn right_rem(&self, a: &SkewPoly, b: &SkewPoly) -> Result<SkewPoly> {
        Ok(self.right_divmod(a, b)?.1)
    }

    /// q with a = q * b; errors if b does not right-divide a.
    pub fn right_div_exact(&self, a: &SkewPoly, b: &SkewPoly) -> Result<SkewPoly> {
        let (qt, r) = self.right_divmod(a, b)?;
        if !r.is_zero() {
            return Err(Error::DivisionInexact);
        }
        Ok(qt)
    }

    /// Whether b right-divides a.
    pub fn right_divides(&self, b: &SkewPoly, a: &SkewPoly) -> bool {
        if b.is_zero() {
            return a.is_zero();
        }
        self.right_rem(a, b).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic generator of the left ideal K{tau}a + K{tau}b.
    pub fn right_gcd(&self, a: &SkewPoly, b: &SkewPoly) -> Result<SkewPoly> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.right_rem(&x, &y)?;
            x = self.monic(&y);
            y = r;
        }
        Ok(self.monic(&x))
    }

    /// Monic generator of K{tau}a meet K{tau}b, the least common left multiple.
    pub fn left_lcm(&self, a: &SkewPoly, b: &SkewPoly) -> Result<SkewPoly> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        // s_i a + t_i b = r_i; the last s with r = 0 gives the multiple
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), SkewPoly::zero());
        while !r1.is_zero() {
            let (qt, r) = self.right_divmod(&r0, &r1)?;
            let s = self.sub(&s0, &self.mul(&qt, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        Ok(self.monic(&self.mul(&s1, a)))
    }

    pub fn eval(&self, a: &SkewPoly, lambda: &ExtElem) -> ExtElem {
        let k = &self.k;
        let mut acc = k.zero();
        let mut lp = lambda.clone();
        for (i, c) in a.c.iter().enumerate() {
            if i > 0 {
                lp = k.frobenius(&lp);
            }
            if !c.is_zero() {
                acc = k.add(&acc, &k.mul(c, &lp));
            }
        }
        acc
    }

    /// The constant term.
    pub fn differential(&self, a: &SkewPoly) -> ExtElem {
        self.coeff(a, 0)
    }

    /// Coefficientwise action of the group element with index s.
    pub fn conjugate(&self, g: &GaloisDatum, s: usize, a: &SkewPoly) -> SkewPoly {
        SkewPoly::from_coeffs(a.c.iter().map(|c| g.apply(s, c)).collect())
    }

    /// Coefficients all fixed by the group.
    pub fn is_fixed(&self, g: &GaloisDatum, a: &SkewPoly) -> bool {
        a.c.iter().all(|c| g.is_fixed(c))
    }

    pub fn random<R: rand::Rng + ?Sized>(
        &self,
        rng: &mut R,
        deg: usize,
        num_deg: usize,
        den_deg: usize,
    ) -> SkewPoly {
        SkewPoly::from_coeffs(
            (0..=deg)
                .map(|_| self.k.random(rng, num_deg, den_deg))
                .collect(),
        )
    }

    /// Random polynomial of exact tau-degree deg.
    pub fn random_exact<R: rand::Rng + ?Sized>(
        &self,
        rng: &mut R,
        deg: usize,
        num_deg: usize,
        den_deg: usize,
    ) -> SkewPoly {
        let mut c: Vec<ExtElem> = (0..deg)
            .map(|_| self.k.random(rng, num_deg, den_deg))
            .collect();
        c.push(self.k.random_nonzero(rng, num_deg, den_deg));
        SkewPoly::from_coeffs(c)
    }

    /// `c0 + (c1)*t + t^2`, with `t` standing for tau.
    pub fn fmt_skew(&self, a: &SkewPoly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let k = &self.k;
        let mut terms = Vec::new();
        for (i, c) in a.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ts = if i == 1 {
                "t".to_string()
            } else {
                format!("t^{i}")
            };
            terms.push(if i == 0 {
                format!("({})", k.fmt_elem(c))
            } else if k.is_one(c) {
                ts
            } else {
                format!("({})*{ts}", k.fmt_elem(c))
            });
        }
        terms.join(" + ")
    }
}

impl Ring for SkewRing {
    type Elem = SkewPoly;

    fn zero(&self) -> SkewPoly {
        SkewPoly::zero()
    }

    fn one(&self) -> SkewPoly {
        self.constant(self.k.one())
    }

    fn add(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        let n = a.c.len().max(b.c.len());
        SkewPoly::from_coeffs(
            (0..n)
                .map(|i| self.k.add(&self.coeff(a, i), &self.coeff(b, i)))
                .collect(),
        )
    }

    fn neg(&self, a: &SkewPoly) -> SkewPoly {
        SkewPoly {
            c: a.c.iter().map(|x| self.k.neg(x)).collect(),
        }
    }

    fn mul(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        let k = &self.k;
        if a.is_zero() || b.is_zero() {
            return SkewPoly::zero();
        }
        let mut out = vec![k.zero(); a.c.len() + b.c.len() - 1];
        let mut bf = b.c.clone();
        for (i, ai) in a.c.iter().enumerate() {
            if i > 0 {
                bf = bf.iter().map(|x| k.frobenius(x)).collect();
            }
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in bf.iter().enumerate() {
                if !bj.is_zero() {
                    out[i + j] = k.add(&out[i + j], &k.mul(ai, bj));
                }
            }
        }
        SkewPoly::from_coeffs(out)
    }

    fn is_zero(&self, a: &SkewPoly) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqField;
    use crate::galois::GaloisGen;
    use crate::poly::{Poly, PolyRing};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quad(q: u64) -> (SkewRing, GaloisDatum) {
        let fq = if q == 9 {
            FqField::new(3, &[1, 0, 1]).unwrap()
        } else {
            FqField::prime(q).unwrap()
        };
        let a = PolyRing::new(fq);
        let k = ExtField::new(
            a.clone(),
            vec![a.from_ints(&[-1, -1]), Poly::zero(), Poly::one()],
        )
        .unwrap();
        let g = GaloisDatum::new(
            k.clone(),
            vec![GaloisGen {
                name: "s".into(),
                image: k.neg(&k.x()),
                order: 2,
            }],
        )
        .unwrap();
        (SkewRing::new(k), g)
    }

    #[test]
    fn defining_relation() {
        let (r, _) = quad(3);
        let k = r.field().clone();
        let t = r.constant(k.t());
        assert_eq!(r.mul(&r.tau(), &t), r.monomial(k.pow(&k.t(), 3), 1));
        let p1 = r.add(&r.tau(), &r.one());
        let m1 = r.sub(&r.tau(), &r.one());
        assert_eq!(r.mul(&p1, &m1), r.sub(&r.monomial(k.one(), 2), &r.one()));
    }

    #[test]
    fn division_examples() {
        let (r, _) = quad(3);
        let k = r.field().clone();
        let (qt, rem) = r.right_divmod(&r.monomial(k.one(), 2), &r.tau()).unwrap();
        assert_eq!((qt, rem), (r.tau(), SkewPoly::zero()));
        let c = k.add(&k.x(), &k.t());
        let (qt, rem) = r
            .right_divmod(&r.add(&r.tau(), &r.constant(c.clone())), &r.tau())
            .unwrap();
        assert_eq!((qt, rem), (r.one(), r.constant(c)));
        assert_eq!(
            r.right_divmod(&r.tau(), &SkewPoly::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn gcd_examples() {
        let (r, _) = quad(3);
        let m1 = r.sub(&r.tau(), &r.one());
        let p1 = r.add(&r.tau(), &r.one());
        assert_eq!(r.right_gcd(&m1, &p1).unwrap(), r.one());
        assert_eq!(r.right_gcd(&m1, &SkewPoly::zero()).unwrap(), m1);
        assert_eq!(
            r.right_gcd(&SkewPoly::zero(), &SkewPoly::zero()),
            Err(Error::BothZero)
        );
    }

    #[test]
    fn ring_laws_and_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for q in [3, 9] {
            let (r, _) = quad(q);
            for _ in 0..60 {
                let a = r.random(&mut rng, 2, 1, 1);
                let b = r.random(&mut rng, 1, 1, 1);
                let c = r.random(&mut rng, 1, 1, 0);
                assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
                assert_eq!(
                    r.mul(&a, &r.add(&b, &c)),
                    r.add(&r.mul(&a, &b), &r.mul(&a, &c))
                );
                if !b.is_zero() {
                    let (qt, rem) = r.right_divmod(&a, &b).unwrap();
                    assert_eq!(r.add(&r.mul(&qt, &b), &rem), a);
                    assert!(rem.deg_i() < b.deg_i());
                }
            }
        }
    }

    #[test]
    fn gcd_finds_planted_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let (r, _) = quad(3);
        for _ in 0..30 {
            let c = r.random_exact(&mut rng, 1, 1, 0);
            let x = r.random_exact(&mut rng, 1, 1, 0);
            let y = r.random_exact(&mut rng, 1, 1, 0);
            let g = r.right_gcd(&r.mul(&x, &c), &r.mul(&y, &c)).unwrap();
            assert!(r.right_divides(&c, &g));
            assert!(r.right_divides(&g, &r.mul(&x, &c)));
        }
    }

    #[test]
    fn left_lcm_is_common_multiple() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let (r, _) = quad(3);
        for _ in 0..20 {
            let a = r.random_exact(&mut rng, 1, 1, 0);
            let b = r.random_exact(&mut rng, 2, 1, 0);
            let c = r.random_exact(&mut rng, 1, 1, 0);
            let (ac, bc) = (r.mul(&a, &c), r.mul(&b, &c));
            let l = r.left_lcm(&ac, &bc).unwrap();
            assert!(r.right_divides(&ac, &l));
            assert!(r.right_divides(&bc, &l));
            let g = r.right_gcd(&ac, &bc).unwrap();
            assert_eq!(l.deg_i() + g.deg_i(), ac.deg_i() + bc.deg_i());
        }
    }

    #[test]
    fn eval_differential_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let (r, g) = quad(3);
        let k = r.field().clone();
        let s = g.gen_index(0);
        for _ in 0..30 {
            let a = r.random(&mut rng, 2, 1, 1);
            let b = r.random(&mut rng, 1, 1, 1);
            let l = k.random(&mut rng, 1, 1);
            let m = k.random(&mut rng, 1, 1);
            let ab = r.mul(&a, &b);
            assert_eq!(r.eval(&ab, &l), r.eval(&a, &r.eval(&b, &l)));
            assert_eq!(
                r.eval(&a, &k.add(&l, &m)),
                k.add(&r.eval(&a, &l), &r.eval(&a, &m))
            );
            assert_eq!(
                r.differential(&ab),
                k.mul(&r.differential(&a), &r.differential(&b))
            );
            assert_eq!(
                r.conjugate(&g, s, &ab),
                r.mul(&r.conjugate(&g, s, &a), &r.conjugate(&g, s, &b))
            );
        }
        let mu = r.sub(&r.constant(k.add(&k.x(), &k.one())), &r.tau());
        let want = r.sub(&r.constant(k.sub(&k.one(), &k.x())), &r.tau());
        assert_eq!(r.conjugate(&g, s, &mu), want);
        assert_eq!(r.eval(&r.tau(), &k.x()), k.frobenius(&k.x()));
    }
}
