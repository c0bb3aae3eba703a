//! Dense univariate polynomials over F_q: the ring A = F_q[T].

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqField};
use crate::ring::Ring;

/// Little-endian coefficient vector with no trailing zeros. The zero
/// polynomial is the empty vector and has no degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    c: Vec<Fq>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(a: Fq) -> Self {
        Self::from_coeffs(vec![a])
    }

    pub fn one() -> Self {
        Poly { c: vec![Fq::ONE] }
    }

    /// The variable T.
    pub fn t() -> Self {
        Poly {
            c: vec![Fq::ZERO, Fq::ONE],
        }
    }

    pub fn monomial(a: Fq, k: usize) -> Self {
        let mut c = vec![Fq::ZERO; k + 1];
        c[k] = a;
        Self::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<Fq>) -> Self {
        while c.last() == Some(&Fq::ZERO) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.c.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == Fq::ONE
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg_i(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> Fq {
        self.c.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == Fq::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation_t(&self) -> Option<usize> {
        self.c.iter().position(|&x| x != Fq::ZERO)
    }

    /// a(T^m): spreads the coefficients. For m = q this is the q-th power.
    pub fn spread(&self, m: usize) -> Poly {
        if self.c.is_empty() || m == 1 {
            return self.clone();
        }
        let mut c = vec![Fq::ZERO; (self.c.len() - 1) * m + 1];
        for (i, &x) in self.c.iter().enumerate() {
            c[i * m] = x;
        }
        Poly { c }
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by degree, then by coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

/// The ring A = F_q[T]. Carries the seed used by the randomized
/// equal-degree splitting, so factorizations are reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing {
    fq: FqField,
    seed: u64,
}

impl PolyRing {
    pub fn new(fq: FqField) -> Self {
        PolyRing { fq, seed: 0x5eed }
    }

    pub fn with_seed(fq: FqField, seed: u64) -> Self {
        PolyRing { fq, seed }
    }

    pub fn fq(&self) -> &FqField {
        &self.fq
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn q(&self) -> u64 {
        self.fq.size()
    }

    pub fn from_ints(&self, c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| self.fq.from_int(x)).collect())
    }

    /// T - c for c in F_q.
    pub fn linear(&self, c: Fq) -> Poly {
        Poly::from_coeffs(vec![self.fq.neg_fq(c), Fq::ONE])
    }

    pub fn scale(&self, a: &Poly, s: Fq) -> Poly {
        if s == Fq::ZERO {
            return Poly::zero();
        }
        Poly {
            c: a.c.iter().map(|&x| self.fq.mul_fq(x, s)).collect(),
        }
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        if a.is_zero() || a.is_monic() {
            return a.clone();
        }
        let inv = self.fq.inv_fq(a.lc()).expect("nonzero leading coefficient");
        self.scale(a, inv)
    }

    pub fn shift(&self, a: &Poly, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Fq::ZERO; k];
        c.extend_from_slice(&a.c);
        Poly { c }
    }

    pub fn divmod(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if a.c.len() < b.c.len() {
            return Ok((Poly::zero(), a.clone()));
        }
        let f = &self.fq;
        let db = b.c.len() - 1;
        let inv_lc = f.inv_fq(b.lc())?;
        let mut r = a.c.clone();
        let mut quot = vec![Fq::ZERO; a.c.len() - db];
        for k in (0..quot.len()).rev() {
            let top = r[k + db];
            if top == Fq::ZERO {
                continue;
            }
            let qk = f.mul_fq(top, inv_lc);
            quot[k] = qk;
            let nq = f.neg_fq(qk);
            for (j, &bj) in b.c.iter().enumerate() {
                if bj != Fq::ZERO {
                    r[k + j] = f.add_fq(r[k + j], f.mul_fq(nq, bj));
                }
            }
        }
        r.truncate(db);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(a, b)?.1)
    }

    /// Exact division; errors if b does not divide a.
    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        let (qt, r) = self.divmod(a, b)?;
        if !r.is_zero() {
            return Err(Error::DivisionInexact);
        }
        Ok(qt)
    }

    pub fn divides(&self, b: &Poly, a: &Poly) -> bool {
        if b.is_zero() {
            return a.is_zero();
        }
        self.rem(a, b).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Returns (g, s, t) with s*a + t*b = g monic.
    pub fn xgcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (qt, r) = self.divmod(&r0, &r1).expect("nonzero divisor");
            let s = self.sub(&s0, &self.mul(&qt, &s1));
            let t = self.sub(&t0, &self.mul(&qt, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = self.fq.inv_fq(r0.lc()).expect("nonzero");
        (
            self.scale(&r0, inv),
            self.scale(&s0, inv),
            self.scale(&t0, inv),
        )
    }

    pub fn lcm(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(a, b);
        self.monic(&self.mul(&self.div_exact(a, &g).expect("gcd divides"), b))
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        let f = &self.fq;
        Poly::from_coeffs(
            a.c.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &x)| f.mul_fq(x, f.from_int((i as u64 % f.characteristic()) as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, a: &Poly, x: Fq) -> Fq {
        a.c.iter().rev().fold(Fq::ZERO, |acc, &c| {
            self.fq.add_fq(self.fq.mul_fq(acc, x), c)
        })
    }

    pub fn mulmod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul(a, b), m).expect("nonzero modulus")
    }

    /// The monic r with r^k = a for monic a, when k is prime to the characteristic.
    pub fn monic_root(&self, a: &Poly, k: u64) -> Option<Poly> {
        let n = a.degree()?;
        if !a.is_monic() || n as u64 % k != 0 || k % self.fq.characteristic() == 0 {
            return None;
        }
        let d = (n as u64 / k) as usize;
        let kinv = self
            .fq
            .inv_fq(self.fq.from_int((k % self.fq.characteristic()) as i64))
            .ok()?;
        let mut r = vec![Fq::ZERO; d + 1];
        r[d] = Fq::ONE;
        for i in 1..=d {
            let cur = self.pow(&Poly::from_coeffs(r.clone()), k);
            let diff = self.fq.sub_fq(a.coeff(n - i), cur.coeff(n - i));
            r[d - i] = self.fq.mul_fq(diff, kinv);
        }
        let r = Poly::from_coeffs(r);
        (self.pow(&r, k) == *a).then_some(r)
    }

    pub fn powmod(&self, a: &Poly, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(a, m).expect("nonzero modulus");
        let mut acc = self.rem(&Poly::one(), m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mulmod(&base, &base, m);
            }
        }
        acc
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R, max_deg: usize) -> Poly {
        Poly::from_coeffs(self.fq.random_elems(rng, max_deg + 1))
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R, max_deg: usize) -> Poly {
        loop {
            let a = self.random(rng, max_deg);
            if !a.is_zero() {
                return a;
            }
        }
    }

    pub fn random_monic<R: rand::Rng + ?Sized>(&self, rng: &mut R, deg: usize) -> Poly {
        let mut c = self.fq.random_elems(rng, deg);
        c.push(Fq::ONE);
        Poly::from_coeffs(c)
    }

    /// Random polynomial with degree drawn uniformly from 0..=max_deg.
    pub fn random_varying<R: rand::Rng + ?Sized>(&self, rng: &mut R, max_deg: usize) -> Poly {
        let d = rng.gen_range(0..=max_deg);
        self.random(rng, d)
    }

    /// Every monic polynomial of exactly the given degree.
    pub fn monics_of_degree(&self, deg: usize) -> Vec<Poly> {
        let q = self.q() as usize;
        let count = q.pow(deg as u32);
        (0..count)
            .map(|mut idx| {
                let mut c = Vec::with_capacity(deg + 1);
                for _ in 0..deg {
                    c.push(Fq((idx % q) as u32));
                    idx /= q;
                }
                c.push(Fq::ONE);
                Poly::from_coeffs(c)
            })
            .collect()
    }

    pub fn fmt_poly(&self, a: &Poly) -> String {
        fmt_poly_in(&self.fq, a, "T")
    }
}

/// `c0 + c1*T + c2*T^2`, omitting zero terms and unit coefficients.
pub fn fmt_poly_in(fq: &FqField, a: &Poly, var: &str) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (i, &c) in a.c.iter().enumerate() {
        if c == Fq::ZERO {
            continue;
        }
        let cs = fq.fmt_elem(c);
        let term = match (i, c == Fq::ONE) {
            (0, _) => cs,
            (1, true) => var.to_string(),
            (1, false) => format!("{cs}*{var}"),
            (_, true) => format!("{var}^{i}"),
            (_, false) => format!("{cs}*{var}^{i}"),
        };
        terms.push(term);
    }
    terms.join(" + ")
}

impl Ring for PolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly::one()
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let (long, short) = if a.c.len() >= b.c.len() {
            (a, b)
        } else {
            (b, a)
        };
        let mut c = long.c.clone();
        for (i, &x) in short.c.iter().enumerate() {
            c[i] = self.fq.add_fq(c[i], x);
        }
        Poly::from_coeffs(c)
    }

    fn neg(&self, a: &Poly) -> Poly {
        Poly {
            c: a.c.iter().map(|&x| self.fq.neg_fq(x)).collect(),
        }
    }

    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.c.len().max(b.c.len());
        let c = (0..n)
            .map(|i| self.fq.sub_fq(a.coeff(i), b.coeff(i)))
            .collect();
        Poly::from_coeffs(c)
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let f = &self.fq;
        if a.c.len() == 1 {
            return self.scale(b, a.c[0]);
        }
        if b.c.len() == 1 {
            return self.scale(a, b.c[0]);
        }
        let mut c = vec![Fq::ZERO; a.c.len() + b.c.len() - 1];
        for (i, &x) in a.c.iter().enumerate() {
            if x == Fq::ZERO {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                if y != Fq::ZERO {
                    c[i + j] = f.add_fq(c[i + j], f.mul_fq(x, y));
                }
            }
        }
        Poly::from_coeffs(c)
    }

    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f3() -> PolyRing {
        PolyRing::new(FqField::prime(3).unwrap())
    }

    #[test]
    fn monic_root_inverts_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for q in [3u64, 5, 7] {
            let a = PolyRing::new(FqField::prime(q).unwrap());
            for _ in 0..20 {
                let r = a.monic(&a.random(&mut rng, 6));
                if r.is_zero() {
                    continue;
                }
                let p = a.pow(&r, q - 1);
                assert_eq!(a.monic_root(&p, q - 1), Some(r.clone()));
                let off = a.add(&p, &Poly::one());
                if r.degree() > Some(0) {
                    assert_eq!(a.monic_root(&off, q - 1), None);
                }
            }
        }
    }

    #[test]
    fn divmod_examples() {
        let a = f3();
        let (qt, r) = a.divmod(&a.from_ints(&[1, 0, 1]), &Poly::t()).unwrap();
        assert_eq!(qt, Poly::t());
        assert_eq!(r, Poly::one());
        let (qt, r) = a.divmod(&Poly::t(), &a.from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(qt, Poly::zero());
        assert_eq!(r, Poly::t());
        assert_eq!(
            a.divmod(&Poly::t(), &Poly::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn divmod_reconstructs_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ring = PolyRing::new(FqField::new(3, &[1, 0, 1]).unwrap());
        for _ in 0..500 {
            let a = ring.random_varying(&mut rng, 12);
            let b = ring.random_nonzero(&mut rng, 6);
            let (qt, r) = ring.divmod(&a, &b).unwrap();
            assert_eq!(ring.add(&ring.mul(&qt, &b), &r), a);
            assert!(r.deg_i() < b.deg_i());
        }
    }

    #[test]
    fn xgcd_bezout() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ring = f3();
        for _ in 0..200 {
            let a = ring.random_nonzero(&mut rng, 8);
            let b = ring.random_nonzero(&mut rng, 8);
            let (g, s, t) = ring.xgcd(&a, &b);
            assert_eq!(ring.add(&ring.mul(&s, &a), &ring.mul(&t, &b)), g);
            assert_eq!(g, ring.gcd(&a, &b));
            assert!(ring.divides(&g, &a) && ring.divides(&g, &b));
        }
    }

    #[test]
    fn spread_is_qth_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ring = PolyRing::new(FqField::new(3, &[1, 0, 1]).unwrap());
        for _ in 0..50 {
            let a = ring.random(&mut rng, 5);
            assert_eq!(a.spread(9), ring.pow(&a, 9));
        }
    }

    #[test]
    fn formatting() {
        let a = f3();
        assert_eq!(a.fmt_poly(&a.from_ints(&[1, 2, 0, 1])), "1 + 2*T + T^3");
        assert_eq!(a.fmt_poly(&Poly::zero()), "0");
    }
}
