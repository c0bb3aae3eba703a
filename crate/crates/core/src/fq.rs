//! The finite field F_q, q = p^d, given by a monic irreducible modulus over F_p.
//!
//! Elements are indices `sum c_i p^i` of their coordinate vectors; addition
//! uses a precomputed table and multiplication goes through discrete logs.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{Field, Ring};

/// Largest supported field size; the addition table is q^2 entries.
pub const MAX_Q: u64 = 1024;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn index(self) -> u32 {
        self.0
    }
}

struct FqInner {
    p: u64,
    d: usize,
    q: u64,
    modulus: Vec<u64>,
    add: Vec<u32>,
    neg: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone)]
pub struct FqField {
    inner: Arc<FqInner>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}(modulus {:?})", self.inner.q, self.inner.modulus)
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

impl FqField {
    /// Prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, &[0, 1])
    }

    /// F_{p^d} with `modulus` given little-endian over F_p, monic of degree d.
    pub fn new(p: u64, modulus: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        let d = modulus.len().saturating_sub(1);
        if d == 0 || modulus[d] != 1 {
            return Err(Error::InvalidField(
                "modulus must be monic of degree >= 1".into(),
            ));
        }
        let q = p
            .checked_pow(d as u32)
            .filter(|q| *q <= MAX_Q)
            .ok_or_else(|| Error::InvalidField(format!("q = {p}^{d} exceeds {MAX_Q}")))?;
        let qs = q as usize;

        let to_coords = |mut x: u64| -> Vec<u64> {
            let mut c = vec![0; d];
            for ci in c.iter_mut() {
                *ci = x % p;
                x /= p;
            }
            c
        };
        let from_coords =
            |c: &[u64]| -> u32 { c.iter().rev().fold(0u64, |acc, &ci| acc * p + ci) as u32 };

        let mut add = vec![0u32; qs * qs];
        let mut neg = vec![0u32; qs];
        for a in 0..q {
            let ca = to_coords(a);
            neg[a as usize] = from_coords(&ca.iter().map(|&x| (p - x) % p).collect::<Vec<_>>());
            for b in 0..q {
                let cb = to_coords(b);
                let s: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[(a as usize) * qs + b as usize] = from_coords(&s);
            }
        }

        // schoolbook product modulo the modulus, used only to find a generator
        let slow_mul = |a: u32, b: u32| -> u32 {
            let ca = to_coords(a as u64);
            let cb = to_coords(b as u64);
            let mut prod = vec![0u64; 2 * d];
            for i in 0..d {
                for j in 0..d {
                    prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
                }
            }
            for k in (d..2 * d).rev() {
                let c = prod[k];
                if c != 0 {
                    prod[k] = 0;
                    for i in 0..d {
                        prod[k - d + i] = (prod[k - d + i] + (p - c) * modulus[i]) % p;
                    }
                }
            }
            from_coords(&prod[..d])
        };

        let order = (q - 1) as usize;
        let mut exp = Vec::new();
        let mut found = false;
        for g in 1..q as u32 {
            let mut powers = Vec::with_capacity(order);
            let mut x = 1u32;
            for _ in 0..order {
                powers.push(x);
                x = slow_mul(x, g);
                if x == 1 {
                    break;
                }
            }
            if powers.len() == order && x == 1 {
                exp = powers;
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::InvalidField(
                "modulus is not irreducible over F_p".into(),
            ));
        }
        let mut log = vec![0u32; qs];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let mut exp2 = exp.clone();
        exp2.extend_from_slice(&exp);

        Ok(FqField {
            inner: Arc::new(FqInner {
                p,
                d,
                q,
                modulus,
                add,
                neg,
                exp: exp2,
                log,
            }),
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.p
    }

    pub fn degree(&self) -> usize {
        self.inner.d
    }

    pub fn size(&self) -> u64 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.inner.p as i64) as u32)
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<Fq> {
        if coords.len() > self.inner.d {
            return Err(Error::InvalidField(format!(
                "F_q literal has {} coordinates, field degree is {}",
                coords.len(),
                self.inner.d
            )));
        }
        let p = self.inner.p;
        let idx = coords.iter().rev().fold(0u64, |acc, &c| acc * p + c % p);
        Ok(Fq(idx as u32))
    }

    pub fn coords(&self, a: Fq) -> Vec<u64> {
        let mut x = a.0 as u64;
        (0..self.inner.d)
            .map(|_| {
                let c = x % self.inner.p;
                x /= self.inner.p;
                c
            })
            .collect()
    }

    /// All field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.inner.q as u32).map(Fq)
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        Fq(rng.gen_range(0..self.inner.q as u32))
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        Fq(rng.gen_range(1..self.inner.q as u32))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fq) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.inner.q - 1;
        let l = self.inner.log[a.0 as usize] as u64;
        Ok(n / gcd_u64(n, l))
    }

    /// The unique p-th root (Frobenius is bijective on F_q).
    pub fn pth_root(&self, a: Fq) -> Fq {
        self.pow(&a, self.inner.q / self.inner.p)
    }

    #[inline]
    pub fn add_fq(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.inner.add[a.0 as usize * self.inner.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg_fq(&self, a: Fq) -> Fq {
        Fq(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub_fq(&self, a: Fq, b: Fq) -> Fq {
        self.add_fq(a, self.neg_fq(b))
    }

    #[inline]
    pub fn mul_fq(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq(0);
        }
        let i = &self.inner;
        Fq(i.exp[(i.log[a.0 as usize] + i.log[b.0 as usize]) as usize])
    }

    #[inline]
    pub fn inv_fq(&self, a: Fq) -> Result<Fq> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let i = &self.inner;
        let l = i.log[a.0 as usize] as u64;
        Ok(Fq(i.exp[((i.q - 1 - l) % (i.q - 1)) as usize]))
    }

    pub fn fmt_elem(&self, a: Fq) -> String {
        if self.inner.d == 1 {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coords(a).iter().map(|x| x.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }

    pub fn random_elems<R: rand::Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<Fq> {
        (0..n)
            .map(|_| Fq(rng.gen_range(0..self.inner.q as u32)))
            .collect()
    }
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ring for FqField {
    type Elem = Fq;

    fn zero(&self) -> Fq {
        Fq(0)
    }
    fn one(&self) -> Fq {
        Fq(1)
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        self.add_fq(*a, *b)
    }
    fn neg(&self, a: &Fq) -> Fq {
        self.neg_fq(*a)
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        self.mul_fq(*a, *b)
    }
    fn is_zero(&self, a: &Fq) -> bool {
        a.0 == 0
    }
    fn pow(&self, a: &Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq(1);
        }
        if a.0 == 0 {
            return Fq(0);
        }
        let i = &self.inner;
        let l = (i.log[a.0 as usize] as u64 * (e % (i.q - 1))) % (i.q - 1);
        Fq(i.exp[l as usize])
    }
}

impl Field for FqField {
    fn inv(&self, a: &Fq) -> Result<Fq> {
        self.inv_fq(*a)
    }
}
