//! Roots in Q = F_q(T) of polynomials with coefficients in Q.

use crate::error::{Error, Result};
use crate::ideal::{monic_divisors, units, IdealA};
use crate::poly::{Poly, PolyRing};
use crate::ratfunc::{RatField, RatFunc};
use crate::ring::Ring;

/// Clear denominators: returns A-coefficients with trivial content.
pub fn primitive_part(qf: &RatField, coeffs: &[RatFunc]) -> Vec<Poly> {
    let a = qf.poly_ring();
    let mut den = Poly::one();
    for c in coeffs {
        den = a.lcm(&den, c.den());
    }
    let h: Vec<Poly> = coeffs
        .iter()
        .map(|c| a.mul(c.num(), &a.div_exact(&den, c.den()).expect("lcm")))
        .collect();
    let g = h.iter().fold(Poly::zero(), |g, c| a.gcd(&g, c));
    if g.is_zero() || g.is_one() {
        return h;
    }
    h.iter()
        .map(|c| a.div_exact(c, &g).expect("content"))
        .collect()
}

/// All distinct roots in Q of sum_i coeffs[i] z^i, by the rational root
/// theorem over the PID A: a root n/d in lowest terms has n | h_0 and d | h_top.
pub fn rational_roots(qf: &RatField, coeffs: &[RatFunc]) -> Result<Vec<RatFunc>> {
    let a = qf.poly_ring();
    let mut h = primitive_part(qf, coeffs);
    while h.last().is_some_and(Poly::is_zero) {
        h.pop();
    }
    if h.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    let low = h.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(qf.zero());
        h.drain(..low);
    }
    if h.len() < 2 {
        return Ok(roots);
    }
    let n0 = IdealA::new(a, &h[0])?;
    let nt = IdealA::new(a, h.last().unwrap())?;
    let nums = monic_divisors(a, &n0);
    let dens = monic_divisors(a, &nt);
    let us = units(a);
    for d in &dens {
        for n in &nums {
            if !a.gcd(n, d).is_one() {
                continue;
            }
            for &u in &us {
                let nu = a.scale(n, u);
                if eval_homogeneous(a, &h, &nu, d).is_zero() {
                    roots.push(qf.frac(&nu, d)?);
                }
            }
        }
    }
    roots.sort_by(|x, y| (x.den(), x.num()).cmp(&(y.den(), y.num())));
    Ok(roots)
}

/// sum_i h_i n^i d^(k-i), which vanishes iff n/d is a root.
fn eval_homogeneous(a: &PolyRing, h: &[Poly], n: &Poly, d: &Poly) -> Poly {
    let k = h.len() - 1;
    let mut dpows = vec![Poly::one(); k + 1];
    for i in 1..=k {
        dpows[i] = a.mul(&dpows[i - 1], d);
    }
    let mut total = Poly::zero();
    let mut npow = Poly::one();
    for (i, c) in h.iter().enumerate() {
        if !c.is_zero() {
            total = a.add(&total, &a.mul(&a.mul(c, &npow), &dpows[k - i]));
        }
        npow = a.mul(&npow, n);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qf(q: u64) -> RatField {
        RatField::new(PolyRing::new(FqField::prime(q).unwrap()))
    }

    fn lift(a: &[Poly]) -> Vec<RatFunc> {
        a.iter().map(|c| RatFunc::from_poly(c.clone())).collect()
    }

    #[test]
    fn spec_examples() {
        let k = qf(3);
        let a = k.poly_ring();
        let g = lift(&[a.from_ints(&[0, 0, -1]), Poly::zero(), Poly::one()]);
        let r = rational_roots(&k, &g).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&k.t()) && r.contains(&k.neg(&k.t())));
        let g = lift(&[a.from_ints(&[0, -1]), Poly::zero(), Poly::one()]);
        assert!(rational_roots(&k, &g).unwrap().is_empty());
        assert_eq!(
            rational_roots(&k, &lift(&[Poly::zero()])),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn planted_roots_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let k = qf(3);
        let a = k.poly_ring().clone();
        for _ in 0..40 {
            let r1 = k.random(&mut rng, 2, 1);
            let r2 = k.random(&mut rng, 2, 1);
            // (z - r1)(z - r2)(z^2 - T), the last factor has no root in Q
            let lin = |r: &RatFunc| vec![k.neg(r), k.one()];
            let irr = vec![k.neg(&k.t()), k.zero(), k.one()];
            let prod = polymul(&k, &polymul(&k, &lin(&r1), &lin(&r2)), &irr);
            let mut got = rational_roots(&k, &prod).unwrap();
            let mut want = vec![r1.clone(), r2.clone()];
            want.dedup();
            got.sort_by_key(|x| k.fmt_elem(x));
            want.sort_by_key(|x| k.fmt_elem(x));
            want.dedup();
            assert_eq!(got, want, "{}", a.fmt_poly(r1.num()));
        }
    }

    fn polymul(k: &RatField, x: &[RatFunc], y: &[RatFunc]) -> Vec<RatFunc> {
        let mut out = vec![k.zero(); x.len() + y.len() - 1];
        for (i, u) in x.iter().enumerate() {
            for (j, v) in y.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(u, v));
            }
        }
        out
    }
}
