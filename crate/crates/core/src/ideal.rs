//! Ideals of A = F_q[T] by monic generator, and their factorization
//! (square-free decomposition, distinct-degree, equal-degree splitting).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::poly::{Poly, PolyRing};
use crate::ring::Ring;

/// A nonzero ideal of A, stored by its monic generator. The factorization
/// is computed on first request and cached.
#[derive(Clone)]
pub struct IdealA {
    gen: Poly,
    factors: OnceLock<Vec<(IdealA, u32)>>,
}

impl IdealA {
    pub fn new(ring: &PolyRing, a: &Poly) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        Ok(IdealA {
            gen: ring.monic(a),
            factors: OnceLock::new(),
        })
    }

    /// The unit ideal A = (1).
    pub fn unit() -> Self {
        IdealA {
            gen: Poly::one(),
            factors: OnceLock::new(),
        }
    }

    pub fn gen(&self) -> &Poly {
        &self.gen
    }

    pub fn is_unit(&self) -> bool {
        self.gen.is_one()
    }

    /// deg of the generator, i.e. log_q #(A / self).
    pub fn degree(&self) -> usize {
        self.gen.degree().unwrap_or(0)
    }

    pub fn mul(&self, ring: &PolyRing, other: &IdealA) -> IdealA {
        IdealA {
            gen: ring.mul(&self.gen, &other.gen),
            factors: OnceLock::new(),
        }
    }

    pub fn gcd(&self, ring: &PolyRing, other: &IdealA) -> IdealA {
        IdealA {
            gen: ring.gcd(&self.gen, &other.gen),
            factors: OnceLock::new(),
        }
    }

    /// Quotient self / other; errors unless other | self.
    pub fn div(&self, ring: &PolyRing, other: &IdealA) -> Result<IdealA> {
        Ok(IdealA {
            gen: ring.div_exact(&self.gen, &other.gen)?,
            factors: OnceLock::new(),
        })
    }

    /// True when self divides other (as ideals: other ⊂ self).
    pub fn divides(&self, ring: &PolyRing, other: &IdealA) -> bool {
        ring.divides(&self.gen, &other.gen)
    }

    pub fn factors(&self, ring: &PolyRing) -> &[(IdealA, u32)] {
        self.factors.get_or_init(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(ring.seed() ^ poly_hash(&self.gen));
            factor_poly(ring, &self.gen, &mut rng)
                .into_iter()
                .map(|(p, m)| {
                    (
                        IdealA {
                            gen: p,
                            factors: OnceLock::new(),
                        },
                        m,
                    )
                })
                .collect()
        })
    }

    pub fn primes(&self, ring: &PolyRing) -> Vec<IdealA> {
        self.factors(ring).iter().map(|(p, _)| p.clone()).collect()
    }

    /// Exponent of the prime `p` in self.
    pub fn valuation(&self, ring: &PolyRing, p: &IdealA) -> u32 {
        let mut v = 0;
        let mut a = self.gen.clone();
        while let Ok(qt) = ring.div_exact(&a, &p.gen) {
            if p.is_unit() {
                break;
            }
            a = qt;
            v += 1;
        }
        v
    }

    pub fn is_squarefree(&self, ring: &PolyRing) -> bool {
        self.factors(ring).iter().all(|(_, m)| *m == 1)
    }

    pub fn to_text(&self, ring: &PolyRing) -> String {
        format!("({})", ring.fmt_poly(&self.gen))
    }
}

fn poly_hash(a: &Poly) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    a.hash(&mut h);
    h.finish()
}

impl PartialEq for IdealA {
    fn eq(&self, other: &Self) -> bool {
        self.gen == other.gen
    }
}
impl Eq for IdealA {}

impl Hash for IdealA {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.gen.hash(state)
    }
}

impl PartialOrd for IdealA {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for IdealA {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gen.cmp(&other.gen)
    }
}

impl fmt::Debug for IdealA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "IdealA({:?})",
            self.gen
                .coeffs()
                .iter()
                .map(|c| c.index())
                .collect::<Vec<_>>()
        )
    }
}

/// Factor an ideal into monic irreducible generators with multiplicities,
/// sorted by generator. Randomness is only used for equal-degree splitting.
pub fn factor_ideal<R: Rng + ?Sized>(
    ring: &PolyRing,
    n: &Poly,
    rng: &mut R,
) -> Result<Vec<(IdealA, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    Ok(factor_poly(ring, &ring.monic(n), rng)
        .into_iter()
        .map(|(p, m)| {
            (
                IdealA {
                    gen: p,
                    factors: OnceLock::new(),
                },
                m,
            )
        })
        .collect())
}

fn factor_poly<R: Rng + ?Sized>(ring: &PolyRing, f: &Poly, rng: &mut R) -> Vec<(Poly, u32)> {
    let f = ring.monic(f);
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (part, mult) in squarefree(ring, &f) {
        for (g, d) in distinct_degree(ring, &part) {
            for p in equal_degree(ring, &g, d, rng) {
                out.push((p, mult));
            }
        }
    }
    out.sort();
    // merge duplicates (square-free parts are coprime, so this is a no-op in theory)
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (p, m) in out {
        match merged.last_mut() {
            Some((lp, lm)) if *lp == p => *lm += m,
            _ => merged.push((p, m)),
        }
    }
    merged
}

/// Square-free decomposition of a monic polynomial: pairs (s_i, i) with
/// f = prod s_i^i and each s_i square-free.
pub fn squarefree(ring: &PolyRing, f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let fq = ring.fq();
    let p = fq.characteristic() as usize;
    let mut c = ring.gcd(f, &ring.derivative(f));
    let mut w = ring.div_exact(f, &c).expect("gcd divides");
    let mut i = 1u32;
    while !w.is_one() {
        let y = ring.gcd(&w, &c);
        let z = ring.div_exact(&w, &y).expect("gcd divides");
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y.clone();
        c = ring.div_exact(&c, &y).expect("gcd divides");
    }
    if !c.is_one() {
        // c is a p-th power: take the root coefficientwise
        let root = Poly::from_coeffs(
            c.coeffs()
                .iter()
                .step_by(p)
                .map(|&x| fq.pth_root(x))
                .collect(),
        );
        for (s, m) in squarefree(ring, &root) {
            out.push((s, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a square-free monic polynomial.
pub fn distinct_degree(ring: &PolyRing, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let q = ring.q() as u128;
    let t = Poly::t();
    let mut h = ring.rem(&t, &f).expect("nonzero");
    let mut i = 1;
    while f.deg_i() >= 2 * i as i64 {
        h = ring.powmod(&h, q, &f);
        let g = ring.gcd(&f, &ring.sub(&h, &t));
        if !g.is_one() {
            f = ring.div_exact(&f, &g).expect("gcd divides");
            h = ring.rem(&h, &f).expect("nonzero");
            out.push((g, i));
        }
        i += 1;
    }
    if f.deg_i() > 0 {
        let d = f.degree().unwrap();
        out.push((f, d));
    }
    out
}

/// Split a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree<R: Rng + ?Sized>(
    ring: &PolyRing,
    f: &Poly,
    d: usize,
    rng: &mut R,
) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return vec![];
    }
    if n == d {
        return vec![ring.monic(f)];
    }
    loop {
        let a = ring.random(rng, n - 1);
        if a.is_constant() {
            continue;
        }
        let b = splitting_element(ring, &a, d, f);
        let g = ring.gcd(f, &b);
        if !g.is_one() && g.degree() != f.degree() {
            let other = ring.div_exact(f, &g).expect("gcd divides");
            let mut out = equal_degree(ring, &g, d, rng);
            out.extend(equal_degree(ring, &other, d, rng));
            return out;
        }
    }
}

// q odd: a^((q^d-1)/2) - 1. q even: the absolute trace sum a^(2^i), i < d*log2(q).
fn splitting_element(ring: &PolyRing, a: &Poly, d: usize, f: &Poly) -> Poly {
    let fq = ring.fq();
    let q = ring.q() as u128;
    if fq.characteristic() == 2 {
        let steps = d * fq.degree();
        let mut acc = Poly::zero();
        let mut cur = ring.rem(a, f).expect("nonzero");
        for _ in 0..steps {
            acc = ring.add(&acc, &cur);
            cur = ring.mulmod(&cur, &cur, f);
        }
        acc
    } else {
        // a^((q^d-1)/2) = (a * a^q * ... * a^(q^(d-1)))^((q-1)/2)
        let mut norm = ring.rem(&Poly::one(), f).expect("nonzero");
        let mut cur = ring.rem(a, f).expect("nonzero");
        for i in 0..d {
            norm = ring.mulmod(&norm, &cur, f);
            if i + 1 < d {
                cur = ring.powmod(&cur, q, f);
            }
        }
        let e = ring.powmod(&norm, (q - 1) / 2, f);
        ring.sub(&e, &Poly::one())
    }
}

/// Irreducibility test: no factor of degree i <= deg/2, detected by
/// gcd(f, T^(q^i) - T).
pub fn is_irreducible(ring: &PolyRing, f: &Poly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let t = Poly::t();
    let mut h = ring.rem(&t, f).expect("nonzero");
    for _ in 1..=n / 2 {
        h = ring.powmod(&h, ring.q() as u128, f);
        if !ring.gcd(f, &ring.sub(&h, &t)).is_one() {
            return false;
        }
    }
    true
}

/// All monic divisors of a monic polynomial, from its factorization.
pub fn monic_divisors(ring: &PolyRing, n: &IdealA) -> Vec<Poly> {
    let mut divs = vec![Poly::one()];
    for (p, m) in n.factors(ring) {
        let mut next = Vec::with_capacity(divs.len() * (*m as usize + 1));
        for d in &divs {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*m {
                cur = ring.mul(&cur, p.gen());
                next.push(cur.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// F_q^x as a list (used for unit ambiguities in root enumeration).
pub fn units(ring: &PolyRing) -> Vec<Fq> {
    ring.fq().elements().skip(1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqField;

    fn f3() -> PolyRing {
        PolyRing::new(FqField::prime(3).unwrap())
    }

    fn gens(v: &[(IdealA, u32)]) -> Vec<(Poly, u32)> {
        v.iter().map(|(p, m)| (p.gen().clone(), *m)).collect()
    }

    #[test]
    fn small_examples() {
        let a = f3();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = factor_ideal(&a, &a.from_ints(&[0, 2, 1]), &mut rng).unwrap();
        assert_eq!(
            gens(&f),
            vec![(a.from_ints(&[0, 1]), 1), (a.from_ints(&[2, 1]), 1)]
        );
        let f = factor_ideal(&a, &a.from_ints(&[0, 0, 1]), &mut rng).unwrap();
        assert_eq!(gens(&f), vec![(Poly::t(), 2)]);
        let f = factor_ideal(&a, &a.from_ints(&[1, 0, 1]), &mut rng).unwrap();
        assert_eq!(gens(&f), vec![(a.from_ints(&[1, 0, 1]), 1)]);
        assert_eq!(
            factor_ideal(&a, &Poly::zero(), &mut rng).err(),
            Some(Error::ZeroIdeal)
        );
    }

    #[test]
    fn t2_plus_1_has_no_linear_factor_by_trial_division() {
        let a = f3();
        let f = a.from_ints(&[1, 0, 1]);
        for c in 0..3 {
            assert!(!a.divides(&a.from_ints(&[c, 1]), &f));
        }
        assert!(is_irreducible(&a, &f));
    }

    fn check_factorization(ring: &PolyRing, n: &Poly, rng: &mut ChaCha8Rng) {
        let fs = factor_ideal(ring, n, rng).unwrap();
        let mut prod = Poly::one();
        for (p, m) in &fs {
            assert!(is_irreducible(ring, p.gen()), "{:?}", p);
            assert!(p.gen().is_monic());
            prod = ring.mul(&prod, &ring.pow(p.gen(), *m as u64));
        }
        assert_eq!(prod, ring.monic(n));
    }

    #[test]
    fn random_factorizations_remultiply() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, m) in [
            (3u64, vec![0u64, 1]),
            (3, vec![1, 0, 1]),
            (2, vec![0, 1]),
            (2, vec![1, 1, 1]),
            (5, vec![0, 1]),
        ] {
            let ring = PolyRing::new(FqField::new(p, &m).unwrap());
            for _ in 0..60 {
                let mut n = ring.random_nonzero(&mut rng, 10);
                // plant repeated and p-th power factors
                let r = ring.random_nonzero(&mut rng, 2);
                n = ring.mul(&n, &ring.pow(&r, p));
                check_factorization(&ring, &n, &mut rng);
            }
        }
    }

    #[test]
    fn reproducible_with_seed() {
        let ring = f3();
        let n = ring.from_ints(&[2, 0, 1, 1, 0, 2, 1, 1]);
        let a = factor_ideal(&ring, &n, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = factor_ideal(&ring, &n, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(gens(&a), gens(&b));
    }

    #[test]
    fn divisors_and_valuation() {
        let ring = f3();
        let n = IdealA::new(&ring, &ring.from_ints(&[0, 0, 2, 2])).unwrap(); // 2 T^2 (T+1)
        assert_eq!(monic_divisors(&ring, &n).len(), 6);
        let t = IdealA::new(&ring, &Poly::t()).unwrap();
        assert_eq!(n.valuation(&ring, &t), 2);
        assert!(!n.is_squarefree(&ring));
        assert_eq!(n.to_text(&ring), "(T^2 + T^3)");
    }
}
