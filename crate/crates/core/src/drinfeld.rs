//! Drinfeld F_q[T]-modules given by the image of T in K{tau}.

use rand::Rng;

use crate::error::{Error, Result};
use crate::ext::{ExtElem, ExtField};
use crate::galois::GaloisDatum;
use crate::poly::Poly;
use crate::ring::{Field, Ring};
use crate::skew::{SkewPoly, SkewRing};

#[derive(Clone, Debug, PartialEq)]
pub struct DrinfeldModule {
    ring: SkewRing,
    phi_t: SkewPoly,
}

impl DrinfeldModule {
    /// Validate phi_T: constant term T and positive tau-degree.
    pub fn new(ring: &SkewRing, phi_t: SkewPoly) -> Result<Self> {
        let k = ring.field();
        if ring.differential(&phi_t) != k.t() {
            return Err(Error::BadConstantTerm);
        }
        if phi_t.degree().unwrap_or(0) == 0 {
            return Err(Error::RankZero);
        }
        Ok(DrinfeldModule {
            ring: ring.clone(),
            phi_t,
        })
    }

    /// phi_T = T + g tau + Delta tau^2.
    pub fn rank_two(ring: &SkewRing, g: ExtElem, delta: ExtElem) -> Result<Self> {
        let k = ring.field();
        Self::new(ring, SkewPoly::from_coeffs(vec![k.t(), g, delta]))
    }

    /// The module T + j tau + j^q tau^2 with j-invariant j (j != 0).
    pub fn from_j(ring: &SkewRing, j: &ExtElem) -> Result<Self> {
        let k = ring.field();
        if j.is_zero() {
            return Self::rank_two(ring, k.zero(), k.one());
        }
        Self::rank_two(ring, j.clone(), k.frobenius(j))
    }

    pub fn ring(&self) -> &SkewRing {
        &self.ring
    }

    pub fn field(&self) -> &ExtField {
        self.ring.field()
    }

    pub fn phi_t(&self) -> &SkewPoly {
        &self.phi_t
    }

    pub fn rank(&self) -> usize {
        self.phi_t.degree().expect("validated")
    }

    pub fn g(&self) -> ExtElem {
        self.ring.coeff(&self.phi_t, 1)
    }

    pub fn delta(&self) -> ExtElem {
        self.ring.coeff(&self.phi_t, self.rank())
    }

    pub fn require_rank_two(&self) -> Result<()> {
        match self.rank() {
            2 => Ok(()),
            r => Err(Error::NotRankTwo(r)),
        }
    }

    /// phi_a by Horner's rule in phi_T.
    pub fn phi_a(&self, a: &Poly) -> SkewPoly {
        let r = &self.ring;
        let k = r.field();
        let mut acc = SkewPoly::zero();
        for c in a.coeffs().iter().rev() {
            acc = r.add(&r.mul(&acc, &self.phi_t), &r.constant(k.from_fq(*c)));
        }
        acc
    }

    /// g^(q+1) / Delta.
    pub fn j_invariant(&self) -> Result<ExtElem> {
        self.require_rank_two()?;
        let k = self.field();
        let g = self.g();
        k.div(&k.mul(&k.frobenius(&g), &g), &self.delta())
    }

    pub fn conjugate(&self, gal: &GaloisDatum, s: usize) -> DrinfeldModule {
        DrinfeldModule {
            ring: self.ring.clone(),
            phi_t: self.ring.conjugate(gal, s, &self.phi_t),
        }
    }

    /// The isomorphic module c phi_T c^(-1).
    pub fn twist(&self, c: &ExtElem) -> Result<DrinfeldModule> {
        Ok(DrinfeldModule {
            ring: self.ring.clone(),
            phi_t: self.ring.conjugate_scalar(c, &self.phi_t)?,
        })
    }

    /// All coefficients fixed by the group.
    pub fn is_fixed(&self, gal: &GaloisDatum) -> bool {
        self.ring.is_fixed(gal, &self.phi_t)
    }

    pub fn to_text(&self) -> String {
        self.ring.fmt_skew(&self.phi_t)
    }
}

/// nu_s for every element s of a GaloisDatum, in element order.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentCocycle {
    pub nu: Vec<ExtElem>,
}

impl DescentCocycle {
    /// Extend nu on a generator of a cyclic group by nu_(s t) = s(nu_t) nu_s.
    pub fn from_cyclic_generator(gal: &GaloisDatum, s: usize, nu_s: ExtElem) -> Result<Self> {
        let k = gal.field();
        let n = gal.order();
        if gal.element_order(s) != n {
            return Err(Error::NonCyclicGroup);
        }
        let mut nu = vec![k.zero(); n];
        nu[0] = k.one();
        let mut cur = 0;
        let mut val = k.one();
        for _ in 1..n {
            let next = gal.compose(s, cur);
            val = k.mul(&gal.apply(s, &val), &nu_s);
            nu[next] = val.clone();
            cur = next;
        }
        Ok(DescentCocycle { nu })
    }

    /// The coboundary nu_s = c / s(c), the cocycle of the twist c phi c^(-1) of a module over the fixed field.
    pub fn coboundary(gal: &GaloisDatum, c: &ExtElem) -> Result<Self> {
        let k = gal.field();
        let nu = (0..gal.order())
            .map(|s| k.div(c, &gal.apply(s, c)))
            .collect::<Result<_>>()?;
        Ok(DescentCocycle { nu })
    }

    /// Check the cocycle relation and the isomorphisms nu_s: s(phi) -> phi.
    pub fn validate(&self, gal: &GaloisDatum, phi: &DrinfeldModule) -> Result<()> {
        let k = gal.field();
        let n = gal.order();
        if self.nu.len() != n {
            return Err(Error::CocycleViolation(format!(
                "expected {n} values, got {}",
                self.nu.len()
            )));
        }
        if self.nu.iter().any(ExtElem::is_zero) {
            return Err(Error::CocycleViolation("zero value".into()));
        }
        for s in 0..n {
            for t in 0..n {
                let lhs = k.mul(&gal.apply(s, &self.nu[t]), &self.nu[s]);
                if lhs != self.nu[gal.compose(s, t)] {
                    return Err(Error::CocycleViolation(format!(
                        "relation fails at ({}, {})",
                        gal.element_name(s),
                        gal.element_name(t)
                    )));
                }
            }
            let r = phi.ring();
            let conj = r.conjugate_scalar(&self.nu[s], &r.conjugate(gal, s, phi.phi_t()))?;
            if &conj != phi.phi_t() {
                return Err(Error::CocycleViolation(format!(
                    "nu_{} is not an isomorphism from the conjugate",
                    gal.element_name(s)
                )));
            }
        }
        Ok(())
    }
}

/// Weil descent: find nu with nu_s = nu^(-1) s(nu) and return nu phi nu^(-1),
/// whose coefficients are fixed by the group. Also returns nu.
pub fn descend_k_model<R: Rng + ?Sized>(
    phi: &DrinfeldModule,
    cocycle: &DescentCocycle,
    gal: &GaloisDatum,
    rng: &mut R,
) -> Result<(DrinfeldModule, ExtElem)> {
    cocycle.validate(gal, phi)?;
    let k = gal.field();
    let e = k.degree();
    let mut attempt = 0usize;
    let b = loop {
        let theta = if attempt < e {
            k.pow(&k.x(), attempt as u64)
        } else if attempt < e + 64 {
            k.random(rng, 2, 1)
        } else {
            return Err(Error::InternalInconsistency(
                "Hilbert 90 element not found".into(),
            ));
        };
        attempt += 1;
        let b = (0..gal.order()).fold(k.zero(), |acc, t| {
            k.add(&acc, &k.mul(&cocycle.nu[t], &gal.apply(t, &theta)))
        });
        if !b.is_zero() {
            break b;
        }
    };
    let nu = k.inv(&b)?;
    for s in 0..gal.order() {
        if k.mul(&nu, &cocycle.nu[s]) != gal.apply(s, &nu) {
            return Err(Error::InternalInconsistency(
                "descent element fails its defining relation".into(),
            ));
        }
    }
    let psi = phi.twist(&nu)?;
    if !psi.is_fixed(gal) {
        return Err(Error::CocycleViolation(
            "descended module is not fixed by the group".into(),
        ));
    }
    Ok((psi, nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqField;
    use crate::galois::GaloisGen;
    use crate::poly::PolyRing;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quad(q: u64) -> (SkewRing, GaloisDatum) {
        let a = PolyRing::new(FqField::prime(q).unwrap());
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
    fn construction() {
        let (r, _) = quad(3);
        let k = r.field().clone();
        let tau2 = r.monomial(k.one(), 2);
        let phi = DrinfeldModule::new(&r, r.add(&r.constant(k.t()), &tau2)).unwrap();
        assert_eq!(phi.rank(), 2);
        assert_eq!(phi.j_invariant().unwrap(), k.zero());
        let phi1 = DrinfeldModule::new(&r, r.add(&r.constant(k.t()), &r.tau())).unwrap();
        assert_eq!(phi1.rank(), 1);
        assert_eq!(phi1.j_invariant(), Err(Error::NotRankTwo(1)));
        assert_eq!(
            DrinfeldModule::new(&r, r.add(&r.one(), &r.tau())),
            Err(Error::BadConstantTerm)
        );
        assert_eq!(
            DrinfeldModule::new(&r, r.constant(k.t())),
            Err(Error::RankZero)
        );
    }

    #[test]
    fn phi_a_is_algebra_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let (r, _) = quad(3);
        let k = r.field().clone();
        let a = k.poly_ring().clone();
        let phi = DrinfeldModule::rank_two(
            &r,
            k.random(&mut rng, 1, 0),
            k.random_nonzero(&mut rng, 1, 0),
        )
        .unwrap();
        assert_eq!(&phi.phi_a(&Poly::t()), phi.phi_t());
        assert_eq!(phi.phi_a(&a.from_ints(&[2])), r.constant(k.from_int(2)));
        for _ in 0..30 {
            let x = a.random_varying(&mut rng, 2);
            let y = a.random_varying(&mut rng, 1);
            assert_eq!(
                phi.phi_a(&a.add(&x, &y)),
                r.add(&phi.phi_a(&x), &phi.phi_a(&y))
            );
            let xy = phi.phi_a(&a.mul(&x, &y));
            assert_eq!(xy, r.mul(&phi.phi_a(&x), &phi.phi_a(&y)));
            if !x.is_zero() {
                assert_eq!(phi.phi_a(&x).degree(), Some(2 * x.degree().unwrap()));
                assert_eq!(r.differential(&phi.phi_a(&x)), k.from_poly(&x));
            }
        }
    }

    #[test]
    fn j_invariant_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let (r, gal) = quad(3);
        let k = r.field().clone();
        let s = gal.gen_index(0);
        for _ in 0..20 {
            let j = k.random_nonzero(&mut rng, 1, 1);
            let phi = DrinfeldModule::from_j(&r, &j).unwrap();
            assert_eq!(phi.j_invariant().unwrap(), j);
            let c = k.random_nonzero(&mut rng, 1, 0);
            assert_eq!(phi.twist(&c).unwrap().j_invariant().unwrap(), j);
            let conj = phi.conjugate(&gal, s);
            assert_eq!(conj.j_invariant().unwrap(), gal.apply(s, &j));
            assert_eq!(conj.conjugate(&gal, s), phi);
        }
    }

    #[test]
    fn descent_of_twists() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let (r, gal) = quad(5);
        let k = r.field().clone();
        let a = k.poly_ring().clone();
        for _ in 0..10 {
            let g = k.from_poly(&a.random(&mut rng, 1));
            let d = k.from_poly(&a.random_nonzero(&mut rng, 1));
            let base = DrinfeldModule::rank_two(&r, g, d).unwrap();
            let c = k.random_nonzero(&mut rng, 1, 0);
            let phi = base.twist(&c).unwrap();
            let cocycle = DescentCocycle::coboundary(&gal, &c).unwrap();
            let (psi, _) = descend_k_model(&phi, &cocycle, &gal, &mut rng).unwrap();
            assert!(psi.is_fixed(&gal));
            assert_eq!(psi.j_invariant().unwrap(), phi.j_invariant().unwrap());
        }
        let phi = DrinfeldModule::rank_two(&r, k.t(), k.one()).unwrap();
        let trivial = DescentCocycle {
            nu: vec![k.one(); 2],
        };
        let (psi, nu) = descend_k_model(&phi, &trivial, &gal, &mut rng).unwrap();
        assert!(nu.as_fq().is_some());
        assert_eq!(psi, phi);
        let broken = DescentCocycle {
            nu: vec![k.one(), k.from_int(2)],
        };
        assert!(matches!(
            descend_k_model(&phi, &broken, &gal, &mut rng),
            Err(Error::CocycleViolation(_))
        ));
    }
}
