//! The quadratic conjugate example: K = Q(alpha) with alpha^2 = T + 1 and
//! s: alpha -> -alpha. With mu = alpha + 1 - tau and eta = alpha - 1 + tau,
//! phi_T = mu eta is a module whose conjugate is s(phi)_T = eta mu, so mu is a
//! T-isogeny s(phi) -> phi although phi has no model over Q.

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::ext::ExtField;
use crate::fq::FqField;
use crate::galois::{GaloisDatum, GaloisGen};
use crate::isogeny::Isogeny;
use crate::poly::{Poly, PolyRing};
use crate::ring::Ring;
use crate::skew::{SkewPoly, SkewRing};

#[derive(Clone, Debug)]
pub struct QuadraticExample {
    pub ring: SkewRing,
    pub galois: GaloisDatum,
    pub phi: DrinfeldModule,
    pub conj: DrinfeldModule,
    /// mu: s(phi) -> phi
    pub mu: Isogeny,
    /// eta: phi -> s(phi)
    pub eta: Isogeny,
}

pub fn quadratic_field(fq: FqField) -> Result<(SkewRing, GaloisDatum)> {
    if fq.characteristic() == 2 {
        return Err(Error::InvalidField(
            "the quadratic example needs odd q".into(),
        ));
    }
    let a = PolyRing::new(fq);
    let k = ExtField::new(
        a.clone(),
        vec![a.from_ints(&[-1, -1]), Poly::zero(), Poly::one()],
    )?;
    let s = GaloisGen {
        name: "s".into(),
        image: k.neg(&k.x()),
        order: 2,
    };
    let gal = GaloisDatum::new(k.clone(), vec![s])?;
    Ok((SkewRing::new(k), gal))
}

pub fn quadratic_example(fq: FqField) -> Result<QuadraticExample> {
    let (ring, galois) = quadratic_field(fq)?;
    let k = ring.field().clone();
    let x = k.x();
    let one = k.one();
    let mu = SkewPoly::from_coeffs(vec![k.add(&x, &one), k.neg(&one)]);
    let eta = SkewPoly::from_coeffs(vec![k.sub(&x, &one), one.clone()]);
    let phi = DrinfeldModule::new(&ring, ring.mul(&mu, &eta))?;
    let conj = phi.conjugate(&galois, galois.gen_index(0));
    if *conj.phi_t() != ring.mul(&eta, &mu) {
        return Err(Error::InternalInconsistency(
            "conjugate differs from the rotated product".into(),
        ));
    }
    let mu_iso = Isogeny::verify(&conj, &phi, mu)?;
    let eta_iso = Isogeny::verify(&phi, &conj, eta)?;
    Ok(QuadraticExample {
        ring,
        galois,
        phi,
        conj,
        mu: mu_iso,
        eta: eta_iso,
    })
}
