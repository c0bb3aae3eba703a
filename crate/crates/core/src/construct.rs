//! Builders for modules with prescribed rational torsion and for random
//! isogeny chains, used by tests, the acceptance suite and the demo command.
//!
//! A module phi_T = T + g tau + Delta tau^2 has z as a (T - c)-torsion point iff
//! (T - c) + g z^(q-1) + Delta z^(q^2-1) = 0, which is linear in (g, Delta).
//! For such z, u = tau - z^(q-1) right-divides phi_(T-c) = eta u, and the
//! rotation psi_T = u eta + c is the target of u.

use rand::Rng;

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::ext::ExtElem;
use crate::fq::Fq;
use crate::isogeny::Isogeny;
use crate::poly::Poly;
use crate::ring::{Field, Ring};
use crate::skew::{SkewPoly, SkewRing};

/// A torsion point z with phi_T(z) = c z.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionPoint {
    pub c: Fq,
    pub z: ExtElem,
}

/// The rank-two module having both given points as torsion points.
pub fn module_with_points(
    ring: &SkewRing,
    p1: &TorsionPoint,
    p2: &TorsionPoint,
) -> Result<DrinfeldModule> {
    let k = ring.field();
    let q = k.q();
    let rhs = |p: &TorsionPoint| k.sub(&k.from_fq(p.c), &k.t());
    let (a1, b1) = (k.pow(&p1.z, q - 1), k.pow(&p1.z, q * q - 1));
    let (a2, b2) = (k.pow(&p2.z, q - 1), k.pow(&p2.z, q * q - 1));
    let det = k.sub(&k.mul(&a1, &b2), &k.mul(&a2, &b1));
    if det.is_zero() {
        return Err(Error::InvalidField(
            "torsion points give a singular system".into(),
        ));
    }
    let (r1, r2) = (rhs(p1), rhs(p2));
    let g = k.div(&k.sub(&k.mul(&r1, &b2), &k.mul(&r2, &b1)), &det)?;
    let delta = k.div(&k.sub(&k.mul(&a1, &r2), &k.mul(&a2, &r1)), &det)?;
    if delta.is_zero() {
        return Err(Error::RankZero);
    }
    DrinfeldModule::rank_two(ring, g, delta)
}

/// u = tau - z^(q-1), whose kernel is the line F_q z.
pub fn line_kernel(ring: &SkewRing, z: &ExtElem) -> SkewPoly {
    let k = ring.field();
    ring.sub(&ring.tau(), &ring.constant(k.pow(z, k.q() - 1)))
}

/// The isogeny out of phi with kernel F_q z.
pub fn line_isogeny(phi: &DrinfeldModule, z: &ExtElem) -> Result<Isogeny> {
    Isogeny::along(phi, line_kernel(phi.ring(), z))
}

/// Random small nonzero element whose (T - c)-system with a second point is solvable.
fn random_point<R: Rng + ?Sized>(ring: &SkewRing, rng: &mut R, c: Fq) -> TorsionPoint {
    let k = ring.field();
    TorsionPoint {
        c,
        z: k.random_nonzero(rng, 1, 0),
    }
}

/// A module with two rational torsion points for the primes T - c1 and T - c2
/// (c1 = c2 gives full rational (T - c1)-torsion).
pub fn random_module_with_points<R: Rng + ?Sized>(
    ring: &SkewRing,
    rng: &mut R,
    c1: Fq,
    c2: Fq,
) -> (DrinfeldModule, TorsionPoint, TorsionPoint) {
    loop {
        let p1 = random_point(ring, rng, c1);
        let p2 = random_point(ring, rng, c2);
        if let Ok(phi) = module_with_points(ring, &p1, &p2) {
            return (phi, p1, p2);
        }
    }
}

/// One step of a random chain, with the rational torsion points carried along.
pub struct ChainState {
    pub module: DrinfeldModule,
    pub points: Vec<TorsionPoint>,
}

/// A random composable chain of `len` isogenies over the ring's field, mixing
/// line isogenies, endomorphisms phi_a, scalars and duals, with total
/// tau-degree at most `max_tau`.
pub fn random_chain<R: Rng + ?Sized>(
    ring: &SkewRing,
    rng: &mut R,
    len: usize,
    max_tau: usize,
) -> Result<Vec<Isogeny>> {
    let k = ring.field();
    let fq = k.fq().clone();
    let a = k.poly_ring().clone();
    let c1 = fq.random(rng);
    let c2 = fq.random(rng);
    let (phi, p1, p2) = random_module_with_points(ring, rng, c1, c2);
    let mut st = ChainState {
        module: phi,
        points: vec![p1, p2],
    };
    let mut out: Vec<Isogeny> = Vec::with_capacity(len);
    let mut used = 0;
    while out.len() < len {
        let room = max_tau - used;
        let mut choice = rng.gen_range(0..10);
        if choice < 5 && (room < 1 || st.points.is_empty()) {
            choice = 5;
        }
        if (5..7).contains(&choice) && room < 2 {
            choice = 7;
        }
        if choice >= 8 && out.last().map_or(true, |l| l.tau_degree() > room) {
            choice = 7;
        }
        let step = if choice < 5 {
            let i = rng.gen_range(0..st.points.len());
            line_isogeny(&st.module, &st.points[i].z)?
        } else if choice < 7 {
            let c = fq.random_nonzero(rng);
            let lin = a.linear(c);
            Isogeny::endo(&st.module, &lin)?
        } else if choice < 8 || out.is_empty() {
            Isogeny::scalar(&st.module, &k.random_nonzero(rng, 1, 0))?
        } else {
            out.last().unwrap().dual()?
        };
        let mut pts = Vec::new();
        for p in &st.points {
            let z = ring.eval(step.mu(), &p.z);
            if !z.is_zero() {
                pts.push(TorsionPoint { c: p.c, z });
            }
        }
        used += step.tau_degree();
        st = ChainState {
            module: step.target().clone(),
            points: pts,
        };
        out.push(step);
    }
    Ok(out)
}

/// mu_w after the dual of mu_z for two independent (T - c)-torsion points:
/// a cyclic isogeny of degree (T - c)^2 between the two neighbours.
pub fn cyclic_square<R: Rng + ?Sized>(ring: &SkewRing, rng: &mut R, c: Fq) -> Result<Isogeny> {
    let (phi, p1, p2) = random_module_with_points(ring, rng, c, c);
    let uz = line_isogeny(&phi, &p1.z)?;
    let uw = line_isogeny(&phi, &p2.z)?;
    uw.compose(&uz.dual()?)
}

/// The rotation construction: phi_T = mu1 mu2 + c, psi_T = mu2 mu1 + c and
/// mu1: psi -> phi, for random linear mu1, mu2 with constant terms multiplying to T - c.
pub fn rotation<R: Rng + ?Sized>(ring: &SkewRing, rng: &mut R, c: Fq) -> Result<Isogeny> {
    let k = ring.field();
    let a = k.poly_ring();
    loop {
        let a0 = k.fq().random_nonzero(rng);
        let b0 = k.from_poly(&a.scale(&a.linear(c), k.fq().inv_fq(a0)?));
        let a0 = k.from_fq(a0);
        let a1 = k.random_nonzero(rng, 1, 0);
        let b1 = k.random_nonzero(rng, 1, 0);
        let mu1 = SkewPoly::from_coeffs(vec![a0, a1]);
        let mu2 = SkewPoly::from_coeffs(vec![b0, b1]);
        let cc = ring.constant(k.from_fq(c));
        let phi = DrinfeldModule::new(ring, ring.add(&ring.mul(&mu1, &mu2), &cc))?;
        let psi = DrinfeldModule::new(ring, ring.add(&ring.mul(&mu2, &mu1), &cc))?;
        if phi.rank() == 2 && psi.rank() == 2 {
            return Isogeny::verify(&psi, &phi, mu1);
        }
    }
}

/// phi_a for a random monic a of the given degree.
pub fn random_endo<R: Rng + ?Sized>(
    phi: &DrinfeldModule,
    rng: &mut R,
    deg: usize,
) -> Result<Isogeny> {
    let a = phi.field().poly_ring().random_monic(rng, deg);
    Isogeny::endo(phi, &a)
}

/// T - c as a polynomial.
pub fn linear_prime(ring: &SkewRing, c: Fq) -> Poly {
    ring.field().poly_ring().linear(c)
}
