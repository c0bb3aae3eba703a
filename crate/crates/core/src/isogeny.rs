//! Isogenies between rank-two modules: verification, degree, dual,
//! primary parts and normalization.

use std::sync::OnceLock;

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::ext::ExtElem;
use crate::fq::Fq;
use crate::galois::GaloisDatum;
use crate::ideal::{monic_divisors, IdealA};
use crate::linalg::DependencyFinder;
use crate::poly::Poly;
use crate::ring::{Field, Ring};
use crate::search::NonCmCertificate;
use crate::skew::SkewPoly;

/// Kernel invariants: Ker mu = A/n1 + A/n2 with n2 | n1, degree n1 n2.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeData {
    pub deg: IdealA,
    pub n1: IdealA,
    pub n2: IdealA,
}

#[derive(Clone, Debug)]
pub struct Isogeny {
    source: DrinfeldModule,
    target: DrinfeldModule,
    mu: SkewPoly,
    degree: OnceLock<DegreeData>,
}

impl PartialEq for Isogeny {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.mu == other.mu
    }
}

impl Isogeny {
    /// Check mu phi_T = psi_T mu and separability.
    pub fn verify(source: &DrinfeldModule, target: &DrinfeldModule, mu: SkewPoly) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch);
        }
        if mu.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let r = source.ring();
        if r.differential(&mu).is_zero() {
            return Err(Error::Inseparable);
        }
        if r.mul(&mu, source.phi_t()) != r.mul(target.phi_t(), &mu) {
            return Err(Error::NotIntertwining);
        }
        Ok(Isogeny {
            source: source.clone(),
            target: target.clone(),
            mu,
            degree: OnceLock::new(),
        })
    }

    /// The endomorphism phi_a.
    pub fn endo(phi: &DrinfeldModule, a: &Poly) -> Result<Self> {
        Self::verify(phi, phi, phi.phi_a(a))
    }

    /// The isomorphism c: phi -> c phi c^(-1).
    pub fn scalar(phi: &DrinfeldModule, c: &ExtElem) -> Result<Self> {
        let target = phi.twist(c)?;
        Self::verify(phi, &target, phi.ring().constant(c.clone()))
    }

    pub fn source(&self) -> &DrinfeldModule {
        &self.source
    }

    pub fn target(&self) -> &DrinfeldModule {
        &self.target
    }

    pub fn mu(&self) -> &SkewPoly {
        &self.mu
    }

    pub fn tau_degree(&self) -> usize {
        self.mu.degree().expect("nonzero")
    }

    /// Monic a of least degree with phi_a = eta mu for some eta.
    pub fn annihilator(&self) -> Result<IdealA> {
        let r = self.source.ring();
        let k = r.field();
        let a = k.poly_ring();
        let d = self.tau_degree();
        let mut rems = vec![r.right_rem(&r.one(), &self.mu)?];
        for _ in 0..d {
            let next = r.right_rem(&r.mul(rems.last().unwrap(), self.source.phi_t()), &self.mu)?;
            rems.push(next);
        }
        // flatten coefficient i of every remainder over a shared denominator
        let mut flat: Vec<Vec<Fq>> = vec![Vec::new(); rems.len()];
        for i in 0..d {
            let vals: Vec<ExtElem> = rems.iter().map(|x| r.coeff(x, i)).collect();
            let mut den = Poly::one();
            for v in &vals {
                den = a.lcm(&den, v.den());
            }
            let scaled: Vec<Vec<Poly>> = vals
                .iter()
                .map(|v| {
                    let m = a.div_exact(&den, v.den()).expect("lcm");
                    v.num().iter().map(|c| a.mul(c, &m)).collect()
                })
                .collect();
            for j in 0..k.degree() {
                let width = scaled
                    .iter()
                    .map(|s| s[j].coeffs().len())
                    .max()
                    .unwrap_or(0);
                for (row, s) in flat.iter_mut().zip(&scaled) {
                    row.extend((0..width).map(|t| s[j].coeff(t)));
                }
            }
        }
        let mut finder = DependencyFinder::new(k.fq().clone());
        for v in flat {
            if let Some(c) = finder.push(v) {
                return IdealA::new(a, &Poly::from_coeffs(c));
            }
        }
        Err(Error::InternalInconsistency(
            "no annihilator up to the tau-degree".into(),
        ))
    }

    /// Degree ideal and kernel invariants (rank two).
    pub fn degree(&self) -> Result<&DegreeData> {
        if let Some(d) = self.degree.get() {
            return Ok(d);
        }
        self.source.require_rank_two()?;
        let a = self.source.field().poly_ring();
        let r = self.source.ring();
        let n1 = self.annihilator()?;
        let d = self.tau_degree();
        let want = d
            .checked_sub(n1.degree())
            .ok_or_else(|| Error::StructureError("annihilator degree exceeds tau-degree".into()))?;
        let n2 = if want == 0 {
            IdealA::unit()
        } else {
            let found = monic_divisors(a, &n1)
                .into_iter()
                .filter(|b| b.degree() == Some(want))
                .find(|b| r.right_divides(&self.source.phi_a(b), &self.mu))
                .ok_or_else(|| {
                    Error::StructureError(
                        "no second kernel invariant matches the tau-degree".into(),
                    )
                })?;
            IdealA::new(a, &found)?
        };
        let deg = n1.mul(a, &n2);
        let _ = self.degree.set(DegreeData { deg, n1, n2 });
        Ok(self.degree.get().unwrap())
    }

    pub fn is_cyclic(&self) -> Result<bool> {
        Ok(self.degree()?.n2.is_unit())
    }

    /// Primitive, which for non-CM rank two is the same as cyclic.
    pub fn is_primitive(&self, cert: &NonCmCertificate) -> Result<bool> {
        cert.covers(&self.source, self.tau_degree())?;
        self.is_cyclic()
    }

    /// eta with eta mu = phi_a and mu eta = psi_a, a the monic generator of the degree.
    ///
    /// eta is built from its constant term a / d(mu) by the intertwining recurrence;
    /// eta mu and mu eta are then endomorphisms with constant term a, which pins
    /// them down as phi_a and psi_a.
    pub fn dual(&self) -> Result<Isogeny> {
        let dd = self.degree()?.clone();
        let r = self.source.ring();
        let k = r.field();
        let an = dd.deg.gen();
        let c0 = k.div(&k.from_poly(an), &r.differential(&self.mu))?;
        let deg = 2 * an.deg_i() as usize - self.tau_degree();
        let eta = intertwiner_from_constant(&self.target, &self.source, c0, deg)?;
        let dual = Isogeny::verify(&self.target, &self.source, eta)
            .map_err(|_| Error::InternalInconsistency("dual recurrence does not close".into()))?;
        if dual.degree()?.deg != dd.deg {
            return Err(Error::InternalInconsistency(
                "dual has a different degree".into(),
            ));
        }
        Ok(dual)
    }

    /// self after first, i.e. mu_self * mu_first.
    pub fn compose(&self, first: &Isogeny) -> Result<Isogeny> {
        if first.target.phi_t() != self.source.phi_t() {
            return Err(Error::ChainMismatch);
        }
        let r = self.source.ring();
        let c = Isogeny::verify(&first.source, &self.target, r.mul(&self.mu, &first.mu))?;
        let a = r.field().poly_ring();
        if self.source.rank() == 2 {
            let want = self.degree()?.deg.mul(a, &first.degree()?.deg);
            if c.degree()?.deg != want {
                return Err(Error::InternalInconsistency(
                    "degree is not multiplicative".into(),
                ));
            }
        }
        Ok(c)
    }

    /// p-adic valuation of the degree of a primitive isogeny.
    pub fn delta_p(&self, p: &IdealA, cert: &NonCmCertificate) -> Result<u32> {
        if !self.is_primitive(cert)? {
            return Err(Error::NotPrimitive);
        }
        let a = self.source.field().poly_ring();
        Ok(self.degree()?.deg.valuation(a, p))
    }

    /// Split a cyclic isogeny into its p-primary part followed by a part of degree prime to p.
    pub fn project_p(&self, p: &IdealA) -> Result<Projection> {
        if !self.is_cyclic()? {
            return Err(Error::NotCyclic);
        }
        let r = self.source.ring();
        let a = self.source.field().poly_ring();
        let kk = self.tau_degree() as u64;
        let apk = a.pow(p.gen(), kk);
        let part = r.right_gcd(&self.mu, &self.source.phi_a(&apk))?;
        let p_part = Isogeny::along(&self.source, part)?;
        let rest = r.right_div_exact(&self.mu, p_part.mu())?;
        let coprime_part = Isogeny::verify(p_part.target(), &self.target, rest)?;
        Ok(Projection {
            target: p_part.target.clone(),
            p_part,
            coprime_part,
        })
    }

    /// Given a right factor u of an isogeny out of phi, the isogeny phi -> chi
    /// with chi_T = (u phi_T) / u.
    pub fn along(phi: &DrinfeldModule, u: SkewPoly) -> Result<Isogeny> {
        let r = phi.ring();
        let chi_t = r.right_div_exact(&r.mul(&u, phi.phi_t()), &u)?;
        let chi = DrinfeldModule::new(r, chi_t)?;
        Isogeny::verify(phi, &chi, u)
    }

    /// Factor a cyclic isogeny of degree p^n into n isogenies of degree p, in application order.
    pub fn factor_prime_power(&self) -> Result<Vec<Isogeny>> {
        let a = self.source.field().poly_ring();
        let dd = self.degree()?;
        let factors = dd.deg.factors(a);
        if factors.is_empty() {
            return Ok(Vec::new());
        }
        if factors.len() > 1 {
            return Err(Error::NotPrimePower);
        }
        if !dd.n2.is_unit() {
            return Err(Error::NotCyclic);
        }
        let (p, n) = factors[0].clone();
        let r = self.source.ring();
        let mut out = Vec::with_capacity(n as usize);
        let mut cur = self.clone();
        for _ in 0..n {
            let src = cur.source().clone();
            let step = r.right_gcd(cur.mu(), &src.phi_a(p.gen()))?;
            let f = Isogeny::along(&src, step)?;
            let rest = r.right_div_exact(cur.mu(), f.mu())?;
            cur = Isogeny::verify(f.target(), cur.target(), rest)?;
            out.push(f);
        }
        if !cur.mu().is_scalar() {
            return Err(Error::InternalInconsistency(
                "prime-power factorization left a remainder".into(),
            ));
        }
        // absorb the leftover isomorphism into the last factor
        if let Some(last) = out.pop() {
            let fixed = Isogeny::verify(last.source(), cur.target(), r.mul(cur.mu(), last.mu()))?;
            out.push(fixed);
        }
        Ok(out)
    }

    /// Write mu = c0 mu' with mu' having constant term 1 and Galois-fixed coefficients.
    pub fn normalize(&self, gal: &GaloisDatum, cert: &NonCmCertificate) -> Result<Normalized> {
        if !self.is_primitive(cert)? {
            return Err(Error::NotPrimitive);
        }
        if !self.source.is_fixed(gal) || !self.target.is_fixed(gal) {
            return Err(Error::InvalidField(
                "source and target must have Galois-fixed coefficients".into(),
            ));
        }
        let r = self.source.ring();
        let k = r.field();
        let fq = k.fq();
        let c0 = r.differential(&self.mu);
        let mut xi = Vec::with_capacity(gal.order());
        for s in 0..gal.order() {
            let smu = r.conjugate(gal, s, &self.mu);
            let ratio = k.div(&gal.apply(s, &c0), &c0)?;
            let x = ratio.as_fq().ok_or(Error::NotScalarConjugate)?;
            if smu != r.scale_left(&ratio, &self.mu) {
                return Err(Error::NotScalarConjugate);
            }
            xi.push(x);
        }
        for s in 0..gal.order() {
            for t in 0..gal.order() {
                if xi[gal.compose(s, t)] != fq.mul_fq(xi[s], xi[t]) {
                    return Err(Error::InternalInconsistency(
                        "character is not multiplicative".into(),
                    ));
                }
            }
        }
        let n = xi
            .iter()
            .map(|&x| fq.order(x))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(1, lcm);
        let lambda = k.pow(&c0, n);
        if !gal.is_fixed(&lambda) {
            return Err(Error::InternalInconsistency(
                "c0^n is not Galois-fixed".into(),
            ));
        }
        let mu_normalized = r.scale_left(&k.inv(&c0)?, &self.mu);
        if !r.is_fixed(gal, &mu_normalized) {
            return Err(Error::InternalInconsistency(
                "normalized isogeny is not Galois-fixed".into(),
            ));
        }
        Ok(Normalized {
            n,
            lambda,
            mu_normalized,
            xi,
            cert_bound: cert.bound,
        })
    }

    /// The conjugate s(mu): s(phi) -> s(psi).
    pub fn conjugate(&self, gal: &GaloisDatum, s: usize) -> Result<Isogeny> {
        let r = self.source.ring();
        Isogeny::verify(
            &self.source.conjugate(gal, s),
            &self.target.conjugate(gal, s),
            r.conjugate(gal, s, &self.mu),
        )
    }

    /// c in F_q^x with self = c other, when it exists.
    pub fn scalar_ratio(&self, other: &Isogeny) -> Option<Fq> {
        scalar_ratio(self.source.ring(), &self.mu, &other.mu)
    }
}

/// c in F_q^x with a = c b.
pub fn scalar_ratio(r: &crate::skew::SkewRing, a: &SkewPoly, b: &SkewPoly) -> Option<Fq> {
    let k = r.field();
    let (la, lb) = (a.lc()?, b.lc()?);
    let c = k.div(la, lb).ok()?.as_fq()?;
    (r.scale_left(&k.from_fq(c), b) == *a).then_some(c)
}

/// The unique u with u phi_T = psi_T u (through tau-degree d) and constant term c0:
/// u_k (T^(q^k) - T) = sum_j>=1 psi_j u_(k-j)^(q^j) - u_(k-j) phi_j^(q^(k-j)).
pub fn intertwiner_from_constant(
    phi: &DrinfeldModule,
    psi: &DrinfeldModule,
    c0: ExtElem,
    d: usize,
) -> Result<SkewPoly> {
    let r = phi.ring();
    let k = r.field();
    let t = k.t();
    let (pt, st) = (phi.phi_t(), psi.phi_t());
    let mut u = vec![c0];
    for n in 1..=d {
        let mut acc = k.zero();
        for j in 1..=n {
            let prev = &u[n - j];
            if prev.is_zero() {
                continue;
            }
            let sj = r.coeff(st, j);
            if !sj.is_zero() {
                acc = k.add(&acc, &k.mul(&sj, &k.frobenius_pow(prev, j)));
            }
            let pj = r.coeff(pt, j);
            if !pj.is_zero() {
                acc = k.sub(&acc, &k.mul(prev, &k.frobenius_pow(&pj, n - j)));
            }
        }
        let den = k.sub(&k.frobenius_pow(&t, n), &t);
        u.push(k.div(&acc, &den)?);
    }
    Ok(SkewPoly::from_coeffs(u))
}

fn lcm(a: u64, b: u64) -> u64 {
    a / crate::fq::gcd_u64(a, b) * b
}

#[derive(Clone, Debug)]
pub struct Projection {
    /// pi_p of the target.
    pub target: DrinfeldModule,
    pub p_part: Isogeny,
    pub coprime_part: Isogeny,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    pub n: u64,
    pub lambda: ExtElem,
    pub mu_normalized: SkewPoly,
    /// xi_s for every group element.
    pub xi: Vec<Fq>,
    pub cert_bound: usize,
}
