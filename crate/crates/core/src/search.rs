//! Bounded search for intertwiners u with u phi_T = psi_T u.
//!
//! Writing u = sum c_i tau^i, comparing coefficients gives
//! c_k (T^(q^k) - T) = sum_j (psi_j c_(k-j)^(q^j) - phi_j^(q^(k-j)) c_(k-j)),
//! so every c_k = L_k(c_0) for a linearized polynomial L_k, and u has
//! tau-degree at most N exactly when c_0 is a common root of the closure
//! polynomials E_(N+1), ..., E_(N+r). Roots in K are found by F_q-linear
//! algebra after bounding denominators and degrees at infinity.

use std::sync::atomic::{AtomicBool, Ordering};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::ext::{ExtElem, ExtField};
use crate::fq::{Fq, FqField};
use crate::linalg;
use crate::poly::Poly;
use crate::ring::{Field, Ring};
use crate::skew::{SkewPoly, SkewRing};

type Rat = Ratio<i128>;

#[derive(Clone, Debug, PartialEq)]
pub enum SearchMode {
    /// Find every root in K.
    Automatic,
    /// Only test the supplied constant terms.
    Candidates(Vec<ExtElem>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    Complete,
    CandidateRestricted,
}

/// An F_q-basis of the intertwiners of tau-degree at most `bound` found by the search.
#[derive(Clone, Debug, PartialEq)]
pub struct IsogenySearch {
    pub basis: Vec<SkewPoly>,
    pub completeness: Completeness,
    pub bound: usize,
}

impl IsogenySearch {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Every nonzero F_q-combination of the basis.
    pub fn elements(&self, ring: &SkewRing) -> Vec<SkewPoly> {
        let k = ring.field();
        let fq = k.fq();
        let q = fq.size() as usize;
        let d = self.basis.len();
        let total = q.pow(d as u32);
        let mut out = Vec::with_capacity(total.saturating_sub(1));
        for mut idx in 1..total {
            let mut acc = SkewPoly::zero();
            for b in &self.basis {
                let c = Fq((idx % q) as u32);
                idx /= q;
                if c != Fq::ZERO {
                    acc = ring.add(&acc, &ring.scale_left(&k.from_fq(c), b));
                }
            }
            out.push(acc);
        }
        out
    }
}

fn tau_shift(ring: &SkewRing, l: &SkewPoly, j: usize) -> SkewPoly {
    let k = ring.field();
    let mut c = vec![k.zero(); j];
    c.extend(l.coeffs().iter().map(|x| k.frobenius_pow(x, j)));
    SkewPoly::from_coeffs(c)
}

/// L_0..L_N and the closure polynomials E_(N+1)..E_(N+r).
pub fn closure_system(
    phi: &DrinfeldModule,
    psi: &DrinfeldModule,
    n: usize,
) -> Result<(Vec<SkewPoly>, Vec<SkewPoly>)> {
    if phi.field() != psi.field() {
        return Err(Error::FieldMismatch);
    }
    let ring = phi.ring();
    let k = ring.field();
    let a = k.poly_ring();
    let r = phi.rank().max(psi.rank());
    // phi_j^(q^i) for i <= n
    let mut phi_pows: Vec<Vec<ExtElem>> = Vec::with_capacity(r + 1);
    for j in 0..=r {
        let mut v = vec![ring.coeff(phi.phi_t(), j)];
        for i in 1..=n {
            let next = k.frobenius(&v[i - 1]);
            v.push(next);
        }
        phi_pows.push(v);
    }
    let mut ls = vec![ring.one()];
    let mut es = Vec::with_capacity(r);
    let q = a.q() as usize;
    let mut qk = 1usize;
    for kk in 1..=n + r {
        let mut acc = SkewPoly::zero();
        for j in 1..=r.min(kk) {
            let i = kk - j;
            if i > n {
                continue;
            }
            let l = &ls[i];
            let psi_j = ring.coeff(psi.phi_t(), j);
            let t1 = ring.scale_left(&psi_j, &tau_shift(ring, l, j));
            let t2 = ring.scale_left(&phi_pows[j][i], l);
            acc = ring.add(&acc, &ring.sub(&t1, &t2));
        }
        if kk <= n {
            qk = qk
                .checked_mul(q)
                .ok_or_else(|| Error::UnsupportedField("search bound too large".into()))?;
            let d = a.sub(&Poly::monomial(Fq::ONE, qk), &Poly::t());
            let inv = k.inv(&k.from_poly(&d))?;
            ls.push(ring.scale_left(&inv, &acc));
        } else {
            es.push(acc);
        }
    }
    Ok((ls, es))
}

/// Upper bound for deg x at every place over infinity.
fn x_degree_bound(k: &ExtField) -> Rat {
    let e = k.degree();
    if e == 1 {
        return Rat::from_integer(0);
    }
    let f = k.modulus();
    (0..e)
        .filter(|&i| !f[i].is_zero())
        .map(|i| Rat::new(f[i].deg_i() as i128, (e - i) as i128))
        .max()
        .unwrap_or_else(|| Rat::from_integer(0))
}

/// Upper bound for the degree of y at every place over infinity.
fn degree_upper_bound(y: &ExtElem, rf: Rat) -> Option<Rat> {
    let top = y
        .num()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| Rat::from_integer(c.deg_i() as i128) + rf * Rat::from_integer(i as i128))
        .max()?;
    Some(top - Rat::from_integer(y.den().deg_i() as i128))
}

/// Multiply every value by one common denominator and flatten to F_q coordinates.
fn flatten(k: &ExtField, values: &[ExtElem]) -> Vec<Vec<Fq>> {
    let a = k.poly_ring();
    let mut den = Poly::one();
    for v in values {
        den = a.lcm(&den, v.den());
    }
    let scaled: Vec<Vec<Poly>> = values
        .iter()
        .map(|v| {
            let m = a.div_exact(&den, v.den()).expect("lcm");
            v.num().iter().map(|c| a.mul(c, &m)).collect()
        })
        .collect();
    let width: Vec<usize> = (0..k.degree())
        .map(|i| {
            scaled
                .iter()
                .map(|s| s[i].coeffs().len())
                .max()
                .unwrap_or(0)
        })
        .collect();
    scaled
        .iter()
        .map(|s| {
            let mut out = Vec::new();
            for (i, c) in s.iter().enumerate() {
                for t in 0..width[i] {
                    out.push(c.coeff(t));
                }
            }
            out
        })
        .collect()
}

/// Indices of an F_q-independent subset of the values, scanning in order.
pub fn fq_independent(k: &ExtField, values: &[ExtElem]) -> Vec<usize> {
    let flat = flatten(k, values);
    let mut finder = linalg::DependencyFinder::new(k.fq().clone());
    let mut keep = Vec::new();
    for (i, v) in flat.into_iter().enumerate() {
        if finder.push(v).is_none() {
            keep.push(i);
        }
    }
    keep
}

fn check_cancel(cancel: Option<&AtomicBool>) -> Result<()> {
    match cancel {
        Some(c) if c.load(Ordering::Relaxed) => Err(Error::Cancelled),
        _ => Ok(()),
    }
}

/// An F_q-basis of the roots in K of the linearized polynomial g.
pub fn linearized_roots(
    ring: &SkewRing,
    g: &SkewPoly,
    cancel: Option<&AtomicBool>,
) -> Result<Vec<ExtElem>> {
    let k = ring.field();
    let a = k.poly_ring();
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = ring.monic(g);
    let m_top = g.degree().unwrap();
    if m_top == 1 && k.is_rational_field() {
        return Ok(rational_line_roots(k, &g.coeffs()[0]).into_iter().collect());
    }
    let e = k.degree();
    let rf = x_degree_bound(k);
    let q = a.q() as i128;
    let qm = q
        .checked_pow(m_top as u32)
        .ok_or_else(|| Error::UnsupportedField("root bound overflow".into()))?;
    let mut b: Option<Rat> = None;
    for (m, c) in g.coeffs().iter().enumerate().take(m_top) {
        if let Some(d) = degree_upper_bound(c, rf) {
            let w = d / Rat::from_integer(qm - q.pow(m as u32));
            b = Some(b.map_or(w, |x: Rat| x.max(w)));
        }
    }
    // only the monomial tau^M: zero is the only root
    let Some(b) = b else { return Ok(Vec::new()) };
    let disc = k.discriminant();
    if disc.is_zero() {
        return Err(Error::UnsupportedField(
            "extension modulus is inseparable".into(),
        ));
    }
    let mut h = Poly::one();
    for c in g.coeffs() {
        h = a.lcm(&h, c.den());
    }
    let den = a.mul(&h, &disc);
    let half_disc = Rat::new(disc.deg_i() as i128, 2);
    let tri = (e * (e - 1) / 2) as i128;
    let mut basis: Vec<ExtElem> = Vec::new();
    for i in 0..e {
        let bound = b + rf * Rat::from_integer(tri - i as i128) - half_disc
            + Rat::from_integer(den.deg_i() as i128);
        let top = bound.floor().to_integer();
        for j in 0..=top.max(-1) {
            let mut num = vec![Poly::zero(); e];
            num[i] = Poly::monomial(Fq::ONE, j as usize);
            basis.push(k.from_parts(num, den.clone())?);
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let mut values = Vec::with_capacity(basis.len());
    for z in &basis {
        check_cancel(cancel)?;
        values.push(ring.eval(&g, z));
    }
    let flat = flatten(k, &values);
    let rows = flat.iter().map(Vec::len).max().unwrap_or(0);
    let matrix: linalg::Matrix<Fq> = (0..rows)
        .map(|r| {
            flat.iter()
                .map(|col| col.get(r).copied().unwrap_or(Fq::ZERO))
                .collect()
        })
        .collect();
    let fq: &FqField = k.fq();
    let ns = if rows == 0 {
        (0..basis.len())
            .map(|i| {
                let mut v = vec![Fq::ZERO; basis.len()];
                v[i] = Fq::ONE;
                v
            })
            .collect()
    } else {
        linalg::nullspace(fq, &matrix, basis.len())
    };
    let roots = ns
        .into_iter()
        .map(|v| {
            v.iter()
                .zip(&basis)
                .filter(|(c, _)| **c != Fq::ZERO)
                .fold(k.zero(), |acc, (c, z)| k.add(&acc, &k.scale_fq(z, *c)))
        })
        .collect::<Vec<_>>();
    for r in &roots {
        if !ring.eval(&g, r).is_zero() {
            return Err(Error::InternalInconsistency(
                "linearized root check failed".into(),
            ));
        }
    }
    Ok(roots)
}

/// A nonzero c in F_q(T) with c^(q-1) = -c0, the roots of c0 + tau.
fn rational_line_roots(k: &ExtField, c0: &ExtElem) -> Option<ExtElem> {
    if c0.is_zero() {
        return None;
    }
    let a = k.poly_ring();
    let (num, den) = (a.neg(&c0.num()[0]), c0.den().clone());
    let g = a.gcd(&num, &den);
    let (num, den) = (a.div_exact(&num, &g).ok()?, a.div_exact(&den, &g).ok()?);
    if num.lc() != den.lc() {
        return None;
    }
    let e = a.q() - 1;
    let rn = a.monic_root(&a.monic(&num), e)?;
    let rd = a.monic_root(&a.monic(&den), e)?;
    k.from_parts(vec![rn], rd).ok()
}

fn build_intertwiner(ring: &SkewRing, ls: &[SkewPoly], c0: &ExtElem) -> SkewPoly {
    SkewPoly::from_coeffs(ls.iter().map(|l| ring.eval(l, c0)).collect())
}

/// All u of tau-degree at most n with u phi_T = psi_T u, as an F_q-basis.
pub fn find_isogenies(
    phi: &DrinfeldModule,
    psi: &DrinfeldModule,
    n: usize,
    mode: &SearchMode,
    cancel: Option<&AtomicBool>,
) -> Result<IsogenySearch> {
    phi.require_rank_two()?;
    psi.require_rank_two()?;
    let ring = phi.ring();
    let k = ring.field();
    let (ls, es) = closure_system(phi, psi, n)?;
    let (c0s, completeness) = match mode {
        SearchMode::Automatic => {
            let mut g = SkewPoly::zero();
            for e in &es {
                check_cancel(cancel)?;
                if !e.is_zero() {
                    g = if g.is_zero() {
                        ring.monic(e)
                    } else {
                        ring.right_gcd(&g, e)?
                    };
                }
            }
            (linearized_roots(ring, &g, cancel)?, Completeness::Complete)
        }
        SearchMode::Candidates(cands) => {
            let mut ok = Vec::new();
            for c in cands {
                check_cancel(cancel)?;
                if !c.is_zero() && es.iter().all(|e| ring.eval(e, c).is_zero()) {
                    ok.push(c.clone());
                }
            }
            let keep = fq_independent(k, &ok);
            (
                keep.into_iter().map(|i| ok[i].clone()).collect(),
                Completeness::CandidateRestricted,
            )
        }
    };
    let mut basis = Vec::with_capacity(c0s.len());
    for c0 in &c0s {
        let u = build_intertwiner(ring, &ls, c0);
        if ring.mul(&u, phi.phi_t()) != ring.mul(psi.phi_t(), &u) {
            return Err(Error::InternalInconsistency(
                "search produced a non-intertwiner".into(),
            ));
        }
        basis.push(u);
    }
    Ok(IsogenySearch {
        basis,
        completeness,
        bound: n,
    })
}

/// Endomorphisms of tau-degree at most n.
pub fn endo_search(phi: &DrinfeldModule, n: usize, mode: &SearchMode) -> Result<IsogenySearch> {
    find_isogenies(phi, phi, n, mode, None)
}

/// Evidence that phi has no K-rational endomorphisms beyond phi(A) up to tau-degree `bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonCmCertificate {
    pub bound: usize,
    pub phi_t: SkewPoly,
}

impl NonCmCertificate {
    /// Runs the complete endomorphism search; the F_q-span of phi_a with
    /// 2 deg a <= bound has dimension floor(bound/2) + 1.
    pub fn certify(phi: &DrinfeldModule, bound: usize) -> Result<Self> {
        phi.require_rank_two()?;
        let found = endo_search(phi, bound, &SearchMode::Automatic)?;
        if found.dimension() != bound / 2 + 1 {
            return Err(Error::ComplexMultiplication(bound));
        }
        Ok(NonCmCertificate {
            bound,
            phi_t: phi.phi_t().clone(),
        })
    }

    /// Check that this certificate belongs to phi and reaches the given tau-degree.
    pub fn covers(&self, phi: &DrinfeldModule, deg: usize) -> Result<()> {
        if &self.phi_t != phi.phi_t() {
            return Err(Error::Certificate(
                "certificate was issued for a different module".into(),
            ));
        }
        if self.bound < deg {
            return Err(Error::Certificate(format!(
                "bound {} is below tau-degree {deg}",
                self.bound
            )));
        }
        Ok(())
    }
}
