//! Points of Y_0(n) as cyclic isogenies: the Atkin-Lehner group W(n), its
//! action, the fingerprint Theta, star orbits and their descent data.

use crate::error::{Error, Result};
use crate::ext::ExtElem;
use crate::galois::GaloisDatum;
use crate::ideal::IdealA;
use crate::isogeny::Isogeny;
use crate::poly::PolyRing;
use crate::ring::Ring;
use crate::search::{find_isogenies, NonCmCertificate, SearchMode};
use crate::skew::{SkewPoly, SkewRing};

/// w_m in W(n): m | n with gcd(m, n/m) = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ALElement {
    pub m: IdealA,
    pub n: IdealA,
}

impl ALElement {
    pub fn new(ring: &PolyRing, m: IdealA, n: IdealA) -> Result<Self> {
        if !m.divides(ring, &n) {
            return Err(Error::BadAtkinLehner(format!(
                "{} does not divide {}",
                m.to_text(ring),
                n.to_text(ring)
            )));
        }
        let rest = n.div(ring, &m)?;
        if !m.gcd(ring, &rest).is_unit() {
            return Err(Error::BadAtkinLehner(format!(
                "{} is not coprime to its complement",
                m.to_text(ring)
            )));
        }
        Ok(ALElement { m, n })
    }

    pub fn identity(n: IdealA) -> Self {
        ALElement {
            m: IdealA::unit(),
            n,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_unit()
    }
}

/// w_m1 w_m2 = w_m3 with m3 = m1 m2 / (m1, m2)^2.
pub fn al_compose(ring: &PolyRing, w1: &ALElement, w2: &ALElement) -> Result<ALElement> {
    if w1.n != w2.n {
        return Err(Error::AmbientMismatch);
    }
    let g = w1.m.gcd(ring, &w2.m);
    let m = w1.m.mul(ring, &w2.m).div(ring, &g.mul(ring, &g))?;
    ALElement::new(ring, m, w1.n.clone())
}

/// All 2^k elements of W(n), k the number of primes of n; identity first.
pub fn al_group(ring: &PolyRing, n: &IdealA) -> Vec<ALElement> {
    let parts: Vec<IdealA> = n
        .factors(ring)
        .iter()
        .map(|(p, e)| (0..*e).fold(IdealA::unit(), |acc, _| acc.mul(ring, p)))
        .collect();
    let mut out = vec![ALElement::identity(n.clone())];
    for part in parts {
        let more: Vec<ALElement> = out
            .iter()
            .map(|w| ALElement {
                m: w.m.mul(ring, &part),
                n: n.clone(),
            })
            .collect();
        out.extend(more);
    }
    out
}

/// A cyclic isogeny of degree n representing a point of Y_0(n).
#[derive(Clone, Debug, PartialEq)]
pub struct ModuliPoint {
    pub iso: Isogeny,
    pub n: IdealA,
}

impl ModuliPoint {
    pub fn new(iso: Isogeny) -> Result<Self> {
        if !iso.is_cyclic()? {
            return Err(Error::NotCyclic);
        }
        let n = iso.degree()?.deg.clone();
        Ok(ModuliPoint { iso, n })
    }

    pub fn conjugate(&self, gal: &GaloisDatum, s: usize) -> Result<ModuliPoint> {
        Ok(ModuliPoint {
            iso: self.iso.conjugate(gal, s)?,
            n: self.n.clone(),
        })
    }
}

/// Theta(x) = (j(source), j(target)).
pub fn theta(x: &ModuliPoint) -> Result<(ExtElem, ExtElem)> {
    Ok((x.iso.source().j_invariant()?, x.iso.target().j_invariant()?))
}

/// w_m x: with mu = mu_n' mu_m, the new source is the target of mu_m and the
/// new kernel is Ker mu_n' + Ker dual(mu_m).
pub fn al_apply(ring: &PolyRing, w: &ALElement, x: &ModuliPoint) -> Result<ModuliPoint> {
    if w.n != x.n {
        return Err(Error::DegreeMismatch(format!(
            "W({}) does not act on a point of level {}",
            w.n.to_text(ring),
            x.n.to_text(ring)
        )));
    }
    let mu = &x.iso;
    let phi = mu.source();
    let r = phi.ring();
    let mu_m = Isogeny::along(phi, r.right_gcd(mu.mu(), &phi.phi_a(w.m.gen()))?)?;
    if mu_m.degree()?.deg != w.m {
        return Err(Error::DegreeMismatch(
            "m-part of the isogeny has the wrong degree".into(),
        ));
    }
    let rest = r.right_div_exact(mu.mu(), mu_m.mu())?;
    let dual_m = mu_m.dual()?;
    let kernel = r.left_lcm(&rest, dual_m.mu())?;
    let eta = Isogeny::along(mu_m.target(), kernel)?;
    let out = ModuliPoint::new(eta)?;
    if out.n != x.n {
        return Err(Error::DegreeMismatch(
            "translate has a different degree".into(),
        ));
    }
    Ok(out)
}

/// Decide whether x and y are the same point: equal Theta and a K-rational
/// isomorphism a of the sources with a(Ker mu_x) = Ker mu_y, i.e. mu_y a
/// right-divisible by mu_x.
pub fn equivalent(x: &ModuliPoint, y: &ModuliPoint) -> Result<bool> {
    if x.n != y.n || theta(x)? != theta(y)? {
        return Ok(false);
    }
    let r = x.iso.source().ring();
    let found = find_isogenies(
        x.iso.source(),
        y.iso.source(),
        0,
        &SearchMode::Automatic,
        None,
    )?;
    for a in projective_span(r, &found.basis) {
        if r.right_divides(x.iso.mu(), &r.mul(y.iso.mu(), &a)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One representative of each F_q-line in the span of `basis`.
fn projective_span(r: &SkewRing, basis: &[SkewPoly]) -> Vec<SkewPoly> {
    let fq = r.field().fq();
    let mut out: Vec<SkewPoly> = Vec::new();
    for (i, lead) in basis.iter().enumerate() {
        let mut partial = vec![lead.clone()];
        for b in &basis[i + 1..] {
            let mut next = Vec::with_capacity(partial.len() * fq.size() as usize);
            for p in &partial {
                for c in fq.elements() {
                    next.push(r.add(p, &r.scale_left(&r.field().from_fq(c), b)));
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out
}

#[derive(Clone, Debug)]
pub struct StarOrbit {
    pub base: ModuliPoint,
    /// w x for every w in W(n), in `al_group` order.
    pub points: Vec<(ALElement, ModuliPoint)>,
    /// The stabilizer D_x.
    pub d_x: Vec<ALElement>,
    /// Number of distinct points; below 2^k flags extra endomorphisms.
    pub distinct: usize,
    /// For each Galois element, some w_(m_s) with s(x) = w_(m_s) x.
    pub m_map: Option<Vec<ALElement>>,
}

/// All W(n)-translates of x, the stabilizer and, with a Galois datum, the
/// Atkin-Lehner element matching each conjugate.
pub fn star_orbit(
    ring: &PolyRing,
    x: &ModuliPoint,
    cert: &NonCmCertificate,
    gal: Option<&GaloisDatum>,
) -> Result<StarOrbit> {
    star_orbit_with_jobs(ring, x, cert, gal, 1)
}

/// `star_orbit` with the translates computed on up to `jobs` threads.
pub fn star_orbit_with_jobs(
    ring: &PolyRing,
    x: &ModuliPoint,
    cert: &NonCmCertificate,
    gal: Option<&GaloisDatum>,
    jobs: usize,
) -> Result<StarOrbit> {
    if ring.fq().characteristic() == 2 {
        return Err(Error::EvenCharacteristicUnsupported);
    }
    cert.covers(x.iso.source(), x.iso.tau_degree())?;
    let ws = al_group(ring, &x.n);
    let chunk = ws.len().div_ceil(jobs.max(1));
    let translated: Vec<Result<ModuliPoint>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ws
            .chunks(chunk)
            .map(|part| {
                let x = x.clone();
                let part = part.to_vec();
                let ring = ring.clone();
                scope.spawn(move || {
                    part.iter()
                        .map(|w| al_apply(&ring, w, &x))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("translate worker panicked"))
            .collect()
    });
    let mut points = Vec::with_capacity(ws.len());
    for (w, p) in ws.into_iter().zip(translated) {
        points.push((w, p?));
    }
    let mut d_x = Vec::new();
    for (w, p) in &points {
        if equivalent(p, x)? {
            d_x.push(w.clone());
        }
    }
    let mut distinct = 0;
    for (i, (_, p)) in points.iter().enumerate() {
        let mut fresh = true;
        for (_, o) in &points[..i] {
            if equivalent(p, o)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            distinct += 1;
        }
    }
    let m_map = match gal {
        None => None,
        Some(g) => {
            let mut m = Vec::with_capacity(g.order());
            for s in 0..g.order() {
                let sx = x.conjugate(g, s)?;
                let mut hit = None;
                for (w, p) in &points {
                    if equivalent(p, &sx)? {
                        hit = Some(w.clone());
                        break;
                    }
                }
                m.push(hit.ok_or(Error::NotGStable)?);
            }
            Some(m)
        }
    };
    Ok(StarOrbit {
        base: x.clone(),
        points,
        d_x,
        distinct,
        m_map,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentData {
    /// Coset representative of m_s in W(n)/D_x for each Galois generator.
    pub hom: Vec<(String, ALElement)>,
    /// Order of the image, 2^(rank of the image).
    pub degree_bound: usize,
}

/// Smallest element of w D_x under a fixed ordering.
fn coset_rep(ring: &PolyRing, w: &ALElement, d_x: &[ALElement]) -> Result<ALElement> {
    let mut best: Option<ALElement> = None;
    for d in d_x {
        let c = al_compose(ring, w, d)?;
        let key = |e: &ALElement| (e.m.degree(), e.m.gen().coeffs().to_vec());
        if best.as_ref().map_or(true, |b| key(&c) < key(b)) {
            best = Some(c);
        }
    }
    best.ok_or_else(|| Error::InternalInconsistency("stabilizer is empty".into()))
}

/// The induced map G -> W(n)/D_x, checked to be a homomorphism on every pair
/// of group elements, and the order of its image.
pub fn descent_data(ring: &PolyRing, o: &StarOrbit, gal: &GaloisDatum) -> Result<DescentData> {
    let m = o
        .m_map
        .as_ref()
        .ok_or_else(|| Error::BadOrbit("star orbit was built without a Galois datum".into()))?;
    let reps: Vec<ALElement> = m
        .iter()
        .map(|w| coset_rep(ring, w, &o.d_x))
        .collect::<Result<_>>()?;
    for s in 0..gal.order() {
        for t in 0..gal.order() {
            let want = coset_rep(ring, &al_compose(ring, &reps[s], &reps[t])?, &o.d_x)?;
            if reps[gal.compose(s, t)] != want {
                return Err(Error::NotAHomomorphism(format!(
                    "{} * {}",
                    gal.element_name(s),
                    gal.element_name(t)
                )));
            }
        }
    }
    let mut image: Vec<ALElement> = Vec::new();
    for r in &reps {
        if !image.contains(r) {
            image.push(r.clone());
        }
    }
    let hom = gal
        .gens()
        .iter()
        .enumerate()
        .map(|(i, g)| (g.name.clone(), reps[gal.gen_index(i)].clone()))
        .collect();
    Ok(DescentData {
        hom,
        degree_bound: image.len(),
    })
}

/// Every given isogeny s(phi) -> phi has degree dividing n.
pub fn is_central(ring: &PolyRing, conjugate_isogenies: &[Isogeny], n: &IdealA) -> Result<bool> {
    for iso in conjugate_isogenies {
        if !iso.degree()?.deg.divides(ring, n) {
            return Ok(false);
        }
    }
    Ok(true)
}
