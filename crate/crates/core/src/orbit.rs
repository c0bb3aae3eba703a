//! Orbit data from explicit conjugates and isogenies, and the module at the
//! center of the classification with its cyclic n-isogeny.

use std::collections::HashMap;

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::ext::ExtElem;
use crate::galois::GaloisDatum;
use crate::ideal::IdealA;
use crate::isogeny::Isogeny;
use crate::ring::Ring;
use crate::search::NonCmCertificate;
use crate::tree::{Classification, OrbitDatum, PermGen};

/// An orbit datum together with the modules and isogenies it came from.
#[derive(Clone, Debug)]
pub struct ConcreteOrbit {
    pub datum: OrbitDatum,
    pub modules: Vec<DrinfeldModule>,
    pub isogenies: HashMap<(usize, usize), Isogeny>,
}

/// Build D_p(x, y) = v_p(deg mu_xy) and the label permutations of the Galois
/// generators (matched by j-invariant). One isogeny per unordered pair suffices.
pub fn orbit_from_isogenies(
    modules: &[DrinfeldModule],
    isogenies: HashMap<(usize, usize), Isogeny>,
    certs: &[NonCmCertificate],
    gal: &GaloisDatum,
) -> Result<ConcreteOrbit> {
    let n = modules.len();
    if n == 0 || certs.len() != n {
        return Err(Error::BadOrbit("need one certificate per conjugate".into()));
    }
    let a = gal.field().poly_ring();
    let js: Vec<ExtElem> = modules
        .iter()
        .map(DrinfeldModule::j_invariant)
        .collect::<Result<_>>()?;
    for x in 0..n {
        for y in x + 1..n {
            if js[x] == js[y] {
                return Err(Error::BadOrbit(format!(
                    "labels {x} and {y} have the same j-invariant"
                )));
            }
        }
    }
    let mut gens = Vec::with_capacity(gal.gens().len());
    for (gi, g) in gal.gens().iter().enumerate() {
        let s = gal.gen_index(gi);
        let mut perm = Vec::with_capacity(n);
        for (x, phi) in modules.iter().enumerate() {
            let j = phi.conjugate(gal, s).j_invariant()?;
            let y = js.iter().position(|k| *k == j).ok_or_else(|| {
                Error::OrbitNotClosed(format!(
                    "the {}-conjugate of label {x} matches no label",
                    g.name
                ))
            })?;
            perm.push(y);
        }
        gens.push(PermGen {
            name: g.name.clone(),
            perm,
            order: g.order,
        });
    }
    let mut degrees: HashMap<(usize, usize), IdealA> = HashMap::new();
    for x in 0..n {
        for y in x + 1..n {
            let iso = isogenies
                .get(&(x, y))
                .or_else(|| isogenies.get(&(y, x)))
                .ok_or(Error::MissingIsogeny(x, y))?;
            let (s, t) = if isogenies.contains_key(&(x, y)) {
                (x, y)
            } else {
                (y, x)
            };
            if iso.source().phi_t() != modules[s].phi_t()
                || iso.target().phi_t() != modules[t].phi_t()
            {
                return Err(Error::BadOrbit(format!(
                    "isogeny for labels {s} -> {t} has the wrong endpoints"
                )));
            }
            if !iso.is_primitive(&certs[s])? {
                return Err(Error::NotPrimitive);
            }
            let deg = iso.degree()?.deg.clone();
            if let Some(back) = isogenies.get(&(t, s)) {
                if !back.is_primitive(&certs[t])? {
                    return Err(Error::NotPrimitive);
                }
                if back.degree()?.deg != deg {
                    return Err(Error::InternalInconsistency(format!(
                        "primitive degrees differ between {s} and {t}"
                    )));
                }
            }
            degrees.insert((x, y), deg);
        }
    }
    let mut primes: Vec<IdealA> = Vec::new();
    for d in degrees.values() {
        for p in d.primes(a) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort_by_key(|p| (p.degree(), p.gen().coeffs().to_vec()));
    let metrics = primes
        .into_iter()
        .map(|p| {
            let mut m = vec![vec![0u32; n]; n];
            for (&(x, y), d) in &degrees {
                let v = d.valuation(a, &p);
                m[x][y] = v;
                m[y][x] = v;
            }
            (p, m)
        })
        .collect();
    let labels = (0..n).map(|i| format!("phi{i}")).collect();
    let datum = OrbitDatum::new(labels, gens, metrics)?;
    Ok(ConcreteOrbit {
        datum,
        modules: modules.to_vec(),
        isogenies,
    })
}

/// The module psi at the glued descriptor and the cyclic n-isogeny psi -> psi'.
///
/// For every prime, the local vertex is reached from label 0 along the p-part of
/// an isogeny to a label beyond it; the kernels for different primes are combined
/// by a left lcm.
pub fn materialize_center(
    orbit: &ConcreteOrbit,
    res: &Classification,
) -> Result<(DrinfeldModule, Isogeny)> {
    let base = &orbit.modules[0];
    let r = base.ring();
    let a = base.field().poly_ring();
    let mut near = r.one();
    let mut far = r.one();
    for pd in &res.primes {
        let dist = pd.tree.distances_from(pd.tree.label_vertex[0]);
        let (dn, df) = (dist[pd.psi.vertex], dist[pd.psi_prime.vertex]);
        if df == 0 {
            continue;
        }
        // a label y whose path from label 0 runs through psi'
        let y = (1..orbit.modules.len())
            .find(|&y| {
                let vy = pd.tree.label_vertex[y];
                df + pd.psi_prime.label_distances[y] == dist[vy]
            })
            .ok_or_else(|| {
                Error::NotRealizable(format!(
                    "no label lies beyond the center for {}",
                    pd.prime.to_text(a)
                ))
            })?;
        let mu = orbit
            .isogenies
            .get(&(0, y))
            .ok_or_else(|| Error::NotRealizable(format!("no isogeny from label 0 to label {y}")))?;
        let step = |k: u32| -> Result<_> {
            if k == 0 {
                return Ok(r.one());
            }
            r.right_gcd(mu.mu(), &base.phi_a(&a.pow(pd.prime.gen(), k as u64)))
        };
        near = r.left_lcm(&near, &step(dn)?)?;
        far = r.left_lcm(&far, &step(df)?)?;
    }
    let to_psi = Isogeny::along(base, near)?;
    let to_psi_prime = Isogeny::along(base, far)?;
    let rho = r.right_div_exact(to_psi_prime.mu(), to_psi.mu())?;
    let iso = Isogeny::verify(to_psi.target(), to_psi_prime.target(), rho)?;
    if iso.degree()?.deg != res.n {
        return Err(Error::InternalInconsistency(
            "center isogeny does not have degree n".into(),
        ));
    }
    Ok((to_psi.target().clone(), iso))
}
