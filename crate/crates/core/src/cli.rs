//! JSON job documents and the commands of the `dforge` binary.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::ext::ExtField;
use crate::fq::FqField;
use crate::galois::{GaloisDatum, GaloisGen};
use crate::ideal::IdealA;
use crate::isogeny::Isogeny;
use crate::moduli::{descent_data, star_orbit_with_jobs, theta, ModuliPoint, StarOrbit};
use crate::orbit::{materialize_center, orbit_from_isogenies};
use crate::poly::PolyRing;
use crate::ring::Ring;
use crate::search::{find_isogenies, NonCmCertificate, SearchMode};
use crate::skew::SkewRing;
use crate::text::{parse_ext, parse_ideal, parse_poly, parse_skew};
use crate::tree::{classify, minimality_check, Classification, OrbitDatum, PermGen};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u64,
    /// Monic modulus of F_q over F_p, constant term first; absent for q = p.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fq_modulus: Option<Vec<u64>>,
    /// Coefficients f_0, ..., f_e of the monic f in A[x]; absent for K = F_q(T).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub galois: Vec<GenSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub name: String,
    /// Image of x.
    pub image: String,
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsogenySpec {
    pub source: String,
    pub target: String,
    pub mu: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub permutation: Vec<usize>,
    pub order: u32,
}

/// Either abstract orbit data or named conjugates with isogenies between them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorSpec>,
    /// prime text -> distance matrix
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, Vec<Vec<u32>>>,
    /// Module names, one per label.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<String>,
    /// "i,j" -> isogeny name, from label i to label j.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub isogenies: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobDocument {
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub isogenies: BTreeMap<String, IsogenySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Value>,
}

/// Options shared by all commands.
#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub certify_bound: Option<usize>,
    pub jobs: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            certify_bound: None,
            jobs: 1,
        }
    }
}

/// A job document with every object parsed over its field.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub a: PolyRing,
    pub ring: SkewRing,
    pub galois: GaloisDatum,
    pub modules: BTreeMap<String, DrinfeldModule>,
    pub isogenies: BTreeMap<String, Isogeny>,
    pub doc: JobDocument,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Parse {
        pos: 0,
        msg: msg.into(),
    }
}

/// Prefix the message of a parse error with the place it came from.
fn within<T>(place: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { pos, msg } => Error::Parse {
            pos,
            msg: format!("{place}: {msg}"),
        },
        other => other,
    })
}

pub fn parse_document(text: &str) -> Result<JobDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        pos: e.column(),
        msg: format!("line {}: {e}", e.line()),
    })
}

impl Workspace {
    pub fn load(doc: JobDocument, seed: u64) -> Result<Workspace> {
        let fs = &doc.field;
        let fq = match &fs.fq_modulus {
            None => FqField::prime(fs.p)?,
            Some(m) => FqField::new(fs.p, m)?,
        };
        let a = PolyRing::with_seed(fq, seed);
        let k = match &fs.modulus {
            None => ExtField::rational(a.clone()),
            Some(cs) => {
                let f = cs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| within(&format!("field.modulus[{i}]"), parse_poly(&a, c)))
                    .collect::<Result<Vec<_>>>()?;
                ExtField::new(a.clone(), f)?
            }
        };
        let mut gens = Vec::with_capacity(fs.galois.len());
        for g in &fs.galois {
            let image = within(&format!("field.galois.{}", g.name), parse_ext(&k, &g.image))?;
            gens.push(GaloisGen {
                name: g.name.clone(),
                image,
                order: g.order,
            });
        }
        let galois = if gens.is_empty() {
            GaloisDatum::trivial(k.clone())
        } else {
            GaloisDatum::new(k.clone(), gens)?
        };
        let ring = SkewRing::new(k);
        let mut modules = BTreeMap::new();
        for (name, text) in &doc.modules {
            let phi_t = within(&format!("modules.{name}"), parse_skew(&ring, text))?;
            modules.insert(name.clone(), DrinfeldModule::new(&ring, phi_t)?);
        }
        let mut isogenies = BTreeMap::new();
        for (name, spec) in &doc.isogenies {
            let get = |m: &str| {
                modules
                    .get(m)
                    .ok_or_else(|| schema(format!("isogenies.{name}: unknown module '{m}'")))
            };
            let (src, tgt) = (get(&spec.source)?, get(&spec.target)?);
            let mu = within(&format!("isogenies.{name}.mu"), parse_skew(&ring, &spec.mu))?;
            isogenies.insert(name.clone(), Isogeny::verify(src, tgt, mu)?);
        }
        Ok(Workspace {
            a,
            ring,
            galois,
            modules,
            isogenies,
            doc,
        })
    }

    /// The document with every object printed in canonical form.
    pub fn to_document(&self) -> JobDocument {
        let k = self.ring.field();
        let mut field = self.doc.field.clone();
        if field.modulus.is_some() {
            field.modulus = Some(k.modulus().iter().map(|c| self.a.fmt_poly(c)).collect());
        }
        for (spec, g) in field.galois.iter_mut().zip(self.galois.gens()) {
            spec.image = k.fmt_elem(&g.image);
        }
        let modules = self
            .modules
            .iter()
            .map(|(n, m)| (n.clone(), self.ring.fmt_skew(m.phi_t())))
            .collect();
        let isogenies = self
            .doc
            .isogenies
            .iter()
            .map(|(n, spec)| {
                let mu = self.ring.fmt_skew(self.isogenies[n].mu());
                (n.clone(), IsogenySpec { mu, ..spec.clone() })
            })
            .collect();
        let orbit = self.doc.orbit.as_ref().map(|o| {
            let metrics = o
                .metrics
                .iter()
                .map(|(p, m)| {
                    let text = parse_ideal(&self.a, p)
                        .map(|i| self.a.fmt_poly(i.gen()))
                        .unwrap_or_else(|_| p.clone());
                    (text, m.clone())
                })
                .collect();
            OrbitSpec {
                metrics,
                ..o.clone()
            }
        });
        JobDocument {
            field,
            modules,
            isogenies,
            orbit,
            params: self.doc.params.clone(),
        }
    }

    pub fn module(&self, name: &str) -> Result<&DrinfeldModule> {
        self.modules
            .get(name)
            .ok_or_else(|| schema(format!("unknown module '{name}'")))
    }

    pub fn isogeny(&self, name: &str) -> Result<&Isogeny> {
        self.isogenies
            .get(name)
            .ok_or_else(|| schema(format!("unknown isogeny '{name}'")))
    }

    fn param_str(&self, key: &str) -> Result<&str> {
        self.doc
            .params
            .get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| schema(format!("params.{key} must be a string")))
    }

    fn param_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.doc.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| schema(format!("params.{key} must be a nonnegative integer"))),
        }
    }

    fn fmt_ideal(&self, i: &IdealA) -> String {
        i.to_text(&self.a)
    }

    fn certificate(
        &self,
        phi: &DrinfeldModule,
        opts: &Options,
        need: usize,
    ) -> Result<NonCmCertificate> {
        NonCmCertificate::certify(phi, opts.certify_bound.unwrap_or(need).max(need))
    }

    fn isogeny_json(&self, iso: &Isogeny, opts: &Options) -> Result<Value> {
        let d = iso.degree()?;
        let bound = match opts.certify_bound {
            Some(b) => Some(NonCmCertificate::certify(iso.source(), b)?.bound),
            None => None,
        };
        Ok(json!({
            "source": self.ring.fmt_skew(iso.source().phi_t()),
            "target": self.ring.fmt_skew(iso.target().phi_t()),
            "mu": self.ring.fmt_skew(iso.mu()),
            "degree": self.fmt_ideal(&d.deg),
            "n1": self.fmt_ideal(&d.n1),
            "n2": self.fmt_ideal(&d.n2),
            "certificate_bound": bound,
        }))
    }
}

pub const COMMANDS: [&str; 9] = [
    "verify",
    "degree",
    "dual",
    "j",
    "find",
    "project",
    "classify",
    "star-orbit",
    "example35",
];

/// Run a command on a loaded workspace.
pub fn run_command(cmd: &str, ws: &Workspace, opts: &Options) -> Result<Value> {
    match cmd {
        "verify" => cmd_verify(ws, opts),
        "degree" => cmd_degree(ws),
        "dual" => cmd_dual(ws, opts),
        "j" => cmd_j(ws),
        "find" => cmd_find(ws),
        "project" => cmd_project(ws, opts),
        "classify" => cmd_classify(ws, opts),
        "star-orbit" => cmd_star_orbit(ws, opts),
        other => Err(schema(format!("unknown command '{other}'"))),
    }
}

pub fn cmd_verify(ws: &Workspace, opts: &Options) -> Result<Value> {
    let iso = ws.isogeny(ws.param_str("isogeny")?)?;
    ws.isogeny_json(iso, opts)
}

pub fn cmd_degree(ws: &Workspace) -> Result<Value> {
    let iso = ws.isogeny(ws.param_str("isogeny")?)?;
    let d = iso.degree()?;
    Ok(json!({
        "degree": ws.fmt_ideal(&d.deg),
        "n1": ws.fmt_ideal(&d.n1),
        "n2": ws.fmt_ideal(&d.n2),
        "cyclic": iso.is_cyclic()?,
    }))
}

pub fn cmd_dual(ws: &Workspace, opts: &Options) -> Result<Value> {
    let iso = ws.isogeny(ws.param_str("isogeny")?)?;
    ws.isogeny_json(&iso.dual()?, opts)
}

pub fn cmd_j(ws: &Workspace) -> Result<Value> {
    let phi = ws.module(ws.param_str("module")?)?;
    let k = ws.ring.field();
    let j = phi.j_invariant()?;
    let coords: Vec<String> = k.coords(&j).iter().map(|c| k.rat().fmt_elem(c)).collect();
    Ok(
        json!({ "j": k.fmt_elem(&j), "coordinates": coords, "rational": coords[1..].iter().all(|c| c == "0") }),
    )
}

pub fn cmd_find(ws: &Workspace) -> Result<Value> {
    let phi = ws.module(ws.param_str("source")?)?;
    let psi = ws.module(ws.param_str("target")?)?;
    let bound = ws.param_usize("bound", 2)?;
    let mode = match ws.doc.params.get("candidates") {
        None => SearchMode::Automatic,
        Some(v) => {
            let list = v
                .as_array()
                .ok_or_else(|| schema("params.candidates must be a list of strings"))?;
            let mut cands = Vec::with_capacity(list.len());
            for (i, c) in list.iter().enumerate() {
                let s = c
                    .as_str()
                    .ok_or_else(|| schema("params.candidates must be a list of strings"))?;
                cands.push(within(
                    &format!("params.candidates[{i}]"),
                    parse_ext(ws.ring.field(), s),
                )?);
            }
            SearchMode::Candidates(cands)
        }
    };
    let found = find_isogenies(phi, psi, bound, &mode, None)?;
    let basis: Vec<String> = found.basis.iter().map(|u| ws.ring.fmt_skew(u)).collect();
    Ok(json!({ "basis": basis, "completeness": found.completeness, "bound": found.bound }))
}

pub fn cmd_project(ws: &Workspace, opts: &Options) -> Result<Value> {
    let iso = ws.isogeny(ws.param_str("isogeny")?)?;
    let p = within("params.prime", parse_ideal(&ws.a, ws.param_str("prime")?))?;
    let pr = iso.project_p(&p)?;
    let mut out = json!({
        "target": ws.ring.fmt_skew(pr.target.phi_t()),
        "p_part": ws.isogeny_json(&pr.p_part, opts)?,
        "coprime_part": ws.isogeny_json(&pr.coprime_part, opts)?,
    });
    if opts.certify_bound.is_some() {
        let cert = ws.certificate(iso.source(), opts, iso.tau_degree())?;
        out["delta_p"] = json!(iso.delta_p(&p, &cert)?);
    }
    Ok(out)
}

fn classification_json(ws: &Workspace, datum: &OrbitDatum, res: &Classification) -> Value {
    let centers: BTreeMap<String, Value> = res
        .primes
        .iter()
        .map(|pd| {
            (
                ws.fmt_ideal(&pd.prime),
                serde_json::to_value(pd.center).expect("center serializes"),
            )
        })
        .collect();
    let m: BTreeMap<String, String> = datum
        .group
        .gens()
        .iter()
        .enumerate()
        .map(|(i, g)| (g.name.clone(), ws.fmt_ideal(res.m_gen(&datum.group, i))))
        .collect();
    let report = minimality_check(&ws.a, res);
    json!({ "n": ws.fmt_ideal(&res.n), "centers": centers, "m": m, "minimal": report.ok, "violations": report.violations })
}

pub fn cmd_classify(ws: &Workspace, opts: &Options) -> Result<Value> {
    let o = ws
        .doc
        .orbit
        .as_ref()
        .ok_or_else(|| schema("classify needs an 'orbit' object"))?;
    if o.modules.is_empty() {
        let gens = o
            .generators
            .iter()
            .map(|g| PermGen {
                name: g.name.clone(),
                perm: g.permutation.clone(),
                order: g.order,
            })
            .collect();
        let metrics = o
            .metrics
            .iter()
            .map(|(p, m)| {
                Ok((
                    within(&format!("orbit.metrics.{p}"), parse_ideal(&ws.a, p))?,
                    m.clone(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let datum = OrbitDatum::new(o.labels.clone(), gens, metrics)?;
        let res = classify(&ws.a, &datum)?;
        return Ok(classification_json(ws, &datum, &res));
    }
    let modules = o
        .modules
        .iter()
        .map(|m| ws.module(m).cloned())
        .collect::<Result<Vec<_>>>()?;
    let mut isogenies = HashMap::new();
    for (key, name) in &o.isogenies {
        let pair = key
            .split_once(',')
            .and_then(|(x, y)| {
                Some((
                    x.trim().parse::<usize>().ok()?,
                    y.trim().parse::<usize>().ok()?,
                ))
            })
            .ok_or_else(|| {
                schema(format!(
                    "orbit.isogenies key '{key}' must look like \"i,j\""
                ))
            })?;
        isogenies.insert(pair, ws.isogeny(name)?.clone());
    }
    let need = isogenies
        .values()
        .map(Isogeny::tau_degree)
        .max()
        .unwrap_or(0);
    let certs = modules
        .iter()
        .map(|m| ws.certificate(m, opts, need))
        .collect::<Result<Vec<_>>>()?;
    let orbit = orbit_from_isogenies(&modules, isogenies, &certs, &ws.galois)?;
    let res = classify(&ws.a, &orbit.datum)?;
    let mut out = classification_json(ws, &orbit.datum, &res);
    let (psi, iso) = materialize_center(&orbit, &res)?;
    out["center_module"] = json!(ws.ring.fmt_skew(psi.phi_t()));
    out["center_isogeny"] = ws.isogeny_json(&iso, opts)?;
    Ok(out)
}

fn star_orbit_json(ws: &Workspace, o: &StarOrbit, opts: &Options) -> Result<Value> {
    let k = ws.ring.field();
    let mut points = Vec::with_capacity(o.points.len());
    for (w, p) in &o.points {
        let (j1, j2) = theta(p)?;
        points.push(json!({
            "w": ws.fmt_ideal(&w.m),
            "n": ws.fmt_ideal(&p.n),
            "iso": ws.isogeny_json(&p.iso, opts)?,
            "theta": [k.fmt_elem(&j1), k.fmt_elem(&j2)],
        }));
    }
    let d_x: Vec<String> = o.d_x.iter().map(|w| ws.fmt_ideal(&w.m)).collect();
    let m_map = o.m_map.as_ref().map(|m| {
        m.iter()
            .enumerate()
            .map(|(s, w)| (ws.galois.element_name(s), ws.fmt_ideal(&w.m)))
            .collect::<BTreeMap<_, _>>()
    });
    Ok(json!({ "points": points, "D_x": d_x, "m_map": m_map, "distinct": o.distinct }))
}

pub fn cmd_star_orbit(ws: &Workspace, opts: &Options) -> Result<Value> {
    let iso = ws.isogeny(ws.param_str("isogeny")?)?;
    let x = ModuliPoint::new(iso.clone())?;
    let cert = ws.certificate(iso.source(), opts, iso.tau_degree())?;
    let o = star_orbit_with_jobs(&ws.a, &x, &cert, Some(&ws.galois), opts.jobs)?;
    let mut out = star_orbit_json(ws, &o, opts)?;
    let dd = descent_data(&ws.a, &o, &ws.galois)?;
    let hom: BTreeMap<String, String> = dd
        .hom
        .iter()
        .map(|(g, w)| (g.clone(), ws.fmt_ideal(&w.m)))
        .collect();
    out["descent"] = json!({ "hom": hom, "degree_bound": dd.degree_bound });
    Ok(out)
}

/// Exit status for an error: 1 for malformed input, 2 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 1,
        _ => 2,
    }
}

/// The quadratic example end to end: phi_T = mu eta over F_q(T)(sqrt(T + 1)).
pub fn cmd_example35(q: u64, opts: &Options) -> Result<Value> {
    let fq = prime_power_field(q)?;
    if fq.characteristic() == 2 {
        return Err(Error::EvenCharacteristicUnsupported);
    }
    let ex = crate::example::quadratic_example(fq)?;
    let (ring, gal) = (&ex.ring, &ex.galois);
    let k = ring.field();
    let a = k.poly_ring();
    let s = gal.gen_index(0);
    let mut checks: Vec<(String, bool)> = Vec::new();

    let conj_t = ring.conjugate(gal, s, ex.phi.phi_t());
    checks.push((
        "mu * s(phi_T) = phi_T * mu".into(),
        ring.mul(ex.mu.mu(), &conj_t) == ring.mul(ex.phi.phi_t(), ex.mu.mu()),
    ));
    checks.push((
        "s(phi_T) = eta * mu".into(),
        conj_t == ring.mul(ex.eta.mu(), ex.mu.mu()),
    ));

    let alpha = k.x();
    let g = k.sub(&k.add(&k.from_int(2), &alpha), &k.frobenius(&alpha));
    let want = k.neg(&k.pow(&g, q + 1));
    let j = ex.phi.j_invariant()?;
    checks.push(("j = -(2 + alpha - alpha^q)^(q+1)".into(), j == want));
    checks.push((
        "j has a nonzero alpha-coordinate".into(),
        !k.coords(&j)[1].is_zero(),
    ));

    let t = IdealA::new(a, &a.from_ints(&[0, 1]))?;
    checks.push(("deg mu = (T)".into(), ex.mu.degree()?.deg == t));
    checks.push(("deg eta = (T)".into(), ex.eta.degree()?.deg == t));
    let dual = ex.mu.dual()?;
    checks.push((
        "dual(mu) = eta up to F_q^x".into(),
        crate::isogeny::scalar_ratio(ring, dual.mu(), ex.eta.mu()).is_some(),
    ));

    let bound = opts.certify_bound.unwrap_or(1).max(1);
    let certs = vec![
        NonCmCertificate::certify(&ex.phi, bound)?,
        NonCmCertificate::certify(&ex.conj, bound)?,
    ];
    let isos = HashMap::from([((0, 1), ex.eta.clone()), ((1, 0), ex.mu.clone())]);
    let orbit = orbit_from_isogenies(&[ex.phi.clone(), ex.conj.clone()], isos, &certs, gal)?;
    let res = classify(a, &orbit.datum)?;
    let m_s = res.m_gen(&orbit.datum.group, 0).clone();
    checks.push(("classify: n = (T)".into(), res.n == t));
    checks.push(("classify: m_s = (T)".into(), m_s == t));

    let all = checks.iter().all(|(_, ok)| *ok);
    let list: Vec<Value> = checks
        .iter()
        .map(|(name, ok)| json!({ "check": name, "pass": ok }))
        .collect();
    Ok(json!({
        "q": q,
        "phi_T": ring.fmt_skew(ex.phi.phi_t()),
        "conjugate_T": ring.fmt_skew(ex.conj.phi_t()),
        "mu": ring.fmt_skew(ex.mu.mu()),
        "eta": ring.fmt_skew(ex.eta.mu()),
        "j": k.fmt_elem(&j),
        "n": t.to_text(a),
        "m_s": m_s.to_text(a),
        "checks": list,
        "all_pass": all,
    }))
}

/// F_q for a prime power q, using the first monic irreducible modulus found.
pub fn prime_power_field(q: u64) -> Result<FqField> {
    let p = (2..=q)
        .find(|d| q % d == 0)
        .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
    let mut e = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    if r != 1 {
        return Err(Error::InvalidField(format!("{q} is not a prime power")));
    }
    if e == 1 {
        return FqField::prime(p);
    }
    // first monic modulus of degree e (in base-p counting) that yields a field
    for code in 0..p.pow(e) {
        let mut m: Vec<u64> = (0..e).map(|i| code / p.pow(i) % p).collect();
        m.push(1);
        if let Ok(f) = FqField::new(p, &m) {
            return Ok(f);
        }
    }
    Err(Error::InvalidField(format!(
        "no modulus of degree {e} over F_{p}"
    )))
}
