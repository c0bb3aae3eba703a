//! Finite subtrees of the p-isogeny trees spanned by a Galois orbit, rebuilt
//! from the delta_p metric, their centers, and the resulting level n with the
//! Atkin-Lehner assignment s -> m_s.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::IdealA;
use crate::poly::PolyRing;

/// Cap on the number of diameter endpoint pairs compared in `tree_center`.
pub const DIAMETER_CAP: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGen {
    pub name: String,
    pub perm: Vec<usize>,
    pub order: u32,
}

/// The permutation group generated by the generators, with element 0 the identity.
#[derive(Clone, Debug)]
pub struct PermGroup {
    gens: Vec<PermGen>,
    elements: Vec<Vec<usize>>,
    words: Vec<Vec<usize>>,
}

fn compose_perm(s: &[usize], t: &[usize]) -> Vec<usize> {
    t.iter().map(|&i| s[i]).collect()
}

fn is_perm(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

impl PermGroup {
    pub fn new(n: usize, gens: Vec<PermGen>) -> Result<Self> {
        let id: Vec<usize> = (0..n).collect();
        for g in &gens {
            if g.perm.len() != n || !is_perm(&g.perm) {
                return Err(Error::BadOrbit(format!(
                    "generator {} is not a permutation of {n} labels",
                    g.name
                )));
            }
            if g.order == 0 {
                return Err(Error::BadOrbit(format!("generator {} has order 0", g.name)));
            }
            let mut p = id.clone();
            for _ in 0..g.order {
                p = compose_perm(&g.perm, &p);
            }
            if p != id {
                return Err(Error::BadOrbit(format!(
                    "generator {} does not have order dividing {}",
                    g.name, g.order
                )));
            }
        }
        let mut elements = vec![id.clone()];
        let mut words = vec![Vec::new()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let p = compose_perm(&elements[e], &g.perm);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elements.len());
                    let mut w = words[e].clone();
                    w.push(gi);
                    queue.push_back(elements.len());
                    elements.push(p);
                    words.push(w);
                }
            }
        }
        Ok(PermGroup {
            gens,
            elements,
            words,
        })
    }

    pub fn gens(&self) -> &[PermGen] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn find(&self, p: &[usize]) -> Option<usize> {
        self.elements.iter().position(|e| e == p)
    }

    /// Index of s*t (apply t first).
    pub fn compose(&self, s: usize, t: usize) -> usize {
        self.find(&compose_perm(&self.elements[s], &self.elements[t]))
            .expect("closed")
    }

    pub fn gen_index(&self, i: usize) -> usize {
        self.find(&self.gens[i].perm).expect("generator enumerated")
    }

    pub fn element_name(&self, e: usize) -> String {
        let w = &self.words[e];
        if w.is_empty() {
            return "id".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let name = &self.gens[w[i]].name;
            parts.push(if j - i == 1 {
                name.clone()
            } else {
                format!("{name}^{}", j - i)
            });
            i = j;
        }
        parts.join("*")
    }

    /// The same group acting on relabelled points: new label i is old label perm[i].
    pub fn relabel(&self, perm: &[usize]) -> Result<PermGroup> {
        let inv = invert(perm);
        let gens = self
            .gens
            .iter()
            .map(|g| PermGen {
                name: g.name.clone(),
                perm: (0..perm.len()).map(|i| inv[g.perm[perm[i]]]).collect(),
                order: g.order,
            })
            .collect();
        PermGroup::new(perm.len(), gens)
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Symmetric integer matrix of delta_p values over the labels.
pub type Metric = Vec<Vec<u32>>;

#[derive(Clone, Debug)]
pub struct OrbitDatum {
    pub labels: Vec<String>,
    pub group: PermGroup,
    pub metrics: Vec<(IdealA, Metric)>,
}

impl OrbitDatum {
    pub fn new(
        labels: Vec<String>,
        gens: Vec<PermGen>,
        metrics: Vec<(IdealA, Metric)>,
    ) -> Result<Self> {
        let group = PermGroup::new(labels.len(), gens)?;
        Ok(OrbitDatum {
            labels,
            group,
            metrics,
        })
    }

    /// Primes whose metric is not identically zero.
    pub fn support(&self) -> Vec<IdealA> {
        self.metrics
            .iter()
            .filter(|(_, m)| m.iter().flatten().any(|&x| x != 0))
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn metric(&self, p: &IdealA) -> Option<&Metric> {
        self.metrics.iter().find(|(q, _)| q == p).map(|(_, m)| m)
    }

    /// The same datum listed in a new label order: new label i is old label perm[i].
    pub fn relabel(&self, perm: &[usize]) -> Result<OrbitDatum> {
        if perm.len() != self.labels.len() || !is_perm(perm) {
            return Err(Error::BadOrbit("relabelling is not a permutation".into()));
        }
        let labels = perm.iter().map(|&i| self.labels[i].clone()).collect();
        let metrics = self
            .metrics
            .iter()
            .map(|(p, m)| {
                (
                    p.clone(),
                    perm.iter()
                        .map(|&i| perm.iter().map(|&j| m[i][j]).collect())
                        .collect(),
                )
            })
            .collect();
        Ok(OrbitDatum {
            labels,
            group: self.group.relabel(perm)?,
            metrics,
        })
    }
}

/// Check symmetry, G-invariance, parity and the four-point condition for every
/// metric; returns the support.
pub fn validate_orbit(d: &OrbitDatum) -> Result<Vec<IdealA>> {
    let n = d.labels.len();
    if n == 0 {
        return Err(Error::BadOrbit("no labels".into()));
    }
    for (i, (p, _)) in d.metrics.iter().enumerate() {
        if d.metrics[..i].iter().any(|(q, _)| q == p) {
            return Err(Error::BadOrbit("a prime is listed twice".into()));
        }
    }
    for (_, m) in &d.metrics {
        validate_metric(m, n)?;
        for (e, s) in d.group.elements().iter().enumerate() {
            for x in 0..n {
                for y in 0..n {
                    if m[s[x]][s[y]] != m[x][y] {
                        return Err(Error::NotGInvariant(format!(
                            "element {} moves the distance between labels {x} and {y}",
                            d.group.element_name(e)
                        )));
                    }
                }
            }
        }
    }
    Ok(d.support())
}

/// Shape, symmetry, parity of triangles and the four-point condition.
pub fn validate_metric(m: &Metric, n: usize) -> Result<()> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::BadOrbit(format!("metric is not {n} x {n}")));
    }
    for x in 0..n {
        if m[x][x] != 0 {
            return Err(Error::AsymmetricMatrix);
        }
        for y in 0..n {
            if m[x][y] != m[y][x] {
                return Err(Error::AsymmetricMatrix);
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                let (a, b, c) = (m[x][y], m[y][z], m[x][z]);
                if (a + b + c) % 2 != 0 {
                    return Err(Error::NotTreeMetric(format!(
                        "odd perimeter on labels {x}, {y}, {z}"
                    )));
                }
                if a > b + c || b > a + c || c > a + b {
                    return Err(Error::NotTreeMetric(format!(
                        "triangle inequality fails on labels {x}, {y}, {z}"
                    )));
                }
                for w in z + 1..n {
                    let mut s = [m[x][y] + m[z][w], m[x][z] + m[y][w], m[x][w] + m[y][z]];
                    s.sort_unstable();
                    if s[1] != s[2] {
                        return Err(Error::NotTreeMetric(format!(
                            "four-point condition fails on labels {x}, {y}, {z}, {w}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// A finite tree with unit edges; labels sit on vertices, every leaf carries a label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubTree {
    pub adj: Vec<Vec<usize>>,
    pub label_vertex: Vec<usize>,
    /// Permutation of the vertices for every group element, in group order.
    pub action: Vec<Vec<usize>>,
}

impl SubTree {
    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, ns) in self.adj.iter().enumerate() {
            for &v in ns {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn distances_from(&self, s: usize) -> Vec<u32> {
        bfs(&self.adj, s)
    }

    /// Distances from each vertex to every label, row per vertex.
    pub fn label_distances(&self) -> Vec<Vec<u32>> {
        let cols: Vec<Vec<u32>> = self
            .label_vertex
            .iter()
            .map(|&v| bfs(&self.adj, v))
            .collect();
        (0..self.len())
            .map(|u| cols.iter().map(|c| c[u]).collect())
            .collect()
    }

    pub fn is_labelled(&self, v: usize) -> bool {
        self.label_vertex.contains(&v)
    }
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; adj.len()];
    d[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if d[v] == u32::MAX {
                d[v] = d[u] + 1;
                queue.push_back(v);
            }
        }
    }
    d
}

/// Realize the metric as a unit-edge tree by inserting labels one at a time,
/// each as a pendant path hanging off the unique vertex consistent with its distances.
pub fn realize_metric(m: &Metric) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
    let n = m.len();
    validate_metric(m, n)?;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
    let mut label_vertex = vec![0usize];
    // dist[v][a]: distance from vertex v to the a-th inserted label
    let mut dist: Vec<Vec<u32>> = vec![vec![0]];
    for x in 1..n {
        let mut attach = None;
        for (v, row) in dist.iter().enumerate() {
            let a0 = m[x][0] as i64 - row[0] as i64;
            if a0 < 0 {
                continue;
            }
            if (1..x).all(|a| m[x][a] as i64 - row[a] as i64 == a0) {
                attach = Some((v, a0 as u32));
                break;
            }
        }
        let (v, h) = attach.ok_or_else(|| {
            Error::NotTreeMetric(format!("label {x} does not fit the tree so far"))
        })?;
        let mut prev = v;
        for step in 1..=h {
            let w = adj.len();
            adj.push(vec![prev]);
            adj[prev].push(w);
            let base = dist[v].clone();
            let mut row: Vec<u32> = base.iter().map(|d| d + step).collect();
            row.push(h - step);
            dist.push(row);
            prev = w;
        }
        let dv = bfs(&adj, v);
        for (u, row) in dist.iter_mut().enumerate() {
            if row.len() == x {
                row.push(dv[u] + h);
            }
        }
        label_vertex.push(prev);
    }
    for (a, &va) in label_vertex.iter().enumerate() {
        let d = bfs(&adj, va);
        for (b, &vb) in label_vertex.iter().enumerate() {
            if d[vb] != m[a][b] {
                return Err(Error::NotTreeMetric(format!(
                    "labels {a} and {b} are not realized at distance {}",
                    m[a][b]
                )));
            }
        }
    }
    Ok((adj, label_vertex))
}

/// Rebuild the subtree for prime p and the induced action of the group on its vertices.
pub fn reconstruct_subtree(d: &OrbitDatum, p: &IdealA) -> Result<SubTree> {
    let n = d.labels.len();
    let zero = vec![vec![0u32; n]; n];
    let m = d.metric(p).unwrap_or(&zero);
    let (adj, label_vertex) = realize_metric(m)?;
    let mut t = SubTree {
        adj,
        label_vertex,
        action: Vec::new(),
    };
    for (u, ns) in t.adj.iter().enumerate() {
        if ns.len() <= 1 && t.adj.len() > 1 && !t.is_labelled(u) {
            return Err(Error::InternalInconsistency(
                "unlabelled leaf in reconstructed tree".into(),
            ));
        }
    }
    let vecs = t.label_distances();
    let index: HashMap<&Vec<u32>, usize> = vecs.iter().enumerate().map(|(i, v)| (v, i)).collect();
    if index.len() != vecs.len() {
        return Err(Error::InternalInconsistency(
            "two vertices share a distance vector".into(),
        ));
    }
    let mut action = Vec::with_capacity(d.group.order());
    for s in d.group.elements() {
        // s(u) is the vertex at distance d(u, a) from s(a) for every label a
        let sinv = invert(s);
        let mut img = Vec::with_capacity(t.len());
        for v in &vecs {
            let moved: Vec<u32> = (0..n).map(|b| v[sinv[b]]).collect();
            let w = *index.get(&moved).ok_or_else(|| {
                Error::NotGInvariant("group element does not extend to the subtree".into())
            })?;
            img.push(w);
        }
        for (u, ns) in t.adj.iter().enumerate() {
            for &v in ns {
                if !t.adj[img[u]].contains(&img[v]) {
                    return Err(Error::InternalInconsistency(
                        "induced action breaks adjacency".into(),
                    ));
                }
            }
        }
        action.push(img);
    }
    t.action = action;
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Center {
    Vertex {
        v: usize,
    },
    /// u < v
    Edge {
        u: usize,
        v: usize,
    },
}

impl Center {
    fn edge(a: usize, b: usize) -> Center {
        Center::Edge {
            u: a.min(b),
            v: a.max(b),
        }
    }

    pub fn is_edge(&self) -> bool {
        matches!(self, Center::Edge { .. })
    }
}

fn path(adj: &[Vec<usize>], s: usize, t: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; adj.len()];
    parent[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            break;
        }
        for &v in &adj[u] {
            if parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut out = vec![t];
    let mut cur = t;
    while cur != s {
        cur = parent[cur];
        out.push(cur);
    }
    out.reverse();
    out
}

/// Midpoint of a longest path, compared over all diameter endpoint pairs (up to the cap).
pub fn tree_center(t: &SubTree) -> Result<Center> {
    let all: Vec<Vec<u32>> = (0..t.len()).map(|v| bfs(&t.adj, v)).collect();
    let diam = all.iter().flatten().copied().max().unwrap_or(0);
    let mut found: Option<Center> = None;
    let mut seen = 0;
    'outer: for (u, row) in all.iter().enumerate() {
        for (v, &d) in row.iter().enumerate().skip(u) {
            if d != diam {
                continue;
            }
            let pth = path(&t.adj, u, v);
            let mid = pth.len() / 2;
            let c = if diam % 2 == 0 {
                Center::Vertex { v: pth[mid] }
            } else {
                Center::edge(pth[mid - 1], pth[mid])
            };
            match found {
                None => found = Some(c),
                Some(f) if f != c => {
                    return Err(Error::InternalInconsistency(
                        "diameter paths have different midpoints".into(),
                    ));
                }
                _ => {}
            }
            seen += 1;
            if seen >= DIAMETER_CAP {
                break 'outer;
            }
        }
    }
    let c = found.unwrap_or(Center::Vertex { v: 0 });
    for img in &t.action {
        let moved = match c {
            Center::Vertex { v } => Center::Vertex { v: img[v] },
            Center::Edge { u, v } => Center::edge(img[u], img[v]),
        };
        if moved != c {
            return Err(Error::InternalInconsistency(
                "center is not fixed by the group".into(),
            ));
        }
    }
    Ok(c)
}

/// A vertex of the p-tree described by its distances to the orbit labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalVertex {
    pub vertex: usize,
    pub label_distances: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct PrimeData {
    pub prime: IdealA,
    pub tree: SubTree,
    pub center: Center,
    pub psi: LocalVertex,
    pub psi_prime: LocalVertex,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub n: IdealA,
    pub primes: Vec<PrimeData>,
    /// m_s for every group element, in group order.
    pub m: Vec<IdealA>,
}

impl Classification {
    /// m_s for the i-th generator.
    pub fn m_gen(&self, group: &PermGroup, i: usize) -> &IdealA {
        &self.m[group.gen_index(i)]
    }
}

/// n is the product of the primes whose center is an edge; psi and psi' take the
/// endpoints there (psi nearer the first label) and the center vertex elsewhere;
/// m_s collects the primes whose center edge s swaps.
pub fn classify(ring: &PolyRing, d: &OrbitDatum) -> Result<Classification> {
    let support = validate_orbit(d)?;
    let mut n = IdealA::unit();
    let mut primes = Vec::with_capacity(support.len());
    let mut m = vec![IdealA::unit(); d.group.order()];
    for p in support {
        if p.factors(ring).len() != 1 || p.factors(ring)[0].1 != 1 {
            return Err(Error::BadOrbit(format!("{} is not prime", p.to_text(ring))));
        }
        let tree = reconstruct_subtree(d, &p)?;
        let center = tree_center(&tree)?;
        let vecs = tree.label_distances();
        let local = |v: usize| LocalVertex {
            vertex: v,
            label_distances: vecs[v].clone(),
        };
        let (psi, psi_prime) = match center {
            Center::Vertex { v } => (local(v), local(v)),
            Center::Edge { u, v } => {
                n = n.mul(ring, &p);
                let base = tree.label_vertex[0];
                let du = bfs(&tree.adj, base);
                if du[u] <= du[v] {
                    (local(u), local(v))
                } else {
                    (local(v), local(u))
                }
            }
        };
        if let Center::Edge { .. } = center {
            for (e, img) in tree.action.iter().enumerate() {
                if img[psi.vertex] == psi_prime.vertex {
                    m[e] = m[e].mul(ring, &p);
                }
            }
        }
        primes.push(PrimeData {
            prime: p,
            tree,
            center,
            psi,
            psi_prime,
        });
    }
    if !n.is_squarefree(ring) {
        return Err(Error::InternalInconsistency(
            "level is not square-free".into(),
        ));
    }
    for s in 0..d.group.order() {
        for t in 0..d.group.order() {
            let g = m[s].gcd(ring, &m[t]);
            let want = m[s].mul(ring, &m[t]).div(ring, &g.mul(ring, &g))?;
            if m[d.group.compose(s, t)] != want {
                return Err(Error::InternalInconsistency(
                    "m_s does not compose as a character".into(),
                ));
            }
        }
    }
    Ok(Classification { n, primes, m })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// For every p | n, no vertex of the subtree may be fixed by the whole group.
pub fn minimality_check(ring: &PolyRing, res: &Classification) -> MinimalityReport {
    let mut violations = Vec::new();
    for pd in &res.primes {
        if !pd.center.is_edge() {
            continue;
        }
        for v in 0..pd.tree.len() {
            if pd.tree.action.iter().all(|img| img[v] == v) {
                violations.push(format!(
                    "{}",
                    Error::InternalInconsistency(format!(
                        "vertex {v} of the {}-tree is fixed by every group element",
                        pd.prime.to_text(ring)
                    ))
                ));
            }
        }
    }
    MinimalityReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// Synthetic G-invariant orbits over G = Z/m1 x Z/m2 acting regularly on its own
/// elements, with coset trees for a descending chain of subgroups.
pub mod synthetic {
    use rand::Rng;

    use super::*;

    /// Elements (a, b) of Z/m1 x Z/m2 listed as a*m2 + b.
    #[derive(Clone, Copy, Debug)]
    pub struct Abelian {
        pub m1: usize,
        pub m2: usize,
    }

    impl Abelian {
        pub fn order(&self) -> usize {
            self.m1 * self.m2
        }
        fn split(&self, i: usize) -> (usize, usize) {
            (i / self.m2, i % self.m2)
        }
        fn join(&self, a: usize, b: usize) -> usize {
            (a % self.m1) * self.m2 + b % self.m2
        }
        fn add(&self, i: usize, j: usize) -> usize {
            let ((a, b), (c, d)) = (self.split(i), self.split(j));
            self.join(a + c, b + d)
        }
        fn span(&self, gens: &[usize]) -> Vec<bool> {
            let mut inside = vec![false; self.order()];
            inside[0] = true;
            let mut stack = vec![0];
            while let Some(x) = stack.pop() {
                for &g in gens {
                    let y = self.add(x, g);
                    if !inside[y] {
                        inside[y] = true;
                        stack.push(y);
                    }
                }
            }
            inside
        }
        pub fn generators(&self) -> Vec<PermGen> {
            let n = self.order();
            let mut out = vec![PermGen {
                name: "s".into(),
                perm: (0..n).map(|i| self.add(i, self.join(1, 0))).collect(),
                order: self.m1 as u32,
            }];
            if self.m2 > 1 {
                out.push(PermGen {
                    name: "t".into(),
                    perm: (0..n).map(|i| self.add(i, self.join(0, 1))).collect(),
                    order: self.m2 as u32,
                });
            }
            out
        }
    }

    /// Description of one prime's tree: nested subgroups H_0 > H_1 > ... > H_r as
    /// membership masks, with path lengths between consecutive levels; with
    /// `edge_root` the level-0 subgroup has index 2 and its two cosets are joined by an edge.
    #[derive(Clone, Debug)]
    pub struct CosetTree {
        pub levels: Vec<Vec<bool>>,
        pub lengths: Vec<u32>,
        pub edge_root: bool,
    }

    impl CosetTree {
        fn same_coset(level: &[bool], g: &Abelian, x: usize, y: usize) -> bool {
            let (a, b) = g.split(x);
            let (c, d) = g.split(y);
            level[g.join(a + g.m1 - c, b + g.m2 - d)]
        }

        pub fn metric(&self, g: &Abelian) -> Metric {
            let n = g.order();
            let total: u32 = self.lengths.iter().sum();
            let mut m = vec![vec![0; n]; n];
            for x in 0..n {
                for y in 0..n {
                    if x == y {
                        continue;
                    }
                    // deepest level where x and y share a coset
                    let mut depth = None;
                    for (i, lv) in self.levels.iter().enumerate() {
                        if Self::same_coset(lv, g, x, y) {
                            depth = Some(i);
                        }
                    }
                    m[x][y] = match depth {
                        Some(i) => 2 * self.lengths[i..].iter().sum::<u32>(),
                        None => 2 * total + 1,
                    };
                }
            }
            m
        }
    }

    /// A random chain of subgroups starting at G (vertex root) or at the kernel of
    /// a random character to Z/2 (edge root).
    pub fn random_coset_tree<R: Rng + ?Sized>(
        rng: &mut R,
        g: &Abelian,
        edge_root: bool,
        max_len: u32,
    ) -> Option<CosetTree> {
        let n = g.order();
        let top: Vec<bool> = if edge_root {
            let a = if g.m1 % 2 == 0 {
                rng.gen_range(0..2)
            } else {
                0
            };
            let b = if g.m2 % 2 == 0 {
                rng.gen_range(0..2)
            } else {
                0
            };
            if a == 0 && b == 0 {
                return None;
            }
            (0..n)
                .map(|i| {
                    let (x, y) = g.split(i);
                    (a * x + b * y) % 2 == 0
                })
                .collect()
        } else {
            vec![true; n]
        };
        let mut levels = vec![top];
        let mut lengths = Vec::new();
        loop {
            let cur = levels.last().unwrap();
            let members: Vec<usize> = (0..n).filter(|&i| cur[i]).collect();
            if members.len() == 1 || (levels.len() > 1 && rng.gen_bool(0.3)) {
                break;
            }
            let k = rng.gen_range(0..=2usize);
            let gens: Vec<usize> = (0..k)
                .map(|_| members[rng.gen_range(0..members.len())])
                .collect();
            let next = g.span(&gens);
            if next.iter().filter(|&&b| b).count() == members.len() {
                continue;
            }
            lengths.push(rng.gen_range(1..=max_len));
            levels.push(next);
        }
        if levels.len() == 1 && !edge_root {
            return None;
        }
        // the label level has no further path below it
        lengths.push(0);
        Some(CosetTree {
            levels,
            lengths,
            edge_root,
        })
    }

    /// An orbit datum for G acting on itself with one coset tree per prime; also
    /// returns which primes were built with an edge root.
    pub fn random_orbit<R: Rng + ?Sized>(
        rng: &mut R,
        g: &Abelian,
        primes: &[IdealA],
        max_len: u32,
    ) -> (OrbitDatum, Vec<bool>) {
        let mut metrics = Vec::new();
        let mut edges = Vec::new();
        for p in primes {
            let tree = loop {
                let want_edge = rng.gen_bool(0.5);
                if let Some(t) = random_coset_tree(rng, g, want_edge, max_len) {
                    break t;
                }
                if let Some(t) = random_coset_tree(rng, g, false, max_len) {
                    break t;
                }
            };
            edges.push(tree.edge_root);
            metrics.push((p.clone(), tree.metric(g)));
        }
        let labels = (0..g.order()).map(|i| format!("x{i}")).collect();
        (
            OrbitDatum::new(labels, g.generators(), metrics).expect("regular action"),
            edges,
        )
    }
}
