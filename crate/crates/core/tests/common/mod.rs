//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::Rng;

use dforge_core::tree::{Center, SubTree};

/// Random tree on n vertices: vertex i > 0 hangs off a uniform earlier vertex.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for i in 1..n {
        let j = rng.gen_range(0..i);
        adj[i].push(j);
        adj[j].push(i);
    }
    // shuffle vertex names so the root is not always 0
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut out = vec![Vec::new(); n];
    for (u, ns) in adj.iter().enumerate() {
        out[perm[u]] = ns.iter().map(|&v| perm[v]).collect();
    }
    out
}

pub fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v] == u32::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

/// Vertices on some path between two marked vertices: v is kept iff removing it
/// separates two marked vertices or v is itself marked.
pub fn spanned(adj: &[Vec<usize>], marked: &[usize]) -> BTreeSet<usize> {
    let mut keep = BTreeSet::new();
    for (i, &a) in marked.iter().enumerate() {
        for &b in &marked[i..] {
            // walk the unique path a -> b by parents from a BFS rooted at b
            let d = bfs(adj, b);
            let mut cur = a;
            keep.insert(cur);
            while cur != b {
                cur = *adj[cur].iter().find(|&&w| d[w] + 1 == d[cur]).unwrap();
                keep.insert(cur);
            }
        }
    }
    keep
}

/// Check that `t` is isomorphic to the subtree of `adj` spanned by `marked`,
/// with label i of `t` going to marked[i].
pub fn isomorphic_to_spanned(adj: &[Vec<usize>], marked: &[usize], t: &SubTree) -> bool {
    let keep = spanned(adj, marked);
    if keep.len() != t.len() {
        return false;
    }
    let orig: HashMap<usize, Vec<u32>> = {
        let cols: Vec<Vec<u32>> = marked.iter().map(|&m| bfs(adj, m)).collect();
        keep.iter()
            .map(|&v| (v, cols.iter().map(|c| c[v]).collect()))
            .collect()
    };
    let by_vec: HashMap<&Vec<u32>, usize> = orig.iter().map(|(v, d)| (d, *v)).collect();
    if by_vec.len() != keep.len() {
        return false;
    }
    let rec = t.label_distances();
    let mut map = vec![usize::MAX; t.len()];
    for (u, d) in rec.iter().enumerate() {
        match by_vec.get(d) {
            Some(&v) => map[u] = v,
            None => return false,
        }
    }
    for (i, &m) in marked.iter().enumerate() {
        if map[t.label_vertex[i]] != m {
            return false;
        }
    }
    let orig_edges: BTreeSet<(usize, usize)> = keep
        .iter()
        .flat_map(|&u| {
            adj[u]
                .iter()
                .filter(|v| keep.contains(v))
                .map(move |&v| (u.min(v), u.max(v)))
        })
        .collect();
    let rec_edges: BTreeSet<(usize, usize)> = t
        .edges()
        .into_iter()
        .map(|(u, v)| (map[u].min(map[v]), map[u].max(map[v])))
        .collect();
    orig_edges == rec_edges
}

/// Center by repeatedly stripping all leaves.
pub fn pruning_center(adj: &[Vec<usize>]) -> Center {
    let n = adj.len();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut alive = n;
    let mut removed = vec![false; n];
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while alive > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            alive -= 1;
        }
        for &v in &layer {
            for &w in &adj[v] {
                if !removed[w] {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    match rest[..] {
        [v] => Center::Vertex { v },
        [a, b] => Center::Edge {
            u: a.min(b),
            v: a.max(b),
        },
        _ => unreachable!("pruning leaves one or two vertices"),
    }
}
