mod common;

use dforge_core::error::Error;
use dforge_core::fq::FqField;
use dforge_core::ideal::IdealA;
use dforge_core::poly::PolyRing;
use dforge_core::tree::synthetic::{random_orbit, Abelian};
use dforge_core::tree::{
    classify, minimality_check, realize_metric, reconstruct_subtree, tree_center, validate_orbit,
    Center, OrbitDatum, PermGen, SubTree,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ring() -> PolyRing {
    PolyRing::new(FqField::prime(3).unwrap())
}

fn prime(a: &PolyRing, ints: &[i64]) -> IdealA {
    IdealA::new(a, &a.from_ints(ints)).unwrap()
}

fn swap2() -> Vec<PermGen> {
    vec![PermGen {
        name: "s".into(),
        perm: vec![1, 0],
        order: 2,
    }]
}

#[test]
fn single_label_is_trivial() {
    let a = ring();
    let d = OrbitDatum::new(
        vec!["x".into()],
        vec![PermGen {
            name: "s".into(),
            perm: vec![0],
            order: 2,
        }],
        vec![],
    )
    .unwrap();
    assert!(validate_orbit(&d).unwrap().is_empty());
    let c = classify(&a, &d).unwrap();
    assert!(c.n.is_unit());
    assert!(c.m.iter().all(IdealA::is_unit));
    assert!(minimality_check(&a, &c).ok);
}

#[test]
fn swapped_pair_gives_level_t() {
    let a = ring();
    let t = prime(&a, &[0, 1]);
    let d = OrbitDatum::new(
        vec!["phi".into(), "sphi".into()],
        swap2(),
        vec![(t.clone(), vec![vec![0, 1], vec![1, 0]])],
    )
    .unwrap();
    assert_eq!(validate_orbit(&d).unwrap(), vec![t.clone()]);
    let tree = reconstruct_subtree(&d, &t).unwrap();
    assert_eq!(tree.len(), 2);
    assert!(tree_center(&tree).unwrap().is_edge());
    let c = classify(&a, &d).unwrap();
    assert_eq!(c.n, t);
    assert_eq!(c.m_gen(&d.group, 0), &t);
    assert!(c.m[0].is_unit());
    assert!(minimality_check(&a, &c).ok);
}

#[test]
fn star_and_paths() {
    let (adj, lv) = realize_metric(&vec![vec![0, 2, 2], vec![2, 0, 2], vec![2, 2, 0]]).unwrap();
    assert_eq!(adj.len(), 4);
    let centre = (0..4).find(|v| !lv.contains(v)).unwrap();
    assert_eq!(adj[centre].len(), 3);

    let path3 = SubTree {
        adj: vec![vec![1], vec![0, 2], vec![1]],
        label_vertex: vec![0, 2],
        action: vec![],
    };
    assert_eq!(tree_center(&path3).unwrap(), Center::Vertex { v: 1 });
    let path4 = SubTree {
        adj: vec![vec![1], vec![0, 2], vec![1, 3], vec![2]],
        label_vertex: vec![0, 3],
        action: vec![],
    };
    assert_eq!(tree_center(&path4).unwrap(), Center::Edge { u: 1, v: 2 });
}

#[test]
fn metric_errors() {
    let a = ring();
    let t = prime(&a, &[0, 1]);
    let square = vec![
        vec![0, 1, 2, 1],
        vec![1, 0, 1, 2],
        vec![2, 1, 0, 1],
        vec![1, 2, 1, 0],
    ];
    let id4 = vec![PermGen {
        name: "s".into(),
        perm: vec![0, 1, 2, 3],
        order: 1,
    }];
    let d = OrbitDatum::new(
        (0..4).map(|i| i.to_string()).collect(),
        id4.clone(),
        vec![(t.clone(), square)],
    )
    .unwrap();
    assert!(matches!(validate_orbit(&d), Err(Error::NotTreeMetric(_))));

    let asym = OrbitDatum::new(
        vec!["a".into(), "b".into()],
        swap2(),
        vec![(t.clone(), vec![vec![0, 1], vec![2, 0]])],
    )
    .unwrap();
    assert!(matches!(
        validate_orbit(&asym),
        Err(Error::AsymmetricMatrix)
    ));

    let m3 = vec![vec![0, 1, 1], vec![1, 0, 2], vec![1, 2, 0]];
    let cyc = vec![PermGen {
        name: "s".into(),
        perm: vec![1, 2, 0],
        order: 3,
    }];
    let bad =
        OrbitDatum::new(vec!["a".into(), "b".into(), "c".into()], cyc, vec![(t, m3)]).unwrap();
    assert!(matches!(validate_orbit(&bad), Err(Error::NotGInvariant(_))));
}

#[test]
fn reconstruction_matches_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..400 {
        let n = rng.gen_range(1..=40);
        let adj = common::random_tree(&mut rng, n);
        let k = rng.gen_range(1..=n.min(12));
        let marked: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        let cols: Vec<Vec<u32>> = marked.iter().map(|&m| common::bfs(&adj, m)).collect();
        let metric: Vec<Vec<u32>> = marked
            .iter()
            .map(|&x| cols.iter().map(|c| c[x]).collect())
            .collect();
        let (radj, lv) = realize_metric(&metric).unwrap();
        let t = SubTree {
            adj: radj,
            label_vertex: lv,
            action: vec![],
        };
        assert!(common::isomorphic_to_spanned(&adj, &marked, &t));
        let full = SubTree {
            adj: adj.clone(),
            label_vertex: (0..n).collect(),
            action: vec![],
        };
        assert_eq!(tree_center(&full).unwrap(), common::pruning_center(&adj));
    }
}

#[test]
fn synthetic_orbits_classify_consistently() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = ring();
    let primes = [
        prime(&a, &[0, 1]),
        prime(&a, &[1, 1]),
        prime(&a, &[1, 0, 1]),
    ];
    for _ in 0..60 {
        let g = Abelian {
            m1: [2, 4, 6][rng.gen_range(0..3)],
            m2: [1, 2][rng.gen_range(0..2)],
        };
        let k = rng.gen_range(1..=3);
        let (d, edges) = random_orbit(&mut rng, &g, &primes[..k], 3);
        let c = classify(&a, &d).unwrap();
        let want = primes[..k]
            .iter()
            .zip(&edges)
            .filter(|(_, &e)| e)
            .fold(IdealA::unit(), |acc, (p, _)| acc.mul(&a, p));
        assert_eq!(c.n, want);
        assert!(c.n.is_squarefree(&a));
        assert!(minimality_check(&a, &c).ok);
        let mut perm: Vec<usize> = (0..d.labels.len()).collect();
        perm.rotate_left(rng.gen_range(0..d.labels.len()));
        let moved = d.relabel(&perm).unwrap();
        let c2 = classify(&a, &moved).unwrap();
        assert_eq!(c2.n, c.n);
        for i in 0..d.group.gens().len() {
            assert_eq!(c2.m_gen(&moved.group, i), c.m_gen(&d.group, i));
        }
    }
}

#[test]
fn even_diameter_prime_is_excluded() {
    let a = ring();
    let (p, r) = (prime(&a, &[0, 1]), prime(&a, &[1, 1]));
    let d = OrbitDatum::new(
        vec!["x".into(), "y".into()],
        swap2(),
        vec![
            (p.clone(), vec![vec![0, 3], vec![3, 0]]),
            (r, vec![vec![0, 2], vec![2, 0]]),
        ],
    )
    .unwrap();
    let c = classify(&a, &d).unwrap();
    assert_eq!(c.n, p);
    let even = c.primes.iter().find(|pd| pd.prime != p).unwrap();
    assert!(!even.center.is_edge());
    let Center::Vertex { v } = even.center else {
        unreachable!()
    };
    assert!(even.tree.action.iter().all(|img| img[v] == v));
}
