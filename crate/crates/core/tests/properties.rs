mod common;

use dforge_core::construct::{line_isogeny, random_module_with_points};
use dforge_core::example::quadratic_field;
use dforge_core::ext::ExtField;
use dforge_core::fq::{Fq, FqField};
use dforge_core::ideal::IdealA;
use dforge_core::moduli::{al_compose, al_group};
use dforge_core::poly::PolyRing;
use dforge_core::ring::{Field, Ring};
use dforge_core::skew::SkewRing;
use dforge_core::text::{parse_ext, parse_skew};
use dforge_core::tree::{realize_metric, tree_center, SubTree};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ring(quad: bool) -> SkewRing {
    let fq = FqField::prime(3).unwrap();
    if quad {
        quadratic_field(fq).unwrap().0
    } else {
        SkewRing::new(ExtField::rational(PolyRing::new(fq)))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn skew_multiplication_is_associative(seed in any::<u64>(), quad in any::<bool>()) {
        let r = ring(quad);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (r.random(&mut rng, 2, 2, 1), r.random(&mut rng, 2, 2, 1), r.random(&mut rng, 1, 2, 1));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
    }

    #[test]
    fn tau_twists_scalars(seed in any::<u64>(), quad in any::<bool>()) {
        let r = ring(quad);
        let k = r.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = k.random(&mut rng, 3, 2);
        prop_assert_eq!(r.mul(&r.tau(), &r.constant(c.clone())), r.monomial(k.frobenius(&c), 1));
    }

    #[test]
    fn right_division_round_trips(seed in any::<u64>(), quad in any::<bool>(), da in 0usize..5, db in 0usize..3) {
        let r = ring(quad);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = r.random(&mut rng, da, 2, 1);
        let b = r.random_exact(&mut rng, db, 2, 1);
        let (q, rem) = r.right_divmod(&a, &b).unwrap();
        prop_assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        prop_assert!(rem.deg_i() < b.deg_i());
    }

    #[test]
    fn printed_forms_parse_back(seed in any::<u64>(), quad in any::<bool>()) {
        let r = ring(quad);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = r.random(&mut rng, 3, 3, 2);
        prop_assert_eq!(parse_skew(&r, &r.fmt_skew(&u)).unwrap(), u);
        let c = r.field().random(&mut rng, 3, 3);
        prop_assert_eq!(parse_ext(r.field(), &r.field().fmt_elem(&c)).unwrap(), c);
    }

    #[test]
    fn dual_inverts_up_to_the_degree(seed in any::<u64>()) {
        let r = ring(false);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (phi, p1, _) = random_module_with_points(&r, &mut rng, Fq::ZERO, Fq::ONE);
        let mu = line_isogeny(&phi, &p1.z).unwrap();
        let an = mu.degree().unwrap().deg.gen().clone();
        let dual = mu.dual().unwrap();
        prop_assert_eq!(r.mul(dual.mu(), mu.mu()), phi.phi_a(&an));
        prop_assert_eq!(r.mul(mu.mu(), dual.mu()), mu.target().phi_a(&an));
        prop_assert_eq!(&dual.degree().unwrap().deg, &mu.degree().unwrap().deg);
    }

    #[test]
    fn twisting_preserves_j(seed in any::<u64>(), quad in any::<bool>()) {
        let r = ring(quad);
        let k = r.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (phi, _, _) = random_module_with_points(&ring(false), &mut rng, Fq::ZERO, Fq::ONE);
        let phi = dforge_core::drinfeld::DrinfeldModule::rank_two(
            &r,
            k.from_rat(&phi.field().coords(&phi.g())[0]),
            k.from_rat(&phi.field().coords(&phi.delta())[0]),
        ).unwrap();
        let c = k.random_nonzero(&mut rng, 2, 1);
        prop_assert_eq!(phi.twist(&c).unwrap().j_invariant().unwrap(), phi.j_invariant().unwrap());
        prop_assert_eq!(k.inv(&k.inv(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn atkin_lehner_group_is_elementary_abelian(mask in 1u8..8) {
        let a = PolyRing::new(FqField::prime(3).unwrap());
        let ps = [[0i64, 1].as_slice(), &[1, 1], &[1, 0, 1]];
        let n = ps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1)
            .fold(IdealA::unit(), |acc, (_, p)| acc.mul(&a, &IdealA::new(&a, &a.from_ints(p)).unwrap()));
        let w = al_group(&a, &n);
        prop_assert_eq!(w.len(), 1 << mask.count_ones());
        for x in &w {
            prop_assert!(al_compose(&a, x, x).unwrap().is_identity());
            for y in &w {
                prop_assert_eq!(al_compose(&a, x, y).unwrap(), al_compose(&a, y, x).unwrap());
            }
        }
    }

    #[test]
    fn tree_metrics_realize_and_center(seed in any::<u64>(), n in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let adj = common::random_tree(&mut rng, n);
        let metric: Vec<Vec<u32>> = (0..n).map(|v| common::bfs(&adj, v)).collect();
        let (radj, lv) = realize_metric(&metric).unwrap();
        let t = SubTree { adj: radj, label_vertex: lv, action: vec![] };
        prop_assert_eq!(t.len(), n);
        let marked: Vec<usize> = (0..n).collect();
        prop_assert!(common::isomorphic_to_spanned(&adj, &marked, &t));
        let full = SubTree { adj: adj.clone(), label_vertex: marked, action: vec![] };
        prop_assert_eq!(tree_center(&full).unwrap(), common::pruning_center(&adj));
    }
}
