use dforge_core::construct::{line_isogeny, random_module_with_points};
use dforge_core::error::Error;
use dforge_core::example::quadratic_example;
use dforge_core::ext::ExtField;
use dforge_core::fq::{Fq, FqField};
use dforge_core::galois::GaloisDatum;
use dforge_core::ideal::IdealA;
use dforge_core::isogeny::Isogeny;
use dforge_core::moduli::{
    al_apply, al_compose, al_group, descent_data, equivalent, is_central, star_orbit, theta,
    ALElement, ModuliPoint,
};
use dforge_core::poly::PolyRing;
use dforge_core::search::NonCmCertificate;
use dforge_core::skew::SkewRing;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ideal(a: &PolyRing, ints: &[i64]) -> IdealA {
    IdealA::new(a, &a.from_ints(ints)).unwrap()
}

/// A cyclic isogeny of degree (T)(T - 1) built from two torsion lines.
fn two_prime_point(ring: &SkewRing, seed: u64) -> ModuliPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (phi, p1, p2) = random_module_with_points(ring, &mut rng, Fq::ZERO, Fq::ONE);
    let u1 = line_isogeny(&phi, &p1.z).unwrap();
    let u2 = line_isogeny(u1.target(), &ring.eval(u1.mu(), &p2.z)).unwrap();
    ModuliPoint::new(u2.compose(&u1).unwrap()).unwrap()
}

#[test]
fn atkin_lehner_group_law() {
    let a = PolyRing::new(FqField::prime(3).unwrap());
    let n = ideal(&a, &[0, 0, 1]).mul(&a, &ideal(&a, &[1, 1]));
    let w = al_group(&a, &n);
    assert_eq!(w.len(), 4);
    assert!(w[0].is_identity());
    for x in &w {
        assert!(al_compose(&a, x, x).unwrap().is_identity());
        for y in &w {
            let xy = al_compose(&a, x, y).unwrap();
            assert!(w.contains(&xy));
            assert_eq!(xy, al_compose(&a, y, x).unwrap());
        }
    }
    let t = ideal(&a, &[0, 1]);
    assert!(matches!(
        ALElement::new(&a, t.clone(), n.clone()),
        Err(Error::BadAtkinLehner(_))
    ));
    let other = ALElement::identity(t);
    assert!(matches!(
        al_compose(&a, &w[1], &other),
        Err(Error::AmbientMismatch)
    ));
}

#[test]
fn quadratic_example_star_orbit() {
    for q in [3, 5] {
        let ex = quadratic_example(FqField::prime(q).unwrap()).unwrap();
        let a = ex.ring.field().poly_ring().clone();
        let t = ideal(&a, &[0, 1]);
        let x = ModuliPoint::new(ex.eta.clone()).unwrap();
        assert_eq!(x.n, t);
        let w = ALElement::new(&a, t.clone(), t.clone()).unwrap();
        let wx = al_apply(&a, &w, &x).unwrap();
        let mu = ModuliPoint::new(ex.mu.clone()).unwrap();
        assert!(equivalent(&wx, &mu).unwrap());
        assert_eq!(
            theta(&wx).unwrap(),
            (
                ex.conj.j_invariant().unwrap(),
                ex.phi.j_invariant().unwrap()
            )
        );

        let cert = NonCmCertificate::certify(&ex.phi, 2).unwrap();
        let o = star_orbit(&a, &x, &cert, Some(&ex.galois)).unwrap();
        assert_eq!(o.distinct, 2);
        assert_eq!(o.d_x.len(), 1);
        let m = o.m_map.as_ref().unwrap();
        assert!(m[ex.galois.identity()].is_identity());
        assert_eq!(m[ex.galois.gen_index(0)].m, t);
        let dd = descent_data(&a, &o, &ex.galois).unwrap();
        assert_eq!(dd.degree_bound, 2);
        assert_eq!(dd.hom[0].1.m, t);
        assert!(is_central(&a, &[ex.mu.clone()], &t).unwrap());
    }
}

#[test]
fn action_is_a_group_action() {
    let a = PolyRing::new(FqField::prime(3).unwrap());
    let ring = SkewRing::new(ExtField::rational(a.clone()));
    for seed in 0..4 {
        let x = two_prime_point(&ring, seed);
        let ws = al_group(&a, &x.n);
        assert_eq!(ws.len(), 4);
        let wn = ws.iter().find(|w| w.m == x.n).unwrap();
        let dual = ModuliPoint::new(x.iso.dual().unwrap()).unwrap();
        assert!(equivalent(&al_apply(&a, wn, &x).unwrap(), &dual).unwrap());
        assert!(equivalent(&al_apply(&a, &ws[0], &x).unwrap(), &x).unwrap());
        for w1 in &ws {
            let once = al_apply(&a, w1, &x).unwrap();
            assert!(equivalent(&al_apply(&a, w1, &once).unwrap(), &x).unwrap());
            for w2 in &ws {
                let lhs = al_apply(&a, w2, &once).unwrap();
                let rhs = al_apply(&a, &al_compose(&a, w2, w1).unwrap(), &x).unwrap();
                assert!(equivalent(&lhs, &rhs).unwrap());
            }
        }
        let cert = NonCmCertificate::certify(x.iso.source(), 2).unwrap();
        let triv = GaloisDatum::trivial(ring.field().clone());
        let o = star_orbit(&a, &x, &cert, Some(&triv)).unwrap();
        assert_eq!(o.d_x.len(), 1);
        assert_eq!(o.distinct, 4);
        assert_eq!(descent_data(&a, &o, &triv).unwrap().degree_bound, 1);
    }
}

#[test]
fn moduli_errors() {
    let ex = quadratic_example(FqField::prime(3).unwrap()).unwrap();
    let a = ex.ring.field().poly_ring().clone();
    let x = ModuliPoint::new(ex.eta.clone()).unwrap();
    let wrong = ALElement::identity(ideal(&a, &[1, 1]));
    assert!(matches!(
        al_apply(&a, &wrong, &x),
        Err(Error::DegreeMismatch(_))
    ));

    let square = Isogeny::endo(&ex.phi, &a.from_ints(&[0, 1])).unwrap();
    assert!(matches!(ModuliPoint::new(square), Err(Error::NotCyclic)));

    let low = NonCmCertificate::certify(&ex.phi, 0).unwrap();
    assert!(matches!(
        star_orbit(&a, &x, &low, None),
        Err(Error::Certificate(_))
    ));

    let a2 = PolyRing::new(FqField::prime(2).unwrap());
    let r2 = SkewRing::new(ExtField::rational(a2.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (phi, p1, _) = random_module_with_points(&r2, &mut rng, Fq::ZERO, Fq::ONE);
    let y = ModuliPoint::new(line_isogeny(&phi, &p1.z).unwrap()).unwrap();
    let cert = NonCmCertificate::certify(&phi, 1).unwrap();
    assert!(matches!(
        star_orbit(&a2, &y, &cert, None),
        Err(Error::EvenCharacteristicUnsupported)
    ));
}
