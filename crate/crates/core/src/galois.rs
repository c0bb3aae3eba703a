//! Explicit finite abelian groups of automorphisms of K over Q.

use crate::error::{Error, Result};
use crate::ext::{ExtElem, ExtField};
use crate::ring::{Field, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    image: ExtElem,
    /// image^i for i < e.
    powers: Vec<ExtElem>,
    /// Exponents of the generators in the word that produced this element.
    word: Vec<u32>,
}

impl Automorphism {
    pub fn image(&self) -> &ExtElem {
        &self.image
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaloisGen {
    pub name: String,
    pub image: ExtElem,
    pub order: u32,
}

#[derive(Clone, Debug)]
pub struct GaloisDatum {
    k: ExtField,
    gens: Vec<GaloisGen>,
    elems: Vec<Automorphism>,
}

fn eval_at(k: &ExtField, f: &[crate::poly::Poly], y: &ExtElem) -> ExtElem {
    f.iter()
        .rev()
        .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, y), &k.from_poly(c)))
}

fn make_auto(k: &ExtField, image: ExtElem, word: Vec<u32>) -> Automorphism {
    let e = k.degree();
    let mut powers = Vec::with_capacity(e);
    let mut cur = k.one();
    for _ in 0..e {
        powers.push(cur.clone());
        cur = k.mul(&cur, &image);
    }
    Automorphism {
        image,
        powers,
        word,
    }
}

fn apply_auto(k: &ExtField, s: &Automorphism, a: &ExtElem) -> ExtElem {
    if k.degree() == 1 {
        return a.clone();
    }
    let mut acc = k.zero();
    for (c, y) in a.num().iter().zip(&s.powers) {
        if !c.is_zero() {
            acc = k.add(&acc, &k.mul(&k.from_poly(c), y));
        }
    }
    let d = k.from_poly(a.den());
    k.div(&acc, &d).expect("nonzero denominator")
}

impl GaloisDatum {
    /// The trivial group.
    pub fn trivial(k: ExtField) -> Self {
        let id = make_auto(&k, k.x(), Vec::new());
        GaloisDatum {
            k,
            gens: Vec::new(),
            elems: vec![id],
        }
    }

    /// Validate generator images and enumerate the group they generate.
    pub fn new(k: ExtField, gens: Vec<GaloisGen>) -> Result<Self> {
        let x = k.x();
        let ng = gens.len();
        let mut autos = Vec::with_capacity(ng);
        for (gi, g) in gens.iter().enumerate() {
            if g.order == 0 {
                return Err(Error::InvalidAutomorphism(format!(
                    "generator {} has order 0",
                    g.name
                )));
            }
            if !eval_at(&k, k.modulus(), &g.image).is_zero() {
                return Err(Error::InvalidAutomorphism(format!(
                    "image of x under {} is not a root of the extension modulus",
                    g.name
                )));
            }
            let mut w = vec![0; ng];
            w[gi] = 1;
            let s = make_auto(&k, g.image.clone(), w);
            // s^j(x) for j = 1..order
            let mut cur = x.clone();
            for j in 1..=g.order {
                cur = apply_auto(&k, &s, &cur);
                let is_id = cur == x;
                if is_id != (j == g.order) {
                    return Err(Error::InvalidAutomorphism(format!(
                        "generator {} does not have order {}",
                        g.name, g.order
                    )));
                }
            }
            autos.push(s);
        }
        for i in 0..ng {
            for j in i + 1..ng {
                let st = apply_auto(&k, &autos[i], &autos[j].image);
                let ts = apply_auto(&k, &autos[j], &autos[i].image);
                if st != ts {
                    return Err(Error::InvalidAutomorphism(format!(
                        "generators {} and {} do not commute",
                        gens[i].name, gens[j].name
                    )));
                }
            }
        }
        let mut elems = vec![make_auto(&k, x.clone(), vec![0; ng])];
        for (gi, g) in gens.iter().enumerate() {
            let mut next = Vec::new();
            for base in &elems {
                let mut cur = base.clone();
                for _ in 1..g.order {
                    let img = apply_auto(&k, &cur, &autos[gi].image);
                    let mut w = cur.word.clone();
                    w[gi] += 1;
                    cur = make_auto(&k, img, w);
                    if !elems
                        .iter()
                        .chain(&next)
                        .any(|a: &Automorphism| a.image == cur.image)
                    {
                        next.push(cur.clone());
                    }
                }
            }
            elems.extend(next);
        }
        Ok(GaloisDatum { k, gens, elems })
    }

    pub fn field(&self) -> &ExtField {
        &self.k
    }

    pub fn gens(&self) -> &[GaloisGen] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elems
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of the element equal to generator `i`.
    pub fn gen_index(&self, i: usize) -> usize {
        self.find(&self.gens[i].image)
            .expect("generator enumerated")
    }

    pub fn find(&self, image: &ExtElem) -> Option<usize> {
        self.elems.iter().position(|a| &a.image == image)
    }

    pub fn apply(&self, s: usize, a: &ExtElem) -> ExtElem {
        apply_auto(&self.k, &self.elems[s], a)
    }

    /// Index of s composed with t, acting as s(t(.)).
    pub fn compose(&self, s: usize, t: usize) -> usize {
        let img = self.apply(s, &self.elems[t].image);
        self.find(&img).expect("group closed under composition")
    }

    pub fn inverse(&self, s: usize) -> usize {
        (0..self.order())
            .find(|&t| self.compose(s, t) == 0)
            .expect("finite group")
    }

    pub fn element_order(&self, s: usize) -> usize {
        let mut cur = s;
        let mut n = 1;
        while cur != 0 {
            cur = self.compose(s, cur);
            n += 1;
        }
        n
    }

    /// A generator of the group when it is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order()).find(|&s| self.element_order(s) == self.order())
    }

    pub fn is_fixed(&self, a: &ExtElem) -> bool {
        (0..self.gens.len()).all(|i| &self.apply(self.gen_index(i), a) == a)
    }

    /// Display name such as `id`, `s`, `s^2*t`.
    pub fn element_name(&self, s: usize) -> String {
        let parts: Vec<String> = self.elems[s]
            .word
            .iter()
            .zip(&self.gens)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| {
                if *e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{e}", g.name)
                }
            })
            .collect();
        if parts.is_empty() {
            "id".into()
        } else {
            parts.join("*")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqField;
    use crate::poly::{Poly, PolyRing};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quad() -> (ExtField, GaloisDatum) {
        let a = PolyRing::new(FqField::prime(3).unwrap());
        let k = ExtField::new(
            a.clone(),
            vec![a.from_ints(&[-1, -1]), Poly::zero(), Poly::one()],
        )
        .unwrap();
        let s = GaloisGen {
            name: "s".into(),
            image: k.neg(&k.x()),
            order: 2,
        };
        let g = GaloisDatum::new(k.clone(), vec![s]).unwrap();
        (k, g)
    }

    #[test]
    fn sign_change() {
        let (k, g) = quad();
        let s = g.gen_index(0);
        let a = k.add(&k.x(), &k.one());
        assert_eq!(g.apply(s, &a), k.add(&k.neg(&k.x()), &k.one()));
        assert_eq!(g.apply(s, &k.t()), k.t());
        assert_eq!(g.order(), 2);
        assert_eq!(g.compose(s, s), 0);
    }

    #[test]
    fn homomorphism_on_random_pairs() {
        let (k, g) = quad();
        let s = g.gen_index(0);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..1000 {
            let a = k.random(&mut rng, 2, 2);
            let b = k.random(&mut rng, 2, 2);
            assert_eq!(
                g.apply(s, &k.mul(&a, &b)),
                k.mul(&g.apply(s, &a), &g.apply(s, &b))
            );
            assert_eq!(
                g.apply(s, &k.add(&a, &b)),
                k.add(&g.apply(s, &a), &g.apply(s, &b))
            );
            assert_eq!(g.apply(s, &g.apply(s, &a)), a);
        }
    }

    #[test]
    fn rejects_bad_images() {
        let (k, _) = quad();
        let bad = GaloisGen {
            name: "s".into(),
            image: k.add(&k.x(), &k.one()),
            order: 2,
        };
        assert!(matches!(
            GaloisDatum::new(k.clone(), vec![bad]),
            Err(Error::InvalidAutomorphism(_))
        ));
        let wrong_order = GaloisGen {
            name: "s".into(),
            image: k.neg(&k.x()),
            order: 4,
        };
        assert!(GaloisDatum::new(k, vec![wrong_order]).is_err());
    }

    #[test]
    fn biquadratic_group() {
        // x^4 - 2(T+1+T^2)... use K = Q(sqrt T, sqrt(T+1)) with primitive element
        // y = sqrt T + sqrt(T+1): y^4 - 2(2T+1) y^2 + 1 = 0
        let a = PolyRing::new(FqField::prime(5).unwrap());
        let f = vec![
            Poly::one(),
            Poly::zero(),
            a.from_ints(&[-2, -4]),
            Poly::zero(),
            Poly::one(),
        ];
        let k = ExtField::new(a.clone(), f).unwrap();
        let y = k.x();
        // sqrt T = (y - 1/y)/2 , sqrt(T+1) = (y + 1/y)/2
        let yinv = k.inv(&y).unwrap();
        let half = k.inv(&k.from_int(2)).unwrap();
        let st = k.mul(&half, &k.sub(&y, &yinv));
        let st1 = k.mul(&half, &k.add(&y, &yinv));
        assert_eq!(k.mul(&st, &st), k.t());
        // s: sqrt T -> -sqrt T ; t: sqrt(T+1) -> -sqrt(T+1)
        let s_img = k.sub(&st1, &st);
        let t_img = k.sub(&st, &st1);
        let g = GaloisDatum::new(
            k.clone(),
            vec![
                GaloisGen {
                    name: "s".into(),
                    image: s_img,
                    order: 2,
                },
                GaloisGen {
                    name: "t".into(),
                    image: t_img,
                    order: 2,
                },
            ],
        )
        .unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.cyclic_generator().is_none());
        let st_idx = g.compose(g.gen_index(0), g.gen_index(1));
        assert_eq!(g.element_name(st_idx), "s*t");
        assert_eq!(g.apply(st_idx, &y), k.neg(&y));
    }
}
