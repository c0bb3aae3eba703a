//! Dense Gaussian elimination over any exact field.

use crate::error::{Error, Result};
use crate::fq::{Fq, FqField};
use crate::ring::Field;

pub type Matrix<E> = Vec<Vec<E>>;

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn rref<F: Field>(k: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !k.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = k.inv(&m[r][c]).expect("nonzero pivot");
        for j in c..cols {
            m[r][j] = k.mul(&m[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && !k.is_zero(&m[i][c]) {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = k.mul(&f, &m[r][j]);
                    m[i][j] = k.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(k: &F, m: &Matrix<F::Elem>) -> usize {
    rref(k, &mut m.clone()).len()
}

/// Basis of {v : m v = 0}.
pub fn nullspace<F: Field>(k: &F, m: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut a = m.clone();
    let pivots = rref(k, &mut a);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![k.zero(); cols];
        v[free] = k.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = k.neg(&a[row][free]);
        }
        basis.push(v);
    }
    basis
}

/// Solve m x = b; errors if inconsistent. Free variables are set to zero.
pub fn solve<F: Field>(k: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Matrix<F::Elem> = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(k, &mut a);
    if pivots.last() == Some(&cols) {
        return Err(Error::InternalInconsistency(
            "inconsistent linear system".into(),
        ));
    }
    let mut x = vec![k.zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = a[row][cols].clone();
    }
    Ok(x)
}

pub fn determinant<F: Field>(k: &F, m: &Matrix<F::Elem>) -> F::Elem {
    let n = m.len();
    let mut a = m.clone();
    let mut det = k.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !k.is_zero(&a[i][c])) else {
            return k.zero();
        };
        if p != c {
            a.swap(p, c);
            det = k.neg(&det);
        }
        det = k.mul(&det, &a[c][c]);
        let inv = k.inv(&a[c][c]).expect("nonzero pivot");
        for i in c + 1..n {
            if k.is_zero(&a[i][c]) {
                continue;
            }
            let f = k.mul(&a[i][c], &inv);
            for j in c..n {
                let t = k.mul(&f, &a[c][j]);
                a[i][j] = k.sub(&a[i][j], &t);
            }
        }
    }
    det
}

/// Incremental F_q row reducer used to detect the first linear dependency
/// in a stream of vectors. Each stored row remembers which input vectors
/// combine to it.
pub struct DependencyFinder {
    fq: FqField,
    rows: Vec<(usize, Vec<Fq>, Vec<Fq>)>,
    count: usize,
}

impl DependencyFinder {
    pub fn new(fq: FqField) -> Self {
        DependencyFinder {
            fq,
            rows: Vec::new(),
            count: 0,
        }
    }

    /// Feed the next vector. Returns coefficients c_0..c_k with
    /// sum c_i v_i = 0 and c_k = 1 if the new vector depends on the previous ones.
    pub fn push(&mut self, v: Vec<Fq>) -> Option<Vec<Fq>> {
        let f = &self.fq;
        let idx = self.count;
        self.count += 1;
        let mut v = v;
        let mut comb = vec![Fq::ZERO; idx + 1];
        comb[idx] = Fq::ONE;
        for (pc, row, rc) in &self.rows {
            let x = v.get(*pc).copied().unwrap_or(Fq::ZERO);
            if x == Fq::ZERO {
                continue;
            }
            let nx = f.neg_fq(x);
            if v.len() < row.len() {
                v.resize(row.len(), Fq::ZERO);
            }
            for (j, &r) in row.iter().enumerate() {
                if r != Fq::ZERO {
                    v[j] = f.add_fq(v[j], f.mul_fq(nx, r));
                }
            }
            for (j, &r) in rc.iter().enumerate() {
                if r != Fq::ZERO {
                    comb[j] = f.add_fq(comb[j], f.mul_fq(nx, r));
                }
            }
        }
        match v.iter().position(|&x| x != Fq::ZERO) {
            None => Some(comb),
            Some(pc) => {
                let inv = f.inv_fq(v[pc]).expect("nonzero");
                let row: Vec<Fq> = v.iter().map(|&x| f.mul_fq(x, inv)).collect();
                let rc: Vec<Fq> = comb.iter().map(|&x| f.mul_fq(x, inv)).collect();
                self.rows.push((pc, row, rc));
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nullspace_vectors_are_killed() {
        let f = FqField::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let m: Matrix<Fq> = (0..3).map(|_| f.random_elems(&mut rng, 5)).collect();
            let ns = nullspace(&f, &m, 5);
            assert_eq!(ns.len() + rank(&f, &m), 5);
            for v in ns {
                for row in &m {
                    let s = row
                        .iter()
                        .zip(&v)
                        .fold(Fq::ZERO, |a, (x, y)| f.add(&a, &f.mul(x, y)));
                    assert_eq!(s, Fq::ZERO);
                }
            }
        }
    }

    #[test]
    fn solve_and_determinant() {
        let f = FqField::prime(7).unwrap();
        let m = vec![
            vec![f.from_int(2), f.from_int(1)],
            vec![f.from_int(1), f.from_int(1)],
        ];
        assert_eq!(determinant(&f, &m), Fq::ONE);
        let x = solve(&f, &m, &[f.from_int(3), f.from_int(2)]).unwrap();
        assert_eq!(x, vec![Fq::ONE, Fq::ONE]);
    }

    #[test]
    fn dependency_finder() {
        let f = FqField::prime(3).unwrap();
        let mut d = DependencyFinder::new(f.clone());
        assert!(d.push(vec![Fq::ONE, Fq::ZERO]).is_none());
        assert!(d.push(vec![Fq::ZERO, Fq::ONE]).is_none());
        let c = d.push(vec![f.from_int(2), f.from_int(1)]).unwrap();
        assert_eq!(c, vec![f.from_int(1), f.from_int(2), Fq::ONE]);
    }
}
