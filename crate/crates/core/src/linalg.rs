//! Dense linear algebra over a field.

use crate::ring::Field;

pub type Matrix<F> = Vec<Vec<<F as crate::ring::Ring>::Elem>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, i);
        let inv = f.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F>) -> usize {
    rref(f, &mut m.clone()).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<F: Field>(f: &F, m: &Matrix<F>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&a[r][fc]);
            }
            v
        })
        .collect()
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F>) -> Option<Matrix<F>> {
    let n = m.len();
    let mut a: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let pivots = rref(f, &mut a);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&row[k], &b[k][j]))))
                .collect()
        })
        .collect()
}

pub fn mul_vec<F: Field>(f: &F, a: &Matrix<F>, v: &[F::Elem]) -> Vec<F::Elem> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y))))
        .collect()
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F> {
    (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect()
}

/// The scalar `c` with `a = c b`, if the matrices (or vectors, as rows) are
/// proportional and `b` is nonzero.
pub fn proportional<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Option<F::Elem> {
    let i = b.iter().position(|x| !f.is_zero(x))?;
    let c = f.div(&a[i], &b[i])?;
    a.iter().zip(b).all(|(x, y)| *x == f.mul(&c, y)).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::PrimeField;

    #[test]
    fn inverse_and_nullspace() {
        let f = PrimeField::new(7).unwrap();
        let m: Matrix<PrimeField> = vec![vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]];
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mul(&f, &m, &inv), identity(&f, 3));
        let s: Matrix<PrimeField> = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let ns = nullspace(&f, &s, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(mul_vec(&f, &s, &v).iter().all(|&x| x == 0));
        }
        assert!(inverse(&f, &s[..1].iter().cloned().chain(s[..1].iter().cloned()).chain(std::iter::once(vec![0, 0, 1])).collect()).is_none());
    }
}
