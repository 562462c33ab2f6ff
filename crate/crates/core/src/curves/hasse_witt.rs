use rustc_hash::FxHashMap;

use super::{DcecInstance, EllipticModel};
use crate::ff::{FieldElement, FiniteField};
use crate::mpoly::{MPoly, Monomial, MonomialOrder, PolyRing};
use crate::ring::{Field, Ring};

/// Exponent vectors `(x, y, z, w)` of the basis of regular differentials
/// used for the Hasse-Witt matrix; each row sums to 5.
pub const E_MATRIX: [[u32; 4]; 4] = [[1, 1, 1, 2], [1, 1, 2, 1], [1, 2, 1, 1], [2, 1, 1, 1]];

/// Target `(x, y, z)` exponent and `w` exponent for entry `(i, j)`
/// (0-based): `p e_i - e_j`.
pub fn hasse_witt_target(p: u32, i: usize, j: usize) -> ([u32; 3], u32) {
    let e = |r: usize, c: usize| E_MATRIX[r][c];
    ([p * e(i, 0) - e(j, 0), p * e(i, 1) - e(j, 1), p * e(i, 2) - e(j, 2)], p * e(i, 3) - e(j, 3))
}

fn binom_mod<F: Field>(n: u32, k: u32, f: &F) -> F::Elem {
    let mut num = f.one();
    let mut den = f.one();
    for i in 0..k {
        num = f.mul(&num, &f.from_i64((n - i) as i64));
        den = f.mul(&den, &f.from_i64((i + 1) as i64));
    }
    f.div(&num, &den).unwrap()
}

// coefficients of P^(p-1) keyed by (x, y, z) exponents
fn p_power<F: Field>(f: &F, a: &F::Elem, b: &F::Elem, p: u32) -> FxHashMap<[u32; 3], F::Elem> {
    let ring = PolyRing::new(f.clone(), &["x", "y", "z"], MonomialOrder::Grevlex).unwrap();
    let pp = ring
        .parse("y^2*z - x^3")
        .unwrap()
        .sub(&ring.parse("x*z^2").unwrap().scale(a))
        .sub(&ring.parse("z^3").unwrap().scale(b));
    let mut acc = ring.one();
    for _ in 0..p - 1 {
        acc = acc.mul(&pp);
    }
    acc.terms().iter().map(|(m, c)| ([m.get(0), m.get(1), m.get(2)], c.clone())).collect()
}

// monomial of x, y, z carried by each quadric coefficient a0..a5
const Q_MONOMIALS: [[u32; 3]; 6] = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];

fn compositions(d: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![d]];
    }
    let mut out = vec![];
    for first in (0..=d).rev() {
        for mut rest in compositions(d - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Hasse-Witt matrix with entries polynomials in `a0..a5` for fixed `A`, `B`
/// in `field`. Entries in row 0 or column 0 other than `(0, 0)` vanish
/// identically; the `(0, 0)` entry is the constant Hasse invariant of the
/// cubic; the others are homogeneous of degree `(p - 1) / 2`.
pub fn hasse_witt_symbolic<F: FiniteField>(field: &F, model: &EllipticModel) -> Vec<Vec<MPoly<F>>> {
    let p = model.p;
    let a = field.from_element(&model.a);
    let b = field.from_element(&model.b);
    let pp = p_power(field, &a, &b, p);
    let ring = PolyRing::new(field.clone(), &["a0", "a1", "a2", "a3", "a4", "a5"], MonomialOrder::Grevlex).unwrap();
    let d = (p - 1) / 2;
    let fact = |n: u32| (1..=n).fold(field.one(), |acc, i| field.mul(&acc, &field.from_i64(i as i64)));
    let dfact = fact(d);
    let sign = if d % 2 == 1 { field.from_i64(-1) } else { field.one() };
    let binom = binom_mod(p - 1, d, field);
    // terms of (-q)^d: (x,y,z exponent, a-monomial, coefficient)
    let qterms: Vec<([u32; 3], Monomial, F::Elem)> = compositions(d, 6)
        .into_iter()
        .map(|e| {
            let mut xyz = [0u32; 3];
            for (i, &ei) in e.iter().enumerate() {
                for v in 0..3 {
                    xyz[v] += ei * Q_MONOMIALS[i][v];
                }
            }
            let den = e.iter().fold(field.one(), |acc, &ei| field.mul(&acc, &fact(ei)));
            let c = field.mul(&sign, &field.mul(&binom, &field.div(&dfact, &den).unwrap()));
            (xyz, Monomial::from_exps(&e), c)
        })
        .collect();
    let mut out = vec![vec![ring.zero(); 4]; 4];
    out[0][0] = ring.constant(pp.get(&[p - 1, p - 1, p - 1]).cloned().unwrap_or_else(|| field.zero()));
    for i in 1..4 {
        for j in 1..4 {
            let (t, _) = hasse_witt_target(p, i, j);
            let terms = qterms.iter().filter_map(|(xyz, m, c)| {
                if (0..3).any(|v| xyz[v] > t[v]) {
                    return None;
                }
                let need = [t[0] - xyz[0], t[1] - xyz[1], t[2] - xyz[2]];
                pp.get(&need).map(|pc| (*m, field.mul(c, pc)))
            });
            out[i][j] = ring.from_terms(terms.collect::<Vec<_>>());
        }
    }
    out
}

/// Hasse-Witt matrix of a concrete curve, computed directly from
/// `P^(p-1)` and `(-q)^((p-1)/2)`.
pub fn hasse_witt_numeric(c: &DcecInstance) -> Vec<Vec<FieldElement>> {
    let p = c.p();
    let f = c.field();
    let pp = p_power(&f, &c.model.a, &c.model.b, p);
    let ring = PolyRing::new(f.clone(), &["x", "y", "z"], MonomialOrder::Grevlex).unwrap();
    let mons = ["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"];
    let q = mons.iter().zip(&c.a).fold(ring.zero(), |acc, (m, a)| acc.add(&ring.parse(m).unwrap().scale(a)));
    let d = (p - 1) / 2;
    let qpow = q.neg().pow(d);
    let binom = binom_mod(p - 1, d, &f);
    let mut out = vec![vec![f.zero(); 4]; 4];
    out[0][0] = pp.get(&[p - 1, p - 1, p - 1]).cloned().unwrap_or_else(|| f.zero());
    for i in 1..4 {
        for j in 1..4 {
            let (t, _) = hasse_witt_target(p, i, j);
            let mut acc = f.zero();
            for (m, qc) in qpow.terms() {
                let e = [m.get(0), m.get(1), m.get(2)];
                if (0..3).any(|v| e[v] > t[v]) {
                    continue;
                }
                if let Some(pc) = pp.get(&[t[0] - e[0], t[1] - e[1], t[2] - e[2]]) {
                    acc = f.add(&acc, &f.mul(qc, pc));
                }
            }
            out[i][j] = f.mul(&binom, &acc);
        }
    }
    out
}

impl DcecInstance {
    /// Superspecial when the Hasse-Witt matrix vanishes.
    pub fn is_superspecial(&self) -> bool {
        hasse_witt_numeric(self).iter().flatten().all(|e| e.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets_have_consistent_degree() {
        for p in [5, 7, 11] {
            for i in 0..4 {
                for j in 0..4 {
                    let (t, w) = hasse_witt_target(p, i, j);
                    assert_eq!(t.iter().sum::<u32>() + w, 5 * p - 5);
                }
            }
        }
    }
}
