use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{FfError, PrimeField, UPoly};
use crate::ring::{Field, Ring};

/// Element of F_{p^k}: coefficients `c_0..c_{k-1}` on the power basis of the
/// level's generator. The length of the vector is the level `k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub Vec<u32>);

impl FieldElement {
    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The value as an integer `sum c_i p^i`; used as a canonical sort key.
    pub fn index(&self, p: u32) -> BigUint {
        self.0.iter().rev().fold(BigUint::default(), |acc, &c| acc * p + c)
    }
}

/// A prime-field element prints as its value, others as the coefficient
/// list over the defining polynomial's root, `[c0,c1,...]`.
impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0.as_slice() {
            [v] => write!(f, "{v}"),
            cs => write!(f, "[{}]", cs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
        }
    }
}

/// Elements compare first by level, then as the integer `sum c_i p^i`.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct GfInner {
    base: PrimeField,
    k: usize,
    // monic, length k + 1
    modulus: Vec<u32>,
}

/// F_{p^k} = F_p[g] / (m(g)) for a monic irreducible `m` of degree `k`.
#[derive(Clone)]
pub struct GaloisField {
    inner: Arc<GfInner>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p(), self.k())
    }
}

impl GaloisField {
    /// Builds F_p[g]/(m). `modulus` is given low degree first and must be
    /// monic irreducible.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self, FfError> {
        let base = PrimeField::new(p)?;
        let k = modulus.len().checked_sub(1).filter(|&k| k > 0).ok_or(FfError::ZeroDegree)?;
        let m = UPoly::new(base, modulus.iter().map(|&c| c % p).collect());
        if m.degree() != Some(k) || m.lc() != 1 || !m.is_irreducible() {
            return Err(FfError::Reducible(k));
        }
        Ok(Self::from_parts(base, m.coeffs().to_vec()))
    }

    pub(crate) fn from_parts(base: PrimeField, modulus: Vec<u32>) -> Self {
        let k = modulus.len() - 1;
        GaloisField { inner: Arc::new(GfInner { base, k, modulus }) }
    }

    pub fn p(&self) -> u32 {
        self.inner.base.p()
    }

    pub fn k(&self) -> usize {
        self.inner.k
    }

    pub fn base(&self) -> PrimeField {
        self.inner.base
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.p()).pow(self.k() as u32)
    }

    /// Embeds a prime-field residue.
    pub fn from_base(&self, a: u32) -> FieldElement {
        let mut v = vec![0; self.k()];
        v[0] = a % self.p();
        FieldElement(v)
    }

    pub fn generator(&self) -> FieldElement {
        let mut v = vec![0; self.k()];
        if self.k() > 1 {
            v[1] = 1;
        } else {
            // the root of the degree-1 modulus x + m0
            v[0] = self.inner.base.neg(&self.inner.modulus[0]);
        }
        FieldElement(v)
    }

    pub fn elem(&self, coeffs: &[u32]) -> FieldElement {
        assert!(coeffs.len() <= self.k());
        let mut v: Vec<u32> = coeffs.iter().map(|&c| c % self.p()).collect();
        v.resize(self.k(), 0);
        FieldElement(v)
    }

    /// Prime-field value if the element lies in F_p.
    pub fn as_base(&self, a: &FieldElement) -> Option<u32> {
        a.0[1..].iter().all(|&c| c == 0).then_some(a.0[0])
    }

    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p() as u64)
    }

    /// `a^e` for an arbitrary-size exponent.
    pub fn pow_big(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Square root if one exists in this field.
    pub fn sqrt(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return Some(self.zero());
        }
        let f = UPoly::new(self.clone(), vec![self.neg(a), self.zero(), self.one()]);
        f.roots().into_iter().next()
    }

    pub fn to_upoly(&self, a: &FieldElement) -> UPoly<PrimeField> {
        UPoly::new(self.inner.base, a.0.clone())
    }

    /// All elements of the field (small fields only).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let p = self.p() as u64;
        let n = p.pow(self.k() as u32);
        (0..n).map(move |mut i| {
            let mut v = Vec::with_capacity(self.k());
            for _ in 0..self.k() {
                v.push((i % p) as u32);
                i /= p;
            }
            FieldElement(v)
        })
    }
}

impl Ring for GaloisField {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement(vec![0; self.k()])
    }
    fn one(&self) -> FieldElement {
        self.from_base(1)
    }
    fn from_i64(&self, n: i64) -> FieldElement {
        self.from_base(self.inner.base.reduce(n))
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert_eq!(a.level(), self.k());
        debug_assert_eq!(b.level(), self.k());
        let p = self.p();
        FieldElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= p {
                        s - p
                    } else {
                        s
                    }
                })
                .collect(),
        )
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p();
        FieldElement(a.0.iter().zip(&b.0).map(|(&x, &y)| if x >= y { x - y } else { x + p - y }).collect())
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.p();
        FieldElement(a.0.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect())
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert_eq!(a.level(), self.k());
        debug_assert_eq!(b.level(), self.k());
        let k = self.k();
        let p = self.p() as u64;
        if k == 1 {
            return FieldElement(vec![((a.0[0] as u64 * b.0[0] as u64) % p) as u32]);
        }
        let mut t = vec![0u64; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                t[i + j] += x as u64 * y as u64;
            }
        }
        let m = &self.inner.modulus;
        for i in (k..2 * k - 1).rev() {
            let c = t[i] % p;
            if c == 0 {
                continue;
            }
            for j in 0..k {
                // subtract c * m_j, kept nonnegative
                t[i - k + j] += c * ((p - m[j] as u64) % p);
            }
        }
        FieldElement(t[..k].iter().map(|&v| (v % p) as u32).collect())
    }
    fn try_div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        self.div(a, b)
    }
    fn fmt_elem(&self, a: &FieldElement) -> String {
        if let Some(c) = self.as_base(a) {
            return c.to_string();
        }
        let parts: Vec<String> = a
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "g".into(),
                (1, c) => format!("{c}*g"),
                (i, 1) => format!("g^{i}"),
                (i, c) => format!("{c}*g^{i}"),
            })
            .collect();
        format!("({})", parts.join(" + "))
    }
    fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.p() == other.p() && self.inner.modulus == other.inner.modulus)
    }
    fn to_json(&self, a: &FieldElement) -> serde_json::Value {
        serde_json::to_value(a).unwrap()
    }
    fn from_json(&self, v: &serde_json::Value) -> Option<FieldElement> {
        let c: Vec<u32> = serde_json::from_value(v.clone()).ok()?;
        (c.len() == self.k()).then(|| self.elem(&c))
    }
}

impl Field for GaloisField {
    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        if self.k() == 1 {
            return self.inner.base.inv(&a.0[0]).map(|x| FieldElement(vec![x]));
        }
        let m = UPoly::new(self.inner.base, self.inner.modulus.clone());
        let (g, s, _) = self.to_upoly(a).ext_gcd(&m);
        debug_assert!(g.is_one());
        Some(self.elem(s.coeffs()))
    }
    fn characteristic(&self) -> u32 {
        self.p()
    }
    fn degree(&self) -> usize {
        self.k()
    }
    fn pth_root(&self, a: &FieldElement) -> FieldElement {
        let mut r = a.clone();
        for _ in 1..self.k() {
            r = self.frobenius(&r);
        }
        r
    }
    fn random_elem<G: Rng>(&self, rng: &mut G) -> FieldElement {
        let p = self.p();
        FieldElement((0..self.k()).map(|_| rng.gen_range(0..p)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f49_arithmetic() {
        let f = GaloisField::with_modulus(7, &[1, 0, 1]).unwrap(); // g^2 = -1
        let g = f.generator();
        assert_eq!(f.mul(&g, &g), f.from_i64(-1));
        for a in f.elements().skip(1) {
            let ai = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &ai), f.one());
            assert_eq!(f.pow(&a, 48), f.one());
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(GaloisField::with_modulus(5, &[1, 0, 1]).is_err()); // x^2 + 1 = (x-2)(x+2)
        assert!(GaloisField::with_modulus(6, &[1, 1]).is_err());
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        let f = GaloisField::with_modulus(5, &[1, 1, 0, 1]).unwrap();
        for a in f.elements().step_by(7) {
            assert_eq!(f.pth_root(&f.frobenius(&a)), a);
        }
    }
}
