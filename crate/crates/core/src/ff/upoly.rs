use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ring::Field;

/// Dense univariate polynomial, coefficients stored low degree first and
/// trimmed so the last entry is nonzero.
#[derive(Clone, Debug)]
pub struct UPoly<F: Field> {
    field: F,
    c: Vec<F::Elem>,
}

impl<F: Field> PartialEq for UPoly<F> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl<F: Field> Eq for UPoly<F> {}

impl<F: Field> UPoly<F> {
    pub fn new(field: F, mut c: Vec<F::Elem>) -> Self {
        while c.last().is_some_and(|x| field.is_zero(x)) {
            c.pop();
        }
        UPoly { field, c }
    }

    pub fn zero(field: F) -> Self {
        UPoly { field, c: vec![] }
    }

    pub fn one(field: F) -> Self {
        let one = field.one();
        UPoly { field, c: vec![one] }
    }

    pub fn constant(field: F, a: F::Elem) -> Self {
        Self::new(field, vec![a])
    }

    /// `a * x^d`
    pub fn monomial(field: F, a: F::Elem, d: usize) -> Self {
        let mut c = vec![field.zero(); d + 1];
        c[d] = a;
        Self::new(field, c)
    }

    pub fn x(field: F) -> Self {
        let one = field.one();
        Self::monomial(field, one, 1)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.field.is_one(&self.c[0])
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> F::Elem {
        self.c.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => self.field.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(self.field.clone(), c)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.field.clone(), self.c.iter().map(|a| self.field.neg(a)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field.clone());
        }
        let f = &self.field;
        let mut c = vec![f.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                let t = f.mul(a, b);
                f.add_assign(&mut c[i + j], &t);
            }
        }
        Self::new(f.clone(), c)
    }

    pub fn scale(&self, a: &F::Elem) -> Self {
        Self::new(self.field.clone(), self.c.iter().map(|x| self.field.mul(x, a)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(&self.lc()).expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        if self.c.len() < d.c.len() {
            return (Self::zero(f.clone()), self.clone());
        }
        let dn = d.deg();
        let inv = f.inv(&d.lc()).unwrap();
        let mut r = self.c.clone();
        let mut q = vec![f.zero(); r.len() - dn];
        for i in (dn..r.len()).rev() {
            if f.is_zero(&r[i]) {
                continue;
            }
            let t = f.mul(&r[i], &inv);
            for (j, dj) in d.c.iter().enumerate() {
                let s = f.mul(&t, dj);
                r[i - dn + j] = f.sub(&r[i - dn + j], &s);
            }
            q[i - dn] = t;
        }
        r.truncate(dn);
        (Self::new(f.clone(), q), Self::new(f.clone(), r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g` and `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let fz = || Self::zero(self.field.clone());
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(self.field.clone()), fz());
        let (mut t0, mut t1) = (fz(), Self::one(self.field.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = self.field.inv(&r0.lc()).unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| f.mul(a, &f.from_i64(i as i64)))
            .collect();
        Self::new(f.clone(), c)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for a in self.c.iter().rev() {
            acc = f.add(&f.mul(&acc, x), a);
        }
        acc
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let base = self.rem(m);
        let mut acc = Self::one(self.field.clone()).rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Size of the coefficient field.
    pub fn field_size(&self) -> BigUint {
        BigUint::from(self.field.characteristic()).pow(self.field.degree() as u32)
    }

    fn pth_root_poly(&self) -> Self {
        let p = self.field.characteristic() as usize;
        let c = self.c.iter().step_by(p).map(|a| self.field.pth_root(a)).collect();
        Self::new(self.field.clone(), c)
    }

    /// Squarefree factorization of a monic-normalized `self`: pairs
    /// `(g, m)` with `g` squarefree, pairwise coprime and `prod g^m = monic(self)`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = vec![];
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let p = self.field.characteristic() as usize;
        let d = f.derivative();
        if d.is_zero() {
            for (g, m) in f.pth_root_poly().squarefree_decomposition() {
                out.push((g, m * p));
            }
            return out;
        }
        let mut c = f.gcd(&d);
        let mut w = f.div_exact(&c).unwrap();
        let mut i = 1;
        while w.deg() > 0 {
            let y = w.gcd(&c);
            let z = w.div_exact(&y).unwrap();
            if z.deg() > 0 {
                out.push((z, i));
            }
            i += 1;
            c = c.div_exact(&y).unwrap();
            w = y;
        }
        if c.deg() > 0 {
            for (g, m) in c.pth_root_poly().squarefree_decomposition() {
                out.push((g, m * p));
            }
        }
        out.sort_by(|a, b| a.1.cmp(&b.1));
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn distinct_degree(&self) -> Vec<(Self, usize)> {
        let q = self.field_size();
        let x = Self::x(self.field.clone());
        let mut out = vec![];
        let mut f = self.monic();
        let mut h = x.rem(&f);
        let mut i = 1;
        while f.deg() >= 2 * i {
            h = h.pow_mod(&q, &f);
            let g = f.gcd(&h.sub(&x));
            if g.deg() > 0 {
                f = f.div_exact(&g).unwrap();
                h = h.rem(&f);
                out.push((g, i));
            }
            i += 1;
        }
        if f.deg() > 0 {
            let d = f.deg();
            out.push((f, d));
        }
        out
    }

    /// Splits a monic squarefree product of irreducibles of degree `d`.
    pub fn equal_degree(&self, d: usize) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ (self.deg() as u64) << 8 ^ d as u64);
        let mut out = vec![];
        self.edf_rec(d, &mut rng, &mut out);
        out
    }

    fn edf_rec(&self, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Self>) {
        let n = self.deg();
        if n == d {
            out.push(self.monic());
            return;
        }
        let q = self.field_size();
        let two = BigUint::from(2u32);
        let odd = &q % &two == BigUint::one();
        loop {
            let a = Self::new(self.field.clone(), (0..n).map(|_| self.field.random_elem(rng)).collect());
            if a.deg() == 0 {
                continue;
            }
            let b = if odd {
                let e = (q.pow(d as u32) - 1u32) / &two;
                a.pow_mod(&e, self).sub(&Self::one(self.field.clone()))
            } else {
                // trace map a + a^2 + ... + a^(2^(kd-1))
                let bits = self.field.degree() * d;
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..bits {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                acc
            };
            let g = self.gcd(&b);
            if g.deg() > 0 && g.deg() < n {
                let h = self.div_exact(&g).unwrap();
                g.edf_rec(d, rng, out);
                h.edf_rec(d, rng, out);
                return;
            }
        }
    }

    /// Factorization into monic irreducibles with multiplicities, sorted by
    /// degree then coefficients. The leading coefficient times the product
    /// of the factors reproduces `self`.
    pub fn factor(&self) -> Vec<(Self, usize)> {
        let mut out = vec![];
        for (g, m) in self.squarefree_decomposition() {
            for (h, d) in g.distinct_degree() {
                for irr in h.equal_degree(d) {
                    out.push((irr, m));
                }
            }
        }
        out.sort_by(|a, b| (a.0.deg(), a.0.c.iter().rev().collect::<Vec<_>>(), a.1)
            .cmp(&(b.0.deg(), b.0.c.iter().rev().collect::<Vec<_>>(), b.1)));
        out
    }

    /// Distinct roots in the coefficient field, sorted.
    pub fn roots(&self) -> Vec<F::Elem> {
        if self.deg() == 0 {
            return vec![];
        }
        let f = self.monic();
        let x = Self::x(self.field.clone());
        let xq = x.pow_mod(&self.field_size(), &f);
        let g = f.gcd(&xq.sub(&x));
        if g.deg() == 0 {
            return vec![];
        }
        let mut r: Vec<F::Elem> = g
            .equal_degree(1)
            .into_iter()
            .map(|l| self.field.neg(&l.c[0]))
            .collect();
        r.sort();
        r
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let q = self.field_size();
        let x = Self::x(self.field.clone());
        let frob = |k: usize| -> Self {
            let mut h = x.clone();
            for _ in 0..k {
                h = h.pow_mod(&q, &f);
            }
            h
        };
        if frob(n) != x.rem(&f) {
            return false;
        }
        let mut m = n;
        let mut r = 2;
        while m > 1 {
            if m % r == 0 {
                while m % r == 0 {
                    m /= r;
                }
                if f.gcd(&frob(n / r).sub(&x)).deg() > 0 {
                    return false;
                }
            }
            r += 1;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::PrimeField;

    fn poly(p: u32, c: &[i64]) -> UPoly<PrimeField> {
        let f = PrimeField::new(p).unwrap();
        UPoly::new(f, c.iter().map(|&a| f.reduce(a)).collect())
    }

    #[test]
    fn factor_reproduces_input() {
        // (x^2+1)^2 (x+3) (x^3+x+1) over F_7
        let a = poly(7, &[1, 0, 1]);
        let b = poly(7, &[3, 1]);
        let c = poly(7, &[1, 1, 0, 1]);
        let f = a.mul(&a).mul(&b).mul(&c).scale(&5);
        let fac = f.factor();
        let mut prod = UPoly::constant(*f.field(), f.lc());
        for (g, m) in &fac {
            assert!(g.is_irreducible());
            for _ in 0..*m {
                prod = prod.mul(g);
            }
        }
        assert_eq!(prod, f);
        assert_eq!(fac.iter().map(|(g, m)| (g.degree().unwrap(), *m)).collect::<Vec<_>>(), vec![(1, 1), (2, 2), (3, 1)]);
    }

    #[test]
    fn pth_power_squarefree() {
        // (x+1)^5 (x+2) over F_5
        let a = poly(5, &[1, 1]);
        let f = a.mul(&a).mul(&a).mul(&a).mul(&a).mul(&poly(5, &[2, 1]));
        let fac = f.factor();
        assert_eq!(fac.len(), 2);
        assert!(fac.contains(&(a, 5)));
    }

    #[test]
    fn roots_of_split_cubic() {
        let f = poly(11, &[1, 0, 0, 1]); // x^3 + 1 over F_11: roots 10 only? 11 = 2 mod 3 so one root
        assert_eq!(f.roots(), vec![10]);
        let g = poly(13, &[-1, 0, 0, 1]); // x^3 - 1 over F_13: cube roots of unity
        assert_eq!(g.roots(), vec![1, 3, 9]);
    }
}
