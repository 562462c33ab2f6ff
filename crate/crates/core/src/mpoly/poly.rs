use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rustc_hash::FxHashMap;

use std::collections::BTreeMap;

use super::{Monomial, MonomialOrder, MpolyError, SortKey, MAX_VARS};
use crate::ring::{Field, Ring};

/// A polynomial ring: coefficient domain, named variables and a term order.
#[derive(Clone, Debug)]
pub struct PolyRing<R: Ring> {
    coeffs: R,
    vars: Arc<[String]>,
    order: MonomialOrder,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(coeffs: R, vars: &[&str], order: MonomialOrder) -> Result<Self, MpolyError> {
        if vars.len() > MAX_VARS {
            return Err(MpolyError::TooManyVars(vars.len()));
        }
        Ok(PolyRing { coeffs, vars: vars.iter().map(|s| s.to_string()).collect(), order })
    }

    pub fn coeffs(&self) -> &R {
        &self.coeffs
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        PolyRing { coeffs: self.coeffs.clone(), vars: self.vars.clone(), order }
    }

    pub fn with_coeffs<S: Ring>(&self, coeffs: S) -> PolyRing<S> {
        PolyRing { coeffs, vars: self.vars.clone(), order: self.order }
    }

    pub fn var_index(&self, name: &str) -> Result<usize, MpolyError> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| MpolyError::UnknownVariable(name.into()))
    }

    pub fn same(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.vars, &o.vars) || self.vars == o.vars)
            && self.order == o.order
            && self.coeffs.same_ring(&o.coeffs)
    }

    pub fn zero(&self) -> MPoly<R> {
        MPoly { ring: self.clone(), terms: vec![] }
    }

    pub fn one(&self) -> MPoly<R> {
        self.constant(self.coeffs.one())
    }

    pub fn constant(&self, c: R::Elem) -> MPoly<R> {
        self.term(Monomial::one(), c)
    }

    pub fn from_i64(&self, n: i64) -> MPoly<R> {
        self.constant(self.coeffs.from_i64(n))
    }

    pub fn term(&self, m: Monomial, c: R::Elem) -> MPoly<R> {
        let terms = if self.coeffs.is_zero(&c) { vec![] } else { vec![(m, c)] };
        MPoly { ring: self.clone(), terms }
    }

    pub fn var(&self, i: usize) -> MPoly<R> {
        assert!(i < self.nvars());
        self.term(Monomial::var(i), self.coeffs.one())
    }

    pub fn var_named(&self, name: &str) -> Result<MPoly<R>, MpolyError> {
        Ok(self.var(self.var_index(name)?))
    }

    /// Collects terms, combining equal monomials and dropping zeros.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> MPoly<R> {
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => self.coeffs.add_assign(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        self.from_map(acc)
    }

    pub(crate) fn from_map(&self, acc: FxHashMap<Monomial, R::Elem>) -> MPoly<R> {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !self.coeffs.is_zero(c)).collect();
        let o = self.order;
        terms.sort_unstable_by(|a, b| o.cmp(&b.0, &a.0));
        MPoly { ring: self.clone(), terms }
    }

    /// Parses a polynomial written with `+ - * ^`, parentheses, integer
    /// constants and the ring's variable names.
    pub fn parse(&self, s: &str) -> Result<MPoly<R>, MpolyError> {
        super::parse::parse(self, s)
    }
}

/// Sparse polynomial; terms are kept sorted by the ring's order, largest
/// first, with nonzero coefficients.
#[derive(Clone, Debug)]
pub struct MPoly<R: Ring> {
    ring: PolyRing<R>,
    terms: Vec<(Monomial, R::Elem)>,
}

impl<R: Ring> PartialEq for MPoly<R> {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl<R: Ring> Eq for MPoly<R> {}

impl<R: Ring> MPoly<R> {
    pub fn ring(&self) -> &PolyRing<R> {
        &self.ring
    }

    pub fn coeff_ring(&self) -> &R {
        &self.ring.coeffs
    }

    pub fn terms(&self) -> &[(Monomial, R::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, R::Elem)> {
        self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self) -> Option<R::Elem> {
        match self.terms.as_slice() {
            [] => Some(self.ring.coeffs.zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lc(&self) -> Option<&R::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: &Monomial) -> R::Elem {
        let o = self.ring.order;
        match self.terms.binary_search_by(|t| o.cmp(m, &t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.coeffs.zero(),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.deg()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.get(var)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.deg() == w[1].0.deg())
    }

    fn check(&self, o: &Self) {
        assert!(self.ring.same(&o.ring), "operands belong to different polynomial rings");
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        self.check(o);
        let r = &self.ring.coeffs;
        let ord = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (a, b) = (&self.terms[i], &o.terms[j]);
            match ord.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.0, if negate { r.neg(&b.1) } else { b.1.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { r.sub(&a.1, &b.1) } else { r.add(&a.1, &b.1) };
                    if !r.is_zero(&c) {
                        out.push((a.0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(o.terms[j..].iter().map(|b| (b.0, if negate { r.neg(&b.1) } else { b.1.clone() })));
        MPoly { ring: self.ring.clone(), terms: out }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, true)
    }

    pub fn neg(&self) -> Self {
        let r = &self.ring.coeffs;
        MPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (*m, r.neg(c))).collect() }
    }

    pub fn scale(&self, a: &R::Elem) -> Self {
        let r = &self.ring.coeffs;
        if r.is_zero(a) {
            return self.ring.zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, r.mul(c, a)))
            .filter(|(_, c)| !r.is_zero(c))
            .collect();
        MPoly { ring: self.ring.clone(), terms }
    }

    /// Multiplication by `c * m`; the order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &R::Elem) -> Self {
        let r = &self.ring.coeffs;
        if r.is_zero(c) {
            return self.ring.zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(n, d)| (n.mul(m), r.mul(d, c)))
            .filter(|(_, c)| !r.is_zero(c))
            .collect();
        MPoly { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        if self.is_zero() || o.is_zero() {
            return self.ring.zero();
        }
        let (a, b) = if self.terms.len() <= o.terms.len() { (self, o) } else { (o, self) };
        if a.terms.len() == 1 {
            return b.mul_term(&a.terms[0].0, &a.terms[0].1);
        }
        let r = &self.ring.coeffs;
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        acc.reserve(a.terms.len() * b.terms.len() / 2);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul(mb);
                let c = r.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(v) => r.add_assign(v, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        self.ring.from_map(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        self.check(d);
        let r = &self.ring.coeffs;
        let order = self.ring.order;
        let (dm, dc) = d.terms.first()?;
        if d.terms.len() == 1 {
            let mut q = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                q.push((dm.div_into(m)?, r.try_div(c, dc)?));
            }
            return Some(MPoly { ring: self.ring.clone(), terms: q });
        }
        let mut rem: BTreeMap<SortKey, (Monomial, R::Elem)> =
            self.terms.iter().map(|(m, c)| (order.key(m), (*m, c.clone()))).collect();
        let mut q = vec![];
        while let Some((_, (m, c))) = rem.pop_last() {
            let qm = dm.div_into(&m)?;
            let qc = r.try_div(&c, dc)?;
            for (tm, tc) in &d.terms[1..] {
                let nm = tm.mul(&qm);
                let t = r.mul(tc, &qc);
                let key = order.key(&nm);
                match rem.get_mut(&key) {
                    Some(v) => {
                        v.1 = r.sub(&v.1, &t);
                        if r.is_zero(&v.1) {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, (nm, r.neg(&t)));
                    }
                }
            }
            q.push((qm, qc));
        }
        Some(MPoly { ring: self.ring.clone(), terms: q })
    }

    /// Coefficients with respect to one variable: entry `k` is the coefficient
    /// of `var^k`, a polynomial in the remaining variables.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var) as usize;
        let mut parts: Vec<Vec<(Monomial, R::Elem)>> = vec![vec![]; d + 1];
        for (m, c) in &self.terms {
            parts[m.get(var) as usize].push((m.with(var, 0), c.clone()));
        }
        if self.is_zero() {
            return vec![];
        }
        // removing a variable may reorder terms under non-lex orders
        parts.into_iter().map(|t| self.ring.from_terms(t)).collect()
    }

    /// Sets the variables with `Some` values; they no longer occur in the result.
    pub fn specialize(&self, values: &[Option<R::Elem>]) -> Self {
        let r = &self.ring.coeffs;
        let mut cache: FxHashMap<(usize, u32), R::Elem> = FxHashMap::default();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = *m;
            let mut c2 = c.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    let e = m.get(i);
                    if e > 0 {
                        let p = cache.entry((i, e)).or_insert_with(|| r.pow(v, e as u64));
                        c2 = r.mul(&c2, p);
                        m2 = m2.with(i, 0);
                    }
                }
            }
            (m2, c2)
        });
        self.ring.from_terms(terms.collect::<Vec<_>>())
    }

    pub fn eval(&self, point: &[R::Elem]) -> R::Elem {
        let vals: Vec<Option<R::Elem>> = point.iter().cloned().map(Some).collect();
        self.specialize(&vals).constant_value().unwrap()
    }

    pub fn derivative(&self, var: usize) -> Self {
        let r = &self.ring.coeffs;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.get(var) > 0)
            .map(|(m, c)| (m.with(var, m.get(var) - 1), r.mul(c, &r.from_i64(m.get(var) as i64))))
            .collect::<Vec<_>>();
        self.ring.from_terms(terms)
    }

    /// Substitutes `images[i]` for variable `i`; the result lives in the
    /// images' ring.
    pub fn compose(&self, images: &[MPoly<R>]) -> MPoly<R> {
        assert!(images.len() >= self.ring.nvars());
        let target = images[0].ring.clone();
        let mut powers: Vec<Vec<MPoly<R>>> = images.iter().map(|p| vec![target.one(), p.clone()]).collect();
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        let r = &self.ring.coeffs;
        for (m, c) in &self.terms {
            let mut t = target.constant(c.clone());
            for (i, pw) in powers.iter_mut().enumerate().take(self.ring.nvars()) {
                let e = m.get(i) as usize;
                if e == 0 {
                    continue;
                }
                while pw.len() <= e {
                    let next = pw.last().unwrap().mul(&pw[1]);
                    pw.push(next);
                }
                t = t.mul(&pw[e]);
            }
            for (tm, tc) in t.terms {
                match acc.get_mut(&tm) {
                    Some(v) => r.add_assign(v, &tc),
                    None => {
                        acc.insert(tm, tc);
                    }
                }
            }
        }
        target.from_map(acc)
    }

    /// Moves the polynomial to another ring: variable `i` becomes
    /// `var_map[i]` of the target, and coefficients go through `f`.
    /// A variable mapped to `None` must not occur.
    pub fn map_into<S: Ring>(
        &self,
        target: &PolyRing<S>,
        var_map: &[Option<usize>],
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> Result<MPoly<S>, MpolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = [0u32; MAX_VARS];
            for i in 0..self.ring.nvars() {
                let x = m.get(i);
                if x == 0 {
                    continue;
                }
                match var_map.get(i).copied().flatten() {
                    Some(j) => e[j] += x,
                    None => return Err(MpolyError::VariableInUse(self.ring.vars[i].clone())),
                }
            }
            terms.push((Monomial::from_exps(&e[..target.nvars()]), f(c)));
        }
        Ok(target.from_terms(terms))
    }

    /// Moves to a ring with the same coefficients, matching variables by name.
    pub fn to_ring(&self, target: &PolyRing<R>) -> Result<MPoly<R>, MpolyError> {
        let map: Vec<Option<usize>> = self.ring.vars.iter().map(|v| target.var_index(v).ok()).collect();
        self.map_into(target, &map, |c| c.clone())
    }

    /// Smallest term under `order`.
    pub fn lowest_term(&self, order: MonomialOrder) -> Option<(Monomial, R::Elem)> {
        self.terms.iter().min_by(|a, b| order.cmp(&a.0, &b.0)).cloned()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let r = &self.ring.coeffs;
        let n = self.ring.nvars();
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let e: Vec<u32> = (0..n).map(|i| m.get(i)).collect();
                    serde_json::json!({ "c": r.to_json(c), "e": e })
                })
                .collect(),
        )
    }

    pub fn from_json(ring: &PolyRing<R>, v: &serde_json::Value) -> Result<Self, MpolyError> {
        let bad = |s: &str| MpolyError::Parse(s.to_string());
        let arr = v.as_array().ok_or_else(|| bad("expected an array of terms"))?;
        let mut terms = Vec::with_capacity(arr.len());
        for t in arr {
            let c = ring.coeffs.from_json(&t["c"]).ok_or_else(|| bad("bad coefficient"))?;
            let e: Vec<u32> = serde_json::from_value(t["e"].clone()).map_err(|e| bad(&e.to_string()))?;
            if e.len() != ring.nvars() {
                return Err(bad("exponent vector length does not match the ring"));
            }
            terms.push((Monomial::from_exps(&e), c));
        }
        Ok(ring.from_terms(terms))
    }
}

impl<F: Field> MPoly<F> {
    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(c) => self.scale(&self.ring.coeffs.inv(c).unwrap()),
        }
    }
}

impl<R: Ring> fmt::Display for MPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let r = &self.ring.coeffs;
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = r.is_negative(c);
            let a = if neg { r.neg(c) } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut parts = vec![];
            if !r.is_one(&a) || m.is_one() {
                parts.push(r.fmt_elem(&a));
            }
            for i in 0..self.ring.nvars() {
                match m.get(i) {
                    0 => {}
                    1 => parts.push(self.ring.vars[i].clone()),
                    e => parts.push(format!("{}^{}", self.ring.vars[i], e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl<R: Ring> $tr<&MPoly<R>> for &MPoly<R> {
            type Output = MPoly<R>;
            fn $m(self, o: &MPoly<R>) -> MPoly<R> {
                MPoly::$m(self, o)
            }
        }
        impl<R: Ring> $tr<MPoly<R>> for MPoly<R> {
            type Output = MPoly<R>;
            fn $m(self, o: MPoly<R>) -> MPoly<R> {
                MPoly::$m(&self, &o)
            }
        }
        impl<R: Ring> $tr<&MPoly<R>> for MPoly<R> {
            type Output = MPoly<R>;
            fn $m(self, o: &MPoly<R>) -> MPoly<R> {
                MPoly::$m(&self, o)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl<R: Ring> Neg for &MPoly<R> {
    type Output = MPoly<R>;
    fn neg(self) -> MPoly<R> {
        MPoly::neg(self)
    }
}

impl<R: Ring> Neg for MPoly<R> {
    type Output = MPoly<R>;
    fn neg(self) -> MPoly<R> {
        MPoly::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::PrimeField;
    use crate::ring::{Integers, Rationals};

    fn zring() -> PolyRing<Integers> {
        PolyRing::new(Integers, &["x", "y", "z"], MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        let r = zring();
        let f = r.parse("3*x^2*y - y^3 + 2*z - 7").unwrap();
        assert_eq!(f.to_string(), "3*x^2*y - y^3 + 2*z - 7");
        assert_eq!(r.parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn ring_laws() {
        let r = zring();
        let a = r.parse("x + 2*y - z^2").unwrap();
        let b = r.parse("x*y - 3").unwrap();
        let c = r.parse("z + y^2*x").unwrap();
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!((&a - &a).nterms(), 0);
        assert_eq!((&a * &b).exact_div(&b), Some(a.clone()));
        assert_eq!(b.exact_div(&a), None);
    }

    #[test]
    fn json_round_trip() {
        let r = PolyRing::new(Rationals, &["x", "y"], MonomialOrder::Lex).unwrap();
        let f = r.parse("x^3 - 5*x*y + 2").unwrap().scale(&num_rational::BigRational::new(1.into(), 3.into()));
        let back = MPoly::from_json(&r, &f.to_json()).unwrap();
        assert_eq!(back, f);
        let fp = PrimeField::new(11).unwrap();
        let r = PolyRing::new(fp, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        let g = r.parse("x^2 - 3*y").unwrap();
        assert_eq!(MPoly::from_json(&r, &g.to_json()).unwrap(), g);
    }

    #[test]
    fn compose_and_specialize() {
        let r = zring();
        let f = r.parse("x^2 + y*z").unwrap();
        let imgs = [r.parse("y + z").unwrap(), r.parse("x").unwrap(), r.parse("1").unwrap()];
        assert_eq!(f.compose(&imgs), r.parse("y^2 + 2*y*z + z^2 + x").unwrap());
        let s = f.specialize(&[None, Some(2.into()), None]);
        assert_eq!(s, r.parse("x^2 + 2*z").unwrap());
        assert_eq!(f.eval(&[1.into(), 2.into(), 3.into()]), 7.into());
    }

    #[test]
    fn map_between_rings() {
        let r = zring();
        let f = r.parse("x^2 - 12*y").unwrap();
        let fp = PrimeField::new(5).unwrap();
        let t = PolyRing::new(fp, &["y", "x"], MonomialOrder::Grevlex).unwrap();
        let g = f.map_into(&t, &[Some(1), Some(0), None], |c| fp.from_i64((c % 5i64).try_into().unwrap())).unwrap();
        assert_eq!(g, t.parse("x^2 + 3*y").unwrap());
        assert!(r.parse("z").unwrap().map_into(&t, &[Some(1), Some(0), None], |_| 1).is_err());
    }
}
