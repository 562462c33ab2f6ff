use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::CurveError;
use crate::ff::{FieldElement, FieldTower, GaloisField, UPoly};
use crate::ring::{Field, Ring};

/// Short Weierstrass curve `y^2 = x^3 + A x + B` over a level of the tower
/// for `p`. `A` and `B` share a level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EllipticModel {
    pub p: u32,
    #[serde(rename = "A")]
    pub a: FieldElement,
    #[serde(rename = "B")]
    pub b: FieldElement,
}

/// A point given by affine coordinates in one level, or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Point {
    Infinity,
    Affine(FieldElement, FieldElement),
}

impl Point {
    pub fn lift(&self, tower: &FieldTower, k: usize) -> Point {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(tower.lift(x, k), tower.lift(y, k)),
        }
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, _) => Some(x.level()),
        }
    }
}

impl EllipticModel {
    pub fn new(p: u32, a: &FieldElement, b: &FieldElement) -> Result<Self, CurveError> {
        let tower = FieldTower::shared(p)?;
        let (_, v) = tower.common_level(&[a, b]);
        let m = EllipticModel { p, a: v[0].clone(), b: v[1].clone() };
        if m.field().is_zero(&m.f1()) {
            return Err(CurveError::SingularModel);
        }
        Ok(m)
    }

    /// Model with integer coefficients reduced mod `p`.
    pub fn from_ints(p: u32, a: i64, b: i64) -> Result<Self, CurveError> {
        let tower = FieldTower::shared(p)?;
        Self::new(p, &tower.from_i64(a, 1), &tower.from_i64(b, 1))
    }

    pub fn tower(&self) -> Arc<FieldTower> {
        FieldTower::shared(self.p).expect("prime checked at construction")
    }

    pub fn level(&self) -> usize {
        self.a.level()
    }

    pub fn field(&self) -> GaloisField {
        self.tower().level(self.level())
    }

    /// Same curve with coefficients in a larger level.
    pub fn lift(&self, k: usize) -> EllipticModel {
        let t = self.tower();
        EllipticModel { p: self.p, a: t.lift(&self.a, k), b: t.lift(&self.b, k) }
    }

    /// Coefficients moved to the smallest level containing both.
    pub fn descend(&self) -> EllipticModel {
        let t = self.tower();
        let k = crate::ff_lcm(t.minimal_level(&self.a), t.minimal_level(&self.b));
        EllipticModel { p: self.p, a: t.descend(&self.a, k).unwrap(), b: t.descend(&self.b, k).unwrap() }
    }

    /// `4 A^3 + 27 B^2`.
    pub fn f1(&self) -> FieldElement {
        let f = self.field();
        let a3 = f.pow(&self.a, 3);
        let b2 = f.mul(&self.b, &self.b);
        f.add(&f.mul(&f.from_i64(4), &a3), &f.mul(&f.from_i64(27), &b2))
    }

    pub fn j_invariant(&self) -> FieldElement {
        let f = self.field();
        let a3 = f.mul(&f.from_i64(4), &f.pow(&self.a, 3));
        f.div(&f.mul(&f.from_i64(1728), &a3), &self.f1()).unwrap()
    }

    /// The j-invariant at the smallest level containing it.
    pub fn j_invariant_descended(&self) -> FieldElement {
        let t = self.tower();
        let j = self.j_invariant();
        t.descend(&j, t.minimal_level(&j)).unwrap()
    }

    /// The coefficient of `x^(p-1)` in `(x^3 + A x + B)^((p-1)/2)`.
    pub fn hasse_coefficient(&self) -> FieldElement {
        let f = self.field();
        let cubic = UPoly::new(f.clone(), vec![self.b.clone(), self.a.clone(), f.zero(), f.one()]);
        let mut acc = UPoly::one(f.clone());
        for _ in 0..(self.p - 1) / 2 {
            acc = acc.mul(&cubic);
        }
        acc.coeff(self.p as usize - 1)
    }

    /// Deuring's criterion: the Hasse coefficient vanishes.
    pub fn is_supersingular(&self) -> bool {
        self.hasse_coefficient().is_zero()
    }

    /// `x^3 + A x + B` as a polynomial over level `k`.
    pub fn cubic(&self, k: usize) -> UPoly<GaloisField> {
        let m = self.lift(k);
        let f = self.tower().level(k);
        UPoly::new(f.clone(), vec![m.b, m.a, f.zero(), f.one()])
    }

    /// The units `u` with `u^4 A = A` and `u^6 B = B`, lifted to level `k`
    /// (which must be even). `u` acts by `(x, y) -> (u^2 x, u^3 y)`.
    pub fn automorphism_units(&self, k: usize) -> Vec<FieldElement> {
        assert!(k % 2 == 0 && k % self.level() == 0);
        let f = self.tower().level(k);
        let n = match (self.a.is_zero(), self.b.is_zero()) {
            (false, false) => 2,
            (true, _) => 6,
            (false, true) => 4,
        };
        let mut c = vec![f.zero(); n + 1];
        c[0] = f.from_i64(-1);
        c[n] = f.one();
        UPoly::new(f, c).roots()
    }

    /// Arithmetic on the curve over level `k`.
    pub fn at(&self, k: usize) -> CurveAt {
        let m = self.lift(k);
        CurveAt { field: self.tower().level(k), a: m.a, b: m.b }
    }

    /// The full 6-torsion `E[2] + E[3]` over the smallest level (a multiple of
    /// the model's level) where it is rational, together with that level.
    pub fn torsion6(&self) -> (usize, Vec<Point>) {
        let tower = self.tower();
        let k = self.level();
        let fk = self.field();
        let psi3 = UPoly::new(
            fk.clone(),
            vec![
                fk.neg(&fk.mul(&self.a, &self.a)),
                fk.mul(&fk.from_i64(12), &self.b),
                fk.mul(&fk.from_i64(6), &self.a),
                fk.zero(),
                fk.from_i64(3),
            ],
        );
        let mut lvl = k;
        for g in [self.cubic(k), psi3.clone()] {
            for (h, _) in g.factor() {
                lvl = crate::ff_lcm(lvl, k * h.degree().unwrap());
            }
        }
        loop {
            let c = self.at(lvl);
            let lift = |u: &UPoly<GaloisField>| {
                UPoly::new(c.field.clone(), u.coeffs().iter().map(|e| tower.lift(e, lvl)).collect())
            };
            let e2: Vec<Point> = std::iter::once(Point::Infinity)
                .chain(lift(&self.cubic(k)).roots().into_iter().map(|x| Point::Affine(x, c.field.zero())))
                .collect();
            let mut e3 = vec![Point::Infinity];
            let mut ok = true;
            for x in lift(&psi3).roots() {
                match c.field.sqrt(&c.rhs(&x)) {
                    Some(y) => {
                        e3.push(Point::Affine(x.clone(), c.field.neg(&y)));
                        e3.push(Point::Affine(x, y));
                    }
                    None => ok = false,
                }
            }
            if !ok {
                lvl *= 2;
                continue;
            }
            let mut all: Vec<Point> = e2.iter().flat_map(|p| e3.iter().map(|q| c.add(p, q))).collect();
            all.sort();
            return (lvl, all);
        }
    }
}

/// A Weierstrass curve with coefficients in one field, for point arithmetic.
#[derive(Clone, Debug)]
pub struct CurveAt {
    pub field: GaloisField,
    pub a: FieldElement,
    pub b: FieldElement,
}

impl CurveAt {
    /// `x^3 + A x + B`
    pub fn rhs(&self, x: &FieldElement) -> FieldElement {
        let f = &self.field;
        let x2 = f.mul(x, x);
        f.add(&f.mul(&f.add(&x2, &self.a), x), &self.b)
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => self.field.mul(y, y) == self.rhs(x),
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), self.field.neg(y)),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let f = &self.field;
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if f.is_zero(&f.add(y1, y2)) {
                return Point::Infinity;
            }
            let num = f.add(&f.mul(&f.from_i64(3), &f.mul(x1, x1)), &self.a);
            f.div(&num, &f.add(y1, y1)).unwrap()
        } else {
            f.div(&f.sub(y2, y1), &f.sub(x2, x1)).unwrap()
        };
        let x3 = f.sub(&f.sub(&f.mul(&lambda, &lambda), x1), x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(x1, &x3)), y1);
        Point::Affine(x3, y3)
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Point {
        self.add(p, &self.neg(q))
    }

    pub fn mul(&self, n: i64, p: &Point) -> Point {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Point::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn sum<'a>(&self, pts: impl IntoIterator<Item = &'a Point>) -> Point {
        pts.into_iter().fold(Point::Infinity, |acc, p| self.add(&acc, p))
    }

    /// `(x, y) -> (u^2 x, u^3 y)`
    pub fn act(&self, u: &FieldElement, pt: &Point) -> Point {
        let f = &self.field;
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let u2 = f.mul(u, u);
                Point::Affine(f.mul(&u2, x), f.mul(&f.mul(&u2, u), y))
            }
        }
    }
}

/// One model per supersingular j-invariant in F_{p^2}: `(0, 1)` for `j = 0`,
/// `(1, 0)` for `j = 1728`, otherwise `A = 3j(1728 - j)`, `B = 2j(1728 - j)^2`.
/// Each model is stored at the smallest level containing its coefficients;
/// models are sorted by the value of `j` in F_{p^2}.
pub fn supersingular_models(p: u32) -> Result<Vec<EllipticModel>, CurveError> {
    if p < 5 || !crate::ff::is_prime(p as u64) {
        return Err(CurveError::BadPrime(p));
    }
    let tower = FieldTower::shared(p)?;
    let f2 = tower.level(2);
    let mut out = vec![];
    for j in f2.elements() {
        let m = model_for_j(p, &j)?;
        if m.is_supersingular() {
            out.push((j, m.descend()));
        }
    }
    out.sort_by(|a, b| a.0.index(p).cmp(&b.0.index(p)));
    Ok(out.into_iter().map(|(_, m)| m).collect())
}

/// The standard model with a given j-invariant.
pub fn model_for_j(p: u32, j: &FieldElement) -> Result<EllipticModel, CurveError> {
    let tower = FieldTower::shared(p)?;
    let f = tower.level(j.level());
    let c1728 = f.from_i64(1728);
    if f.is_zero(j) {
        return EllipticModel::new(p, &f.zero(), &f.one());
    }
    if *j == c1728 {
        return EllipticModel::new(p, &f.one(), &f.zero());
    }
    let t = f.sub(&c1728, j);
    let a = f.mul(&f.from_i64(3), &f.mul(j, &t));
    let b = f.mul(&f.from_i64(2), &f.mul(j, &f.mul(&t, &t)));
    EllipticModel::new(p, &a, &b)
}

/// Number of supersingular j-invariants: `floor(p/12)` plus 0, 1, 1, 2 for
/// `p = 1, 5, 7, 11 mod 12`.
pub fn supersingular_count(p: u32) -> usize {
    (p / 12) as usize
        + match p % 12 {
            1 => 0,
            5 | 7 => 1,
            11 => 2,
            _ => 0,
        }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_invariants_of_standard_models() {
        let m = EllipticModel::from_ints(13, 5, 0).unwrap();
        assert_eq!(m.j_invariant(), m.field().from_i64(1728));
        let m = EllipticModel::from_ints(13, 0, 3).unwrap();
        assert!(m.field().is_zero(&m.j_invariant()));
        let t = FieldTower::shared(13).unwrap();
        let j = t.from_i64(5, 1);
        assert_eq!(model_for_j(13, &j).unwrap().j_invariant(), j);
    }

    #[test]
    fn six_torsion_has_36_points() {
        for (p, a, b) in [(5, 1, 1), (7, 0, 1), (11, 1, 0), (13, 2, 5)] {
            let m = EllipticModel::from_ints(p, a, b).unwrap();
            let (k, pts) = m.torsion6();
            let c = m.at(k);
            assert_eq!(pts.len(), 36);
            let uniq: std::collections::BTreeSet<_> = pts.iter().collect();
            assert_eq!(uniq.len(), 36);
            for pt in &pts {
                assert!(c.contains(pt));
                assert_eq!(c.mul(6, pt), Point::Infinity);
            }
        }
    }

    #[test]
    fn automorphism_group_orders() {
        let t = |p, a, b| EllipticModel::from_ints(p, a, b).unwrap().automorphism_units(2).len();
        assert_eq!(t(13, 0, 1), 6);
        assert_eq!(t(13, 1, 0), 4);
        assert_eq!(t(13, 1, 1), 2);
    }

    #[test]
    fn supersingular_j_for_small_primes() {
        let js = |p| -> Vec<i64> {
            supersingular_models(p)
                .unwrap()
                .iter()
                .map(|m| {
                    let j = m.j_invariant();
                    assert_eq!(j.level(), 1);
                    j.0[0] as i64
                })
                .collect()
        };
        assert_eq!(js(5), vec![0]);
        assert_eq!(js(7), vec![6]); // 1728 = 6 mod 7
        assert_eq!(js(11), vec![0, 1]); // 1728 = 1 mod 11
        assert_eq!(js(13), vec![5]);
    }
}
