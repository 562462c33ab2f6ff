use std::sync::Arc;

use serde_json::json;

use super::{f2_mod_p, CurveError, EllipticModel, Point};
use crate::ff::{FieldElement, FieldTower, GaloisField, UPoly};
use crate::mpoly::{MPoly, MonomialOrder, PolyRing};
use crate::ring::{Field, Ring};

/// The curve `V(P, Q)` in P^3 with `P = y^2 z - x^3 - A x z^2 - B z^3` and
/// `Q = w^2 - q`, `q = a0 x^2 + a1 xy + a2 xz + a3 y^2 + a4 yz + a5 z^2`.
/// All coefficients share one level of the tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DcecInstance {
    pub model: EllipticModel,
    pub a: Vec<FieldElement>,
}

/// The intersection `V(P, q)` on the cubic: six points counted with
/// multiplicity, over a level where all of them are rational.
#[derive(Clone, Debug)]
pub struct SixPoints {
    pub level: usize,
    pub points: Vec<(Point, usize)>,
}

impl SixPoints {
    /// The points repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<Point> {
        self.points.iter().flat_map(|(p, m)| std::iter::repeat(p.clone()).take(*m)).collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.points.iter().all(|(_, m)| *m == 1)
    }
}

impl DcecInstance {
    pub fn new(model: &EllipticModel, a: &[FieldElement]) -> Result<Self, CurveError> {
        if a.len() != 6 {
            return Err(CurveError::Malformed(format!("expected 6 quadric coefficients, got {}", a.len())));
        }
        let tower = model.tower();
        let mut all: Vec<&FieldElement> = vec![&model.a, &model.b];
        all.extend(a.iter());
        let (k, _) = tower.common_level(&all);
        Ok(DcecInstance { model: model.lift(k), a: a.iter().map(|e| tower.lift(e, k)).collect() })
    }

    pub fn from_ints(p: u32, ab: (i64, i64), a: [i64; 6]) -> Result<Self, CurveError> {
        let m = EllipticModel::from_ints(p, ab.0, ab.1)?;
        let t = m.tower();
        let a: Vec<FieldElement> = a.iter().map(|&c| t.from_i64(c, 1)).collect();
        Self::new(&m, &a)
    }

    pub fn p(&self) -> u32 {
        self.model.p
    }

    pub fn level(&self) -> usize {
        self.model.level()
    }

    pub fn tower(&self) -> Arc<FieldTower> {
        self.model.tower()
    }

    pub fn field(&self) -> GaloisField {
        self.model.field()
    }

    pub fn lift(&self, k: usize) -> DcecInstance {
        let t = self.tower();
        DcecInstance { model: self.model.lift(k), a: self.a.iter().map(|e| t.lift(e, k)).collect() }
    }

    /// Coefficients moved to the smallest level containing all of them.
    pub fn descend(&self) -> DcecInstance {
        let t = self.tower();
        let k = std::iter::once(&self.model.a)
            .chain(std::iter::once(&self.model.b))
            .chain(self.a.iter())
            .fold(1, |acc, e| crate::ff_lcm(acc, t.minimal_level(e)));
        DcecInstance {
            model: EllipticModel { p: self.p(), a: t.descend(&self.model.a, k).unwrap(), b: t.descend(&self.model.b, k).unwrap() },
            a: self.a.iter().map(|e| t.descend(e, k).unwrap()).collect(),
        }
    }

    /// Scales `q` so that its first nonzero coefficient is 1.
    pub fn normalized(&self) -> DcecInstance {
        let f = self.field();
        match self.a.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(c) => {
                let inv = f.inv(c).unwrap();
                DcecInstance { model: self.model.clone(), a: self.a.iter().map(|x| f.mul(x, &inv)).collect() }
            }
        }
    }

    /// `(A, B, a0, .., a5)`
    pub fn invariant_point(&self) -> Vec<FieldElement> {
        let mut v = vec![self.model.a.clone(), self.model.b.clone()];
        v.extend(self.a.iter().cloned());
        v
    }

    pub fn f3(&self) -> FieldElement {
        let f = self.field();
        let ring = PolyRing::new(f.clone(), &super::F2_VARS, MonomialOrder::Grevlex).unwrap();
        super::f3_poly(&ring).eval(&self.invariant_point())
    }

    pub fn f2(&self) -> FieldElement {
        let f = self.field();
        let f2 = f2_mod_p(self.p());
        let pt = self.invariant_point();
        let mut acc = f.zero();
        for (m, c) in f2.terms() {
            let mut t = f.from_base(*c);
            for (i, x) in pt.iter().enumerate() {
                let e = m.get(i);
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Nonsingular exactly when `f1` and `f2` do not vanish.
    pub fn is_nonsingular(&self) -> bool {
        !self.model.f1().is_zero() && !self.f2().is_zero()
    }

    /// Ring `K[x, y, z, w]` over the instance's field.
    pub fn coordinate_ring(&self) -> PolyRing<GaloisField> {
        PolyRing::new(self.field(), &["x", "y", "z", "w"], MonomialOrder::Grevlex).unwrap()
    }

    /// `q(x, y, z)` in the coordinate ring.
    pub fn q_poly(&self) -> MPoly<GaloisField> {
        let r = self.coordinate_ring();
        let mons = ["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"];
        mons.iter()
            .zip(&self.a)
            .fold(r.zero(), |acc, (m, c)| acc.add(&r.parse(m).unwrap().scale(c)))
    }

    pub fn p_poly(&self) -> MPoly<GaloisField> {
        let r = self.coordinate_ring();
        r.parse("y^2*z - x^3").unwrap()
            .sub(&r.parse("x*z^2").unwrap().scale(&self.model.a))
            .sub(&r.parse("z^3").unwrap().scale(&self.model.b))
    }

    pub fn quadric(&self) -> MPoly<GaloisField> {
        let r = self.coordinate_ring();
        r.parse("w^2").unwrap().sub(&self.q_poly())
    }

    /// `G(x) = Res_y(y^2 - f, q(x, y, 1))` over the instance's field.
    pub fn g_upoly(&self) -> UPoly<GaloisField> {
        let f = self.field();
        let a = &self.a;
        let cubic = self.model.cubic(self.level());
        let c = UPoly::new(f.clone(), vec![a[5].clone(), a[2].clone(), a[0].clone()]);
        let r = cubic.scale(&a[3]).add(&c);
        let b = UPoly::new(f.clone(), vec![a[4].clone(), a[1].clone()]);
        r.mul(&r).sub(&b.mul(&b).mul(&cubic))
    }

    /// The six points of `V(P, q)` with multiplicities, sorted.
    pub fn six_points(&self) -> Result<SixPoints, CurveError> {
        let g = self.g_upoly();
        if g.is_zero() {
            return Err(CurveError::DegenerateQuadric);
        }
        let tower = self.tower();
        let k = self.level();
        let mut lvl = k;
        for (h, _) in g.factor() {
            lvl = crate::ff_lcm(lvl, k * h.degree().unwrap());
        }
        'outer: loop {
            let inst = self.lift(lvl);
            let f = tower.level(lvl);
            let gl = inst.g_upoly();
            let cubic = inst.model.at(lvl);
            let a = &inst.a;
            let mut pts: Vec<(Point, usize)> = vec![];
            for (h, m) in gl.factor() {
                debug_assert_eq!(h.degree(), Some(1));
                let x0 = f.neg(&h.coeff(0));
                let b0 = f.add(&f.mul(&a[1], &x0), &a[4]);
                if !b0.is_zero() {
                    // a3 f + c + b y = 0 on the curve
                    let r0 = f.add(
                        &f.mul(&a[3], &cubic.rhs(&x0)),
                        &f.add(&f.mul(&a[0], &f.mul(&x0, &x0)), &f.add(&f.mul(&a[2], &x0), &a[5])),
                    );
                    let y0 = f.neg(&f.div(&r0, &b0).unwrap());
                    pts.push((Point::Affine(x0, y0), m));
                    continue;
                }
                let Some(y0) = f.sqrt(&cubic.rhs(&x0)) else {
                    lvl *= 2;
                    continue 'outer;
                };
                if y0.is_zero() {
                    pts.push((Point::Affine(x0, y0), m));
                    continue;
                }
                let mp = local_multiplicity(&inst, &x0, &y0, m);
                let ym = f.neg(&y0);
                let mm = local_multiplicity(&inst, &x0, &ym, m);
                pts.push((Point::Affine(x0.clone(), y0), mp));
                pts.push((Point::Affine(x0, ym), mm));
            }
            let affine: usize = pts.iter().map(|(_, m)| m).sum();
            if affine < 6 {
                pts.push((Point::Infinity, 6 - affine));
            }
            pts.sort();
            return Ok(SixPoints { level: lvl, points: pts });
        }
    }

    /// Canonical JSON form: `{p, k, A, B, a}` with elements as coefficient lists.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p(),
            "k": self.level(),
            "A": self.model.a,
            "B": self.model.b,
            "a": self.a,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, CurveError> {
        let bad = |s: &str| CurveError::Malformed(s.to_string());
        let p = v["p"].as_u64().ok_or_else(|| bad("missing p"))? as u32;
        let elem = |x: &serde_json::Value| -> Result<FieldElement, CurveError> {
            let c: Vec<i64> = match x {
                serde_json::Value::Number(n) => vec![n.as_i64().ok_or_else(|| bad("bad number"))?],
                _ => serde_json::from_value(x.clone()).map_err(|e| bad(&e.to_string()))?,
            };
            if c.is_empty() {
                return Err(bad("empty field element"));
            }
            Ok(FieldElement(c.iter().map(|&n| n.rem_euclid(p as i64) as u32).collect()))
        };
        let tower = FieldTower::shared(p)?;
        let k = v["k"].as_u64().map(|k| k as usize);
        let a = elem(&v["A"])?;
        let b = elem(&v["B"])?;
        let qs: Vec<FieldElement> = v["a"]
            .as_array()
            .ok_or_else(|| bad("missing a"))?
            .iter()
            .map(elem)
            .collect::<Result<_, _>>()?;
        let mut all = vec![&a, &b];
        all.extend(qs.iter());
        if let Some(k) = k {
            if all.iter().any(|e| e.level() != k && e.level() != 1) {
                return Err(bad("element length does not match k"));
            }
        }
        let _ = tower.field(all.iter().map(|e| e.level()).max().unwrap())?;
        let model = EllipticModel::new(p, &a, &b)?;
        Self::new(&model, &qs)
    }
}

// intersection multiplicity of V(q) with the cubic at an affine point with
// y0 != 0, where x - x0 is a local parameter
fn local_multiplicity(inst: &DcecInstance, x0: &FieldElement, y0: &FieldElement, cap: usize) -> usize {
    let f = inst.field();
    let n = cap + 1;
    let cubic = inst.model.at(inst.level());
    // taylor coefficients of the cubic at x0
    let shift = |c: &[FieldElement]| -> Vec<FieldElement> {
        let poly = UPoly::new(f.clone(), c.to_vec());
        let mut out = vec![];
        let mut cur = poly;
        for i in 0..n {
            out.push(cur.eval(x0));
            cur = cur.derivative();
            let _ = i;
        }
        // divide by factorials
        let mut fact = f.one();
        for (i, v) in out.iter_mut().enumerate() {
            if i > 0 {
                fact = f.mul(&fact, &f.from_i64(i as i64));
            }
            *v = f.div(v, &fact).unwrap();
        }
        out
    };
    let a = &inst.a;
    let fs = shift(&[cubic.b.clone(), cubic.a.clone(), f.zero(), f.one()]);
    let cs = shift(&[a[5].clone(), a[2].clone(), a[0].clone()]);
    let bs = shift(&[a[4].clone(), a[1].clone()]);
    // y(t) with y^2 = fs(t), y(0) = y0
    let mut y = vec![y0.clone()];
    let two_y0 = f.add(y0, y0);
    for i in 1..n {
        let mut s = fs[i].clone();
        for j in 1..i {
            s = f.sub(&s, &f.mul(&y[j], &y[i - j]));
        }
        y.push(f.div(&s, &two_y0).unwrap());
    }
    for i in 0..n {
        let mut v = f.add(&f.mul(&a[3], &fs[i]), &cs[i]);
        for j in 0..=i {
            v = f.add(&v, &f.mul(&bs[j], &y[i - j]));
        }
        if !v.is_zero() {
            return i.max(1);
        }
    }
    cap
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_points_lie_on_both_and_sum_to_zero() {
        let c = DcecInstance::from_ints(11, (0, 1), [0, 1, 0, 0, 0, 0]).unwrap();
        let s = c.six_points().unwrap();
        assert_eq!(s.expanded().len(), 6);
        assert!(s.is_reduced());
        assert!(s.points.iter().any(|(p, _)| *p == Point::Infinity));
        let e = c.model.at(s.level);
        assert_eq!(e.sum(&s.expanded()), Point::Infinity);
    }

    #[test]
    fn json_round_trip() {
        let c = DcecInstance::from_ints(13, (5, 0), [1, 2, 3, 4, 5, 6]).unwrap();
        let back = DcecInstance::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
