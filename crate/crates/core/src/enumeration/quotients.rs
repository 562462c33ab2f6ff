use std::collections::BTreeMap;

use super::EnumerationError;
use crate::curves::{model_for_j, DcecInstance, EllipticModel};
use crate::ff::{FieldElement, FieldTower, GaloisField, UPoly};
use crate::groebner::{groebner_basis, solve_zero_dim};
use crate::linalg::{self, Matrix};
use crate::mpoly::{MPoly, Monomial, MonomialOrder, PolyRing};
use crate::ring::{Field, Ring};

type Mat = Matrix<GaloisField>;
type Poly = MPoly<GaloisField>;

/// A projective involution `X -> X - v h(X)` of P^3 with `h(v) = 2`: it
/// fixes the plane `h = 0` pointwise and negates the point `v`. The center is
/// scaled so that its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Involution {
    pub center: Vec<FieldElement>,
    pub plane: Vec<FieldElement>,
}

impl Involution {
    pub fn new(f: &GaloisField, center: &[FieldElement], plane: &[FieldElement]) -> Option<Self> {
        let i = center.iter().position(|c| !c.is_zero())?;
        let inv = f.inv(&center[i])?;
        let v: Vec<FieldElement> = center.iter().map(|c| f.mul(c, &inv)).collect();
        let hv = dot(f, plane, &v);
        let s = f.div(&f.from_i64(2), &hv)?;
        Some(Involution { center: v, plane: plane.iter().map(|c| f.mul(c, &s)).collect() })
    }

    /// The involution `w -> -w` defining the curve as a cover of its cubic.
    pub fn defining(f: &GaloisField) -> Self {
        let e = |i: i64| f.from_i64(i);
        Involution { center: vec![e(0), e(0), e(0), e(1)], plane: vec![e(0), e(0), e(0), e(2)] }
    }

    pub fn is_defining(&self) -> bool {
        let z = |c: &FieldElement| c.is_zero();
        z(&self.center[0]) && z(&self.center[1]) && z(&self.center[2]) && z(&self.plane[0]) && z(&self.plane[1]) && z(&self.plane[2])
    }

    pub fn level(&self) -> usize {
        self.center[0].level()
    }

    pub fn lift(&self, tower: &FieldTower, k: usize) -> Involution {
        Involution {
            center: self.center.iter().map(|c| tower.lift(c, k)).collect(),
            plane: self.plane.iter().map(|c| tower.lift(c, k)).collect(),
        }
    }

    /// Coefficients moved to the smallest level containing all of them.
    pub fn descend(&self, tower: &FieldTower) -> Involution {
        let k = self.center.iter().chain(&self.plane).fold(1, |acc, e| crate::ff_lcm(acc, tower.minimal_level(e)));
        Involution {
            center: self.center.iter().map(|c| tower.descend(c, k).unwrap()).collect(),
            plane: self.plane.iter().map(|c| tower.descend(c, k).unwrap()).collect(),
        }
    }

    /// The 4x4 matrix acting on column vectors `(x, y, z, w)`.
    pub fn matrix(&self, f: &GaloisField) -> Mat {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let t = f.mul(&self.center[i], &self.plane[j]);
                        if i == j {
                            f.sub(&f.one(), &t)
                        } else {
                            f.neg(&t)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether the two involutions commute in PGL_4.
    pub fn commutes_with(&self, other: &Involution, tower: &FieldTower) -> bool {
        let k = crate::ff_lcm(self.level(), other.level());
        let f = tower.level(k);
        let a = self.lift(tower, k).matrix(&f);
        let b = other.lift(tower, k).matrix(&f);
        let ab: Vec<FieldElement> = linalg::mul(&f, &a, &b).concat();
        let ba: Vec<FieldElement> = linalg::mul(&f, &b, &a).concat();
        linalg::proportional(&f, &ab, &ba).is_some()
    }

    /// Checks that the map squares to the identity, preserves `Q` up to a
    /// scalar and maps `P` into the cubics of the ideal of the curve.
    pub fn preserves(&self, c: &DcecInstance) -> bool {
        let tower = c.tower();
        let k = crate::ff_lcm(c.level(), self.level());
        let c = c.lift(k);
        let inv = self.lift(&tower, k);
        let f = c.field();
        let m = inv.matrix(&f);
        if linalg::mul(&f, &m, &m) != linalg::identity(&f, 4) {
            return false;
        }
        let ring = c.coordinate_ring();
        let q = c.quadric();
        let qt = linear_substitution(&q, &m);
        let mons2 = monomials(&ring, 2);
        if linalg::proportional(&f, &coeff_vector(&qt, &mons2), &coeff_vector(&q, &mons2)).is_none() {
            return false;
        }
        let pt = linear_substitution(&c.p_poly(), &m);
        cubic_combination(&c, &pt).is_some()
    }
}

fn dot(f: &GaloisField, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

/// `poly(m X)`: substitutes the rows of `m` (linear forms) for the
/// coordinates of the polynomial's ring.
pub(crate) fn linear_substitution(poly: &Poly, m: &Mat) -> Poly {
    let ring = poly.ring();
    let images: Vec<Poly> = m
        .iter()
        .map(|row| row.iter().enumerate().fold(ring.zero(), |acc, (j, c)| acc.add(&ring.var(j).scale(c))))
        .collect();
    poly.compose(&images)
}

/// All monomials of degree `d` in the ring's variables, in a fixed order.
pub(crate) fn monomials<R: Ring>(ring: &PolyRing<R>, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == n - 1 {
            cur[i] = d;
            out.push(Monomial::from_exps(cur));
            return;
        }
        for e in (0..=d).rev() {
            cur[i] = e;
            rec(n, d - e, i + 1, cur, out);
        }
        cur[i] = 0;
    }
    let n = ring.nvars();
    let mut out = vec![];
    rec(n, d, 0, &mut vec![0; n], &mut out);
    out
}

pub(crate) fn coeff_vector<R: Ring>(poly: &MPoly<R>, mons: &[Monomial]) -> Vec<R::Elem> {
    mons.iter().map(|m| poly.coeff(m)).collect()
}

/// Writes a cubic as `lambda P + l(x, y, z, w) Q`; returns `(lambda, l)`.
pub(crate) fn cubic_combination(c: &DcecInstance, target: &Poly) -> Option<(FieldElement, Vec<FieldElement>)> {
    let f = c.field();
    let ring = c.coordinate_ring();
    let q = c.quadric();
    let mut basis = vec![c.p_poly()];
    basis.extend((0..4).map(|i| ring.var(i).mul(&q)));
    let mons = monomials(&ring, 3);
    // columns: basis elements, then the target
    let cols: Vec<Vec<FieldElement>> =
        basis.iter().chain(std::iter::once(target)).map(|b| coeff_vector(b, &mons)).collect();
    let m: Mat = (0..mons.len()).map(|r| cols.iter().map(|col| col[r].clone()).collect()).collect();
    let ns = linalg::nullspace(&f, &m, 6);
    let v = ns.into_iter().find(|v| !v[5].is_zero())?;
    let s = f.neg(&f.inv(&v[5]).unwrap());
    let v: Vec<FieldElement> = v.iter().map(|x| f.mul(x, &s)).collect();
    Some((v[0].clone(), v[1..5].to_vec()))
}

// groups the terms of a polynomial in `small ++ [x, y, z, w]` by the
// coordinate monomial
fn split_coordinates(poly: &Poly, small: &PolyRing<GaloisField>) -> BTreeMap<[u32; 4], Poly> {
    let ns = small.nvars();
    let mut parts: BTreeMap<[u32; 4], Vec<(Monomial, FieldElement)>> = BTreeMap::new();
    for (m, c) in poly.terms() {
        let key = [m.get(ns), m.get(ns + 1), m.get(ns + 2), m.get(ns + 3)];
        let e: Vec<u32> = (0..ns).map(|i| m.get(i)).collect();
        parts.entry(key).or_default().push((Monomial::from_exps(&e), c.clone()));
    }
    parts.into_iter().map(|(k, t)| (k, small.from_terms(t))).collect()
}

fn to_small(poly: &Poly, small: &PolyRing<GaloisField>) -> Poly {
    let map: Vec<Option<usize>> = (0..poly.ring().nvars()).map(|i| (i < small.nvars()).then_some(i)).collect();
    poly.map_into(small, &map, |c| c.clone()).expect("no coordinates left")
}

/// Conditions, in the unknowns of `small`, for the linear map with the given
/// coordinate images (polynomials in `small ++ [x, y, z, w]`) to map the
/// curve into itself, assuming it preserves `Q`: `P` composed with the map
/// must reduce modulo `w^2 = q` to a multiple of `P`.
fn fixing_equations(c: &DcecInstance, small: &PolyRing<GaloisField>, big: &PolyRing<GaloisField>, images: &[Poly]) -> Vec<Poly> {
    let ns = small.nvars();
    let coord_map: Vec<Option<usize>> = (0..4).map(|i| Some(ns + i)).collect();
    let p = c.p_poly().map_into(big, &coord_map, |x| x.clone()).unwrap();
    let q = c.q_poly().map_into(big, &coord_map, |x| x.clone()).unwrap();
    let mut all: Vec<Poly> = (0..ns).map(|i| big.var(i)).collect();
    all.extend(images.iter().cloned());
    let pt = p.compose(&all);
    let mut parts = pt.coefficients_in(ns + 3);
    parts.resize(4, big.zero());
    let even = parts[0].add(&parts[2].mul(&q));
    let odd = parts[1].add(&parts[3].mul(&q));
    let mut eqs: Vec<Poly> = split_coordinates(&odd, small).into_values().collect();
    let even = split_coordinates(&even, small);
    let lead = even.get(&[0, 2, 1, 0]).cloned().unwrap_or_else(|| small.zero());
    let pc = split_coordinates(&p, small);
    let keys: std::collections::BTreeSet<[u32; 4]> = even.keys().chain(pc.keys()).copied().collect();
    for key in keys {
        let a = even.get(&key).cloned().unwrap_or_else(|| small.zero());
        let pm = pc.get(&key).and_then(|x| x.constant_value()).unwrap_or_else(|| small.coeffs().zero());
        eqs.push(a.sub(&lead.scale(&pm)));
    }
    eqs.retain(|e| !e.is_zero());
    eqs
}

/// The symmetric matrix `S` with `Q(X) = X^T S X`.
fn quadric_matrix(c: &DcecInstance) -> Mat {
    let f = c.field();
    let half = f.inv(&f.from_i64(2)).unwrap();
    let a = &c.a;
    let h = |x: &FieldElement| f.mul(&f.neg(x), &half);
    let n = |x: &FieldElement| f.neg(x);
    let z = f.zero();
    vec![
        vec![n(&a[0]), h(&a[1]), h(&a[2]), z.clone()],
        vec![h(&a[1]), n(&a[3]), h(&a[4]), z.clone()],
        vec![h(&a[2]), h(&a[4]), n(&a[5]), z.clone()],
        vec![z.clone(), z.clone(), z, f.one()],
    ]
}

/// All bielliptic involutions of the curve (including the defining one),
/// sorted, each at the smallest level containing its coefficients.
///
/// Every such involution is a reflection of P^3 preserving the quadric `Q`:
/// either the orthogonal reflection in a point `v` with `Q(v) != 0`, or, when
/// `Q` is a cone, a reflection centered at its vertex.
pub fn bielliptic_involutions(c: &DcecInstance) -> Result<Vec<Involution>, EnumerationError> {
    let tower = c.tower();
    let f = c.field();
    let s = quadric_matrix(c);
    let mut out: Vec<Involution> = vec![];
    for chart in 0..4 {
        let mut names: Vec<String> = (chart + 1..4).map(|i| format!("v{i}")).collect();
        names.push("t".into());
        let small = ring_of(&f, &names);
        let mut bnames = names.clone();
        bnames.extend(["x", "y", "z", "w"].map(String::from));
        let big = ring_of(&f, &bnames);
        let ns = small.nvars();
        let v: Vec<Poly> = (0..4)
            .map(|i| match i.cmp(&chart) {
                std::cmp::Ordering::Less => big.zero(),
                std::cmp::Ordering::Equal => big.one(),
                std::cmp::Ordering::Greater => big.var(i - chart - 1),
            })
            .collect();
        // S v and Q(v) = v^T S v
        let sv: Vec<Poly> = s
            .iter()
            .map(|row| row.iter().zip(&v).fold(big.zero(), |acc, (c, x)| acc.add(&x.scale(c))))
            .collect();
        let qv = sv.iter().zip(&v).fold(big.zero(), |acc, (a, b)| acc.add(&a.mul(b)));
        // X -> Q(v) X - 2 v (S v . X)
        let svx = (0..4).fold(big.zero(), |acc, i| acc.add(&sv[i].mul(&big.var(ns + i))));
        let two = f.from_i64(2);
        let images: Vec<Poly> =
            (0..4).map(|i| qv.mul(&big.var(ns + i)).sub(&v[i].mul(&svx).scale(&two))).collect();
        let mut eqs = fixing_equations(c, &small, &big, &images);
        eqs.push(small.var(ns - 1).mul(&to_small(&qv, &small)).sub(&small.one()));
        let gb = groebner_basis(&eqs)?;
        if gb.is_trivial() {
            continue;
        }
        for pt in solve_zero_dim(&gb, &tower)?.points {
            let k = pt[0].level();
            let fk = tower.level(k);
            let mut center = vec![fk.zero(); 4];
            center[chart] = fk.one();
            center[chart + 1..].clone_from_slice(&pt[..ns - 1]);
            let sk: Mat = s.iter().map(|r| r.iter().map(|e| tower.lift(e, k)).collect()).collect();
            let plane = linalg::mul_vec(&fk, &sk, &center);
            out.push(Involution::new(&fk, &center, &plane).expect("Q(v) is inverted"));
        }
    }
    out.extend(vertex_reflections(c, &s)?);
    let mut out: Vec<Involution> = out.into_iter().map(|i| i.descend(&tower)).collect();
    out.sort();
    out.dedup();
    for inv in &out {
        if !inv.preserves(c) {
            return Err(EnumerationError::Inconsistent("an involution does not preserve the curve".into()));
        }
    }
    Ok(out)
}

// reflections `X -> X - 2 v0 l(X)` with `l(v0) = 1`, centered at the vertex
// `v0` of a quadric cone
fn vertex_reflections(c: &DcecInstance, s: &Mat) -> Result<Vec<Involution>, EnumerationError> {
    let f = c.field();
    let tower = c.tower();
    let s3: Mat = s[..3].iter().map(|r| r[..3].to_vec()).collect();
    let ker = linalg::nullspace(&f, &s3, 3);
    if ker.len() != 1 {
        return Ok(vec![]);
    }
    let mut v0 = ker[0].clone();
    v0.push(f.zero());
    let piv = v0.iter().position(|x| !x.is_zero()).unwrap();
    let others: Vec<usize> = (0..4).filter(|&j| j != piv).collect();
    let names: Vec<String> = others.iter().map(|j| format!("l{j}")).collect();
    let small = ring_of(&f, &names);
    let mut bnames = names.clone();
    bnames.extend(["x", "y", "z", "w"].map(String::from));
    let big = ring_of(&f, &bnames);
    let inv_p = f.inv(&v0[piv]).unwrap();
    // l_piv = (1 - sum_{j != piv} l_j v0_j) / v0_piv
    let mut l: Vec<Poly> = vec![big.zero(); 4];
    let mut lp = big.one();
    for (t, &j) in others.iter().enumerate() {
        l[j] = big.var(t);
        lp = lp.sub(&big.var(t).scale(&v0[j]));
    }
    l[piv] = lp.scale(&inv_p);
    let lx = (0..4).fold(big.zero(), |acc, i| acc.add(&l[i].mul(&big.var(3 + i))));
    let two = f.from_i64(2);
    let images: Vec<Poly> = (0..4).map(|i| big.var(3 + i).sub(&lx.scale(&f.mul(&two, &v0[i])))).collect();
    let eqs = fixing_equations(c, &small, &big, &images);
    let gb = groebner_basis(&eqs)?;
    let mut out = vec![];
    if gb.is_trivial() {
        return Ok(out);
    }
    for pt in solve_zero_dim(&gb, &tower)?.points {
        let k = pt[0].level();
        let fk = tower.level(k);
        let v: Vec<FieldElement> = v0.iter().map(|e| tower.lift(e, k)).collect();
        let mut plane = vec![fk.zero(); 4];
        let mut lpv = fk.one();
        for (t, &j) in others.iter().enumerate() {
            plane[j] = pt[t].clone();
            lpv = fk.sub(&lpv, &fk.mul(&pt[t], &v[j]));
        }
        plane[piv] = fk.div(&lpv, &v[piv]).unwrap();
        out.push(Involution::new(&fk, &v, &plane).unwrap());
    }
    Ok(out)
}

fn ring_of(f: &GaloisField, names: &[String]) -> PolyRing<GaloisField> {
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    PolyRing::new(f.clone(), &refs, MonomialOrder::Grevlex).unwrap()
}

/// An elliptic quotient of a curve: the curve rewritten as a double cover of
/// a supersingular representative model through one of its involutions.
#[derive(Clone, Debug)]
pub struct QuotientDatum {
    pub involution: Involution,
    /// The representative model of the quotient.
    pub target: EllipticModel,
    /// New coordinates `(X, Y, Z, W)` as linear forms in `(x, y, z, w)`.
    pub transform: Mat,
    /// With `P'` the target cubic, `P'(X, Y, Z) = lambda P + ell Q`.
    pub lambda: FieldElement,
    pub ell: Vec<FieldElement>,
    /// The same curve in the standard shape over `target`, with `q`
    /// normalized so its first nonzero coefficient is 1.
    pub curve: DcecInstance,
}

impl QuotientDatum {
    /// The first three rows of the transform.
    pub fn alpha(&self) -> &[Vec<FieldElement>] {
        &self.transform[..3]
    }
}

fn lift_poly(poly: &Poly, tower: &FieldTower, k: usize) -> Poly {
    let ring = PolyRing::new(tower.level(k), &["x", "y", "z", "w"], MonomialOrder::Grevlex).unwrap();
    let map: Vec<Option<usize>> = (0..4).map(Some).collect();
    poly.map_into(&ring, &map, |c| tower.lift(c, k)).unwrap()
}

fn lift_mat(m: &Mat, tower: &FieldTower, k: usize) -> Mat {
    m.iter().map(|r| r.iter().map(|e| tower.lift(e, k)).collect()).collect()
}

fn block(f: &GaloisField, t: &Mat) -> Mat {
    let mut m = linalg::identity(f, 4);
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = t[i][j].clone();
        }
    }
    m
}

fn coef(poly: &Poly, e: [u32; 4]) -> FieldElement {
    poly.coeff(&Monomial::from_exps(&e))
}

/// Some `u` with `u^4 A = A'` and `u^6 B = B'`, with its level.
pub fn twist_unit(from: &EllipticModel, to: &EllipticModel) -> Option<FieldElement> {
    let tower = from.tower();
    let k = crate::ff_lcm(from.level(), to.level());
    let f = tower.level(k);
    let (a, b) = (tower.lift(&from.a, k), tower.lift(&from.b, k));
    let (a2, b2) = (tower.lift(&to.a, k), tower.lift(&to.b, k));
    if a.is_zero() != a2.is_zero() || b.is_zero() != b2.is_zero() {
        return None;
    }
    let (n, c) = if a.is_zero() {
        (6, f.div(&b2, &b)?)
    } else if b.is_zero() {
        (4, f.div(&a2, &a)?)
    } else {
        // u^2 = u^6 / u^4
        (2, f.div(&f.mul(&b2, &a), &f.mul(&b, &a2))?)
    };
    let mut coeffs = vec![f.zero(); n + 1];
    coeffs[0] = f.neg(&c);
    coeffs[n] = f.one();
    let (lvl, roots) = tower.split(&UPoly::new(f, coeffs));
    let fl = tower.level(lvl);
    let u = roots.into_iter().next()?;
    let ok = fl.mul(&fl.pow(&u, 4), &tower.lift(&a, lvl)) == tower.lift(&a2, lvl)
        && fl.mul(&fl.pow(&u, 6), &tower.lift(&b, lvl)) == tower.lift(&b2, lvl);
    ok.then_some(u)
}

/// The curve moved onto another model with the same j-invariant by
/// `(x, y, z) -> (u^2 x, u^3 y, z)`.
pub fn twist_onto(c: &DcecInstance, to: &EllipticModel) -> Option<DcecInstance> {
    let u = twist_unit(&c.model, to)?;
    let tower = c.tower();
    let k = crate::ff_lcm(u.level(), c.level());
    let f = tower.level(k);
    let u = tower.lift(&u, k);
    let u2 = f.mul(&u, &u);
    let u3 = f.mul(&u2, &u);
    let (i2, i3) = (f.inv(&u2)?, f.inv(&u3)?);
    // q(X / u^2, Y / u^3, Z): monomials x^2, xy, xz, y^2, yz, z^2
    let scales = [f.mul(&i2, &i2), f.mul(&i2, &i3), i2.clone(), f.mul(&i3, &i3), i3, f.one()];
    let a: Vec<FieldElement> = c.a.iter().zip(&scales).map(|(x, s)| f.mul(&tower.lift(x, k), s)).collect();
    DcecInstance::new(&to.lift(k), &a).ok().map(|d| d.normalized().descend())
}

/// The curve as a double cover of its quotient by `inv`, in standard form
/// over the representative model of the quotient's j-invariant.
pub fn quotient_datum(c: &DcecInstance, inv: &Involution) -> Result<QuotientDatum, EnumerationError> {
    let bad = |s: &str| EnumerationError::Inconsistent(format!("quotient by an involution: {s}"));
    let tower = c.tower();
    let k0 = crate::ff_lcm(c.level(), inv.level());
    let c0 = c.lift(k0);
    let iv = inv.lift(&tower, k0);
    let f = tower.level(k0);
    let v = &iv.center;
    let piv = v.iter().position(|x| !x.is_zero()).unwrap();
    let vinv = f.inv(&v[piv]).unwrap();
    // invariant forms vanish at v; the plane form is anti-invariant
    let mut m: Mat = vec![];
    for j in (0..4).filter(|&j| j != piv) {
        let mut row = vec![f.zero(); 4];
        row[j] = f.one();
        row[piv] = f.neg(&f.mul(&v[j], &vinv));
        m.push(row);
    }
    m.push(iv.plane.clone());
    let minv = linalg::inverse(&f, &m).ok_or_else(|| bad("singular change of coordinates"))?;
    let ring = c0.coordinate_ring();
    let p1 = linear_substitution(&c0.p_poly(), &minv);
    let q1 = linear_substitution(&c0.quadric(), &minv);
    for e in [[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]] {
        if !coef(&q1, e).is_zero() {
            return Err(bad("quadric is not invariant"));
        }
    }
    let e = coef(&q1, [0, 0, 0, 2]);
    let einv = f.inv(&e).ok_or_else(|| bad("degenerate quadric"))?;
    // q1 / e = w^2 - qn
    let qn = ring.var(3).mul(&ring.var(3)).sub(&q1.scale(&einv));
    // the cubic in x, y, z through the image of the curve
    let mut basis = vec![p1.clone()];
    basis.extend((0..4).map(|i| ring.var(i).mul(&q1)));
    let wmons: Vec<Monomial> = monomials(&ring, 3).into_iter().filter(|m| m.get(3) > 0).collect();
    let rows: Mat = wmons.iter().map(|mm| basis.iter().map(|b| b.coeff(mm)).collect()).collect();
    let ns = linalg::nullspace(&f, &rows, 5);
    if ns.len() != 1 {
        return Err(bad("plane cubic is not unique"));
    }
    let cubic = basis.iter().zip(&ns[0]).fold(ring.zero(), |acc, (b, x)| acc.add(&b.scale(x)));
    let (flex_level, flex) = flex_point(&cubic)?;
    let k1 = crate::ff_lcm(k0, flex_level);
    let f1 = tower.level(k1);
    let cubic = lift_poly(&cubic, &tower, k1);
    let qn = lift_poly(&qn, &tower, k1);
    let flex: Vec<FieldElement> = flex.iter().map(|x| tower.lift(x, k1)).collect();
    let r1 = cubic.ring().clone();
    // tangent at the flex becomes Z, the flex becomes (0 : 1 : 0)
    let tangent: Vec<FieldElement> = (0..3).map(|i| cubic.derivative(i).eval(&[flex[0].clone(), flex[1].clone(), flex[2].clone(), f1.zero()])).collect();
    let fp = flex.iter().position(|x| !x.is_zero()).unwrap();
    let finv = f1.inv(&flex[fp]).unwrap();
    let ycoord: Vec<FieldElement> = (0..3).map(|i| if i == fp { f1.one() } else { f1.zero() }).collect();
    let xcoord = (0..3)
        .filter(|&j| j != fp)
        .map(|j| {
            let mut row = vec![f1.zero(); 3];
            row[j] = f1.one();
            row[fp] = f1.neg(&f1.mul(&flex[j], &finv));
            row
        })
        .find(|row| linalg::proportional(&f1, row, &tangent).is_none())
        .ok_or_else(|| bad("no coordinate at the flex"))?;
    let mut t: Mat = vec![xcoord, ycoord, tangent];
    let apply = |poly: &Poly, t: &Mat| -> Result<Poly, EnumerationError> {
        let tinv = linalg::inverse(&f1, t).ok_or_else(|| bad("singular transform"))?;
        Ok(linear_substitution(poly, &block(&f1, &tinv)))
    };
    let normalize = |poly: Poly| -> Result<Poly, EnumerationError> {
        let c = coef(&poly, [0, 2, 1, 0]);
        Ok(poly.scale(&f1.inv(&c).ok_or_else(|| bad("no y^2 z term"))?))
    };
    let g = normalize(apply(&cubic, &t)?)?;
    for e in [[0, 3, 0, 0], [1, 2, 0, 0], [2, 1, 0, 0]] {
        if !coef(&g, e).is_zero() {
            return Err(bad("flex is not at infinity"));
        }
    }
    // scale so that the x^3 coefficient is -1
    let a3 = coef(&g, [3, 0, 0, 0]);
    let sa = vec![
        vec![f1.neg(&a3), f1.zero(), f1.zero()],
        vec![f1.zero(), a3.clone(), f1.zero()],
        vec![f1.zero(), f1.zero(), f1.one()],
    ];
    t = linalg::mul(&f1, &sa, &t);
    let g = normalize(apply(&cubic, &t)?)?;
    if coef(&g, [3, 0, 0, 0]) != f1.from_i64(-1) {
        return Err(bad("scaling failed"));
    }
    // complete the square in y
    let half = f1.inv(&f1.from_i64(2)).unwrap();
    let a1 = coef(&g, [1, 1, 1, 0]);
    let a3 = coef(&g, [0, 1, 2, 0]);
    let sb = vec![
        vec![f1.one(), f1.zero(), f1.zero()],
        vec![f1.mul(&a1, &half), f1.one(), f1.mul(&a3, &half)],
        vec![f1.zero(), f1.zero(), f1.one()],
    ];
    t = linalg::mul(&f1, &sb, &t);
    let g = normalize(apply(&cubic, &t)?)?;
    // remove the x^2 z term
    let s2 = f1.neg(&coef(&g, [2, 0, 1, 0]));
    let sc = vec![
        vec![f1.one(), f1.zero(), f1.div(&s2, &f1.from_i64(3)).unwrap()],
        vec![f1.zero(), f1.one(), f1.zero()],
        vec![f1.zero(), f1.zero(), f1.one()],
    ];
    t = linalg::mul(&f1, &sc, &t);
    let g = normalize(apply(&cubic, &t)?)?;
    let a = f1.neg(&coef(&g, [1, 0, 2, 0]));
    let b = f1.neg(&coef(&g, [0, 0, 3, 0]));
    let model = EllipticModel::new(c.p(), &a, &b).map_err(|_| bad("quotient cubic is singular"))?;
    let expected = r1.parse("y^2*z - x^3").unwrap().sub(&r1.parse("x*z^2").unwrap().scale(&a)).sub(&r1.parse("z^3").unwrap().scale(&b));
    if g != expected {
        return Err(bad("not in short Weierstrass form"));
    }
    // move onto the representative model
    let j = model.j_invariant();
    let jd = tower.descend(&j, tower.minimal_level(&j)).unwrap();
    let target = model_for_j(c.p(), &jd)?.descend();
    let u = twist_unit(&model, &target).ok_or_else(|| bad("no twist onto the representative"))?;
    let k2 = crate::ff_lcm(k1, u.level());
    let f2 = tower.level(k2);
    let u = tower.lift(&u, k2);
    let u2 = f2.mul(&u, &u);
    let su = vec![
        vec![u2.clone(), f2.zero(), f2.zero()],
        vec![f2.zero(), f2.mul(&u2, &u), f2.zero()],
        vec![f2.zero(), f2.zero(), f2.one()],
    ];
    let t = linalg::mul(&f2, &su, &lift_mat(&t, &tower, k2));
    let tinv = linalg::inverse(&f2, &t).unwrap();
    let qf = linear_substitution(&lift_poly(&qn, &tower, k2), &block(&f2, &tinv));
    let mons = ["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"];
    let ra = qf.ring().clone();
    let acoef: Vec<FieldElement> = mons.iter().map(|s| ra.parse(s).unwrap().lm().map(|m| qf.coeff(m)).unwrap()).collect();
    let standard = DcecInstance::new(&target.lift(k2), &acoef)?;
    // full transform: (X, Y, Z) = t (first three primed coordinates), W = plane
    let transform = linalg::mul(&f2, &block(&f2, &t), &lift_mat(&m, &tower, k2));
    // re-verify by expansion: P'(alpha X) = lambda P + ell Q, Q' o G = e Q
    let c2 = c.lift(k2);
    let pstd = lift_poly(&standard.p_poly(), &tower, k2);
    let back = linear_substitution(&pstd, &transform);
    let (lambda, ell) = cubic_combination(&c2, &back).ok_or_else(|| bad("target cubic is not in the ideal"))?;
    if lambda.is_zero() {
        return Err(bad("zero multiple of P"));
    }
    let qback = linear_substitution(&lift_poly(&standard.quadric(), &tower, k2), &transform);
    let mons2 = monomials(qback.ring(), 2);
    if linalg::proportional(&f2, &coeff_vector(&qback, &mons2), &coeff_vector(&lift_poly(&c2.quadric(), &tower, k2), &mons2)).is_none() {
        return Err(bad("quadric does not match"));
    }
    Ok(QuotientDatum {
        involution: inv.clone(),
        target,
        transform,
        lambda,
        ell,
        curve: standard.normalized().descend(),
    })
}

// a flex of a smooth plane cubic in x, y, z (the ring's fourth variable
// unused), from the intersection with the Hessian in the chart z = 1
fn flex_point(cubic: &Poly) -> Result<(usize, Vec<FieldElement>), EnumerationError> {
    let ring = cubic.ring();
    let f = ring.coeffs().clone();
    let tower = FieldTower::shared(f.p()).map_err(crate::curves::CurveError::from)?;
    let d: Vec<Vec<Poly>> = (0..3).map(|i| (0..3).map(|j| cubic.derivative(i).derivative(j)).collect()).collect();
    let hess = d[0][0].mul(&d[1][1].mul(&d[2][2]).sub(&d[1][2].mul(&d[2][1])))
        .sub(&d[0][1].mul(&d[1][0].mul(&d[2][2]).sub(&d[1][2].mul(&d[2][0]))))
        .add(&d[0][2].mul(&d[1][0].mul(&d[2][1]).sub(&d[1][1].mul(&d[2][0]))));
    let r2 = PolyRing::new(f.clone(), &["x", "y"], MonomialOrder::Grevlex).unwrap();
    let aff = |p: &Poly| {
        let s = p.specialize(&[None, None, Some(f.one()), Some(f.zero())]);
        s.map_into(&r2, &[Some(0), Some(1), None, None], |c| c.clone()).unwrap()
    };
    let gb = groebner_basis(&[aff(cubic), aff(&hess)])?;
    let sol = solve_zero_dim(&gb, &tower)?;
    let pt = sol.points.first().ok_or_else(|| EnumerationError::Inconsistent("cubic has no affine flex".into()))?;
    let k = pt[0].level();
    Ok((k, vec![pt[0].clone(), pt[1].clone(), tower.level(k).one()]))
}

/// Every elliptic quotient of the curve other than the defining one.
pub fn elliptic_quotients(c: &DcecInstance) -> Result<Vec<QuotientDatum>, EnumerationError> {
    bielliptic_involutions(c)?
        .iter()
        .filter(|i| !i.is_defining())
        .map(|i| quotient_datum(c, i))
        .collect()
}

// forms in x, y, z, w with polynomial coefficients, keyed by exponents
type Forms = BTreeMap<[u32; 4], Poly>;

fn forms_mul(a: &Forms, b: &Forms) -> Forms {
    let mut out: Forms = BTreeMap::new();
    for (ea, pa) in a {
        for (eb, pb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
            let t = pa.mul(pb);
            match out.get_mut(&e) {
                Some(v) => *v = v.add(&t),
                None => {
                    out.insert(e, t);
                }
            }
        }
    }
    out
}

fn forms_add(a: &Forms, b: &Forms, scale: &FieldElement) -> Forms {
    let mut out = a.clone();
    for (e, p) in b {
        let t = p.scale(scale);
        match out.get_mut(e) {
            Some(v) => *v = v.add(&t),
            None => {
                out.insert(*e, t);
            }
        }
    }
    out
}

fn forms_of(poly: &Poly, small: &PolyRing<GaloisField>) -> Forms {
    poly.terms()
        .iter()
        .map(|(m, c)| ([m.get(0), m.get(1), m.get(2), m.get(3)], small.constant(c.clone())))
        .fold(BTreeMap::new(), |acc, (e, t)| forms_add(&acc, &BTreeMap::from([(e, t)]), &small.coeffs().one()))
}

/// Generators of the ideal whose points are the linear forms `alpha` and
/// `l = a x + b y + c z + d w` with `P'(alpha (x, y, z, w)) = P + l Q`, `P'`
/// the cubic of `target`, together with `s t - 1` for the coefficient
/// `s` of `l` with index `s_index`. Variables: `alpha11..alpha34, a, b, c, d, t`.
pub fn second_quotient_ideal(c: &DcecInstance, target: &EllipticModel, s_index: usize) -> Vec<Poly> {
    let k = crate::ff_lcm(c.level(), target.level());
    let c = c.lift(k);
    let target = target.lift(k);
    let f = c.field();
    let mut names: Vec<String> = vec![];
    for i in 1..=3 {
        for j in 1..=4 {
            names.push(format!("alpha{i}{j}"));
        }
    }
    names.extend(["a", "b", "c", "d", "t"].map(String::from));
    let small = ring_of(&f, &names);
    let unit = |j: usize| {
        let mut e = [0u32; 4];
        e[j] = 1;
        e
    };
    let linear = |off: usize| -> Forms { (0..4).map(|j| (unit(j), small.var(off + j))).collect() };
    let (x, y, z) = (linear(0), linear(4), linear(8));
    let one = f.one();
    let y2z = forms_mul(&forms_mul(&y, &y), &z);
    let x3 = forms_mul(&forms_mul(&x, &x), &x);
    let xz2 = forms_mul(&forms_mul(&x, &z), &z);
    let z3 = forms_mul(&forms_mul(&z, &z), &z);
    let mut lhs = forms_add(&y2z, &x3, &f.neg(&one));
    lhs = forms_add(&lhs, &xz2, &f.neg(&target.a));
    lhs = forms_add(&lhs, &z3, &f.neg(&target.b));
    let lq = forms_mul(&linear(12), &forms_of(&c.quadric(), &small));
    let mut diff = forms_add(&lhs, &forms_of(&c.p_poly(), &small), &f.neg(&one));
    diff = forms_add(&diff, &lq, &f.neg(&one));
    let mut eqs: Vec<Poly> = diff.into_values().filter(|e| !e.is_zero()).collect();
    eqs.push(small.var(12 + s_index).mul(&small.var(16)).sub(&small.one()));
    eqs
}
/// Whether the curve has an elliptic quotient of degree 2 onto `target`
/// other than its defining one, decided by the ideals of
/// [`second_quotient_ideal`].
pub fn has_second_quotient_on(c: &DcecInstance, target: &EllipticModel) -> Result<bool, EnumerationError> {
    for s in 0..4 {
        if !groebner_basis(&second_quotient_ideal(c, target, s))?.is_trivial() {
            return Ok(true);
        }
    }
    Ok(false)
}
