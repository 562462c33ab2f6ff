use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use super::{groebner_basis, GroebnerBasis, GroebnerError};
use crate::ff::{FieldElement, FieldTower, FiniteField, GaloisField, UPoly};
use crate::mpoly::{MPoly, Monomial, PolyRing};
use crate::ring::{Field, Ring};

/// Points of a zero-dimensional variety over the algebraic closure.
///
/// Each point lists its coordinates in the smallest tower level reached by
/// the solver for that point (a multiple of the base field's level).
#[derive(Clone, Debug)]
pub struct ZeroDimSolution {
    /// Dimension of the quotient ring.
    pub dimension: usize,
    pub points: Vec<Vec<FieldElement>>,
}

impl ZeroDimSolution {
    /// The ideal is radical exactly when there are as many distinct points as
    /// the quotient dimension.
    pub fn is_radical(&self) -> bool {
        self.points.len() == self.dimension
    }
}

const SHAPE_ATTEMPTS: u64 = 6;

/// All points of `V(I)` for a zero-dimensional ideal given by a Groebner
/// basis. Uses a random separating linear form and the multiplication
/// matrices; if no attempt gives a squarefree minimal polynomial of full
/// degree, falls back to splitting on one variable at a time.
pub fn solve_zero_dim<F: FiniteField>(gb: &GroebnerBasis<F>, tower: &FieldTower) -> Result<ZeroDimSolution, GroebnerError> {
    let std = gb.standard_monomials()?;
    let dimension = std.len();
    if dimension == 0 {
        return Ok(ZeroDimSolution { dimension, points: vec![] });
    }
    let mut points = match shape_solve(gb, &std, tower) {
        Some(p) => p,
        None => split_solve(gb, tower)?,
    };
    points.sort_by(|a, b| (a[0].level(), a).cmp(&(b[0].level(), b)));
    for pt in &points {
        if !vanishes(gb, pt, tower) {
            return Err(GroebnerError::Inconsistent);
        }
    }
    Ok(ZeroDimSolution { dimension, points })
}

fn vanishes<F: FiniteField>(gb: &GroebnerBasis<F>, pt: &[FieldElement], tower: &FieldTower) -> bool {
    let k = pt[0].level();
    let l = tower.level(k);
    let f = gb.ring().coeffs();
    gb.polys().iter().all(|g| {
        let mut acc = l.zero();
        for (m, c) in g.terms() {
            let mut t = tower.lift(&f.to_element(c), k);
            for (i, x) in pt.iter().enumerate() {
                let e = m.get(i);
                if e > 0 {
                    t = l.mul(&t, &l.pow(x, e as u64));
                }
            }
            acc = l.add(&acc, &t);
        }
        l.is_zero(&acc)
    })
}

struct Mult<F: Field> {
    // table[var][basis index] = sparse NF(x_var * b)
    table: Vec<Vec<Vec<(usize, F::Elem)>>>,
    one: usize,
    dim: usize,
}

fn mult_tables<F: Field>(gb: &GroebnerBasis<F>, std: &[Monomial]) -> Mult<F> {
    let ring = gb.ring();
    let r = ring.coeffs();
    let index: FxHashMap<Monomial, usize> = std.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let table = (0..ring.nvars())
        .map(|v| {
            std.iter()
                .map(|b| {
                    let m = b.mul(&Monomial::var(v));
                    match index.get(&m) {
                        Some(&i) => vec![(i, r.one())],
                        None => gb
                            .normal_form(&ring.term(m, r.one()))
                            .terms()
                            .iter()
                            .map(|(t, c)| (index[t], c.clone()))
                            .collect(),
                    }
                })
                .collect()
        })
        .collect();
    Mult { table, one: index[&Monomial::one()], dim: std.len() }
}

fn apply<F: Field>(r: &F, mult: &Mult<F>, coeffs: &[F::Elem], v: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![r.zero(); mult.dim];
    for (var, c) in coeffs.iter().enumerate() {
        if r.is_zero(c) {
            continue;
        }
        for (b, vb) in v.iter().enumerate() {
            if r.is_zero(vb) {
                continue;
            }
            let s = r.mul(c, vb);
            for (i, x) in &mult.table[var][b] {
                let t = r.mul(&s, x);
                r.add_assign(&mut out[*i], &t);
            }
        }
    }
    out
}

// incremental echelon form remembering how rows combine the inputs
struct Echelon<F: Field> {
    rows: Vec<(usize, Vec<F::Elem>, Vec<F::Elem>)>,
}

impl<F: Field> Echelon<F> {
    /// Reduces `v` (input number `j` when pushed); returns the reduced vector
    /// and the combination of earlier inputs subtracted.
    fn reduce(&self, r: &F, mut v: Vec<F::Elem>, mut comb: Vec<F::Elem>) -> (Vec<F::Elem>, Vec<F::Elem>) {
        for (p, row, rc) in &self.rows {
            if r.is_zero(&v[*p]) {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !r.is_zero(y) {
                    *x = r.sub(x, &r.mul(&f, y));
                }
            }
            if comb.len() < rc.len() {
                comb.resize(rc.len(), r.zero());
            }
            for (x, y) in comb.iter_mut().zip(rc) {
                if !r.is_zero(y) {
                    *x = r.sub(x, &r.mul(&f, y));
                }
            }
        }
        (v, comb)
    }

    fn push(&mut self, r: &F, v: Vec<F::Elem>, comb: Vec<F::Elem>) {
        let p = v.iter().position(|x| !r.is_zero(x)).unwrap();
        let inv = r.inv(&v[p]).unwrap();
        let v = v.iter().map(|x| r.mul(x, &inv)).collect();
        let comb = comb.iter().map(|x| r.mul(x, &inv)).collect();
        self.rows.push((p, v, comb));
    }
}

fn shape_solve<F: FiniteField>(gb: &GroebnerBasis<F>, std: &[Monomial], tower: &FieldTower) -> Option<Vec<Vec<FieldElement>>> {
    let ring = gb.ring();
    let r = ring.coeffs();
    let n = ring.nvars();
    let mult = mult_tables(gb, std);
    let d = mult.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1_5c0 + d as u64);
    for attempt in 0..SHAPE_ATTEMPTS {
        let u: Vec<F::Elem> = (0..n)
            .map(|i| if attempt == 0 && n == 1 && i == 0 { r.one() } else { r.random_elem(&mut rng) })
            .collect();
        let mut ech = Echelon::<F> { rows: vec![] };
        let mut v = vec![r.zero(); d];
        v[mult.one] = r.one();
        let mut minpoly = None;
        for j in 0..=d {
            let mut e = vec![r.zero(); j + 1];
            e[j] = r.one();
            let (red, comb) = ech.reduce(r, v.clone(), e);
            if red.iter().all(|x| r.is_zero(x)) {
                minpoly = Some(UPoly::new(r.clone(), comb));
                break;
            }
            ech.push(r, red, comb);
            v = apply(r, &mult, &u, &v);
        }
        let m = minpoly?;
        if m.degree() != Some(d) || m.gcd(&m.derivative()).degree() != Some(0) {
            continue;
        }
        // coordinates as polynomials in u
        let coords: Vec<UPoly<F>> = (0..n)
            .map(|var| {
                let w = apply(r, &mult, &one_hot(r, n, var), &unit(r, d, mult.one));
                let (red, comb) = ech.reduce(r, w, vec![r.zero(); d]);
                debug_assert!(red.iter().all(|x| r.is_zero(x)));
                UPoly::new(r.clone(), comb.iter().map(|c| r.neg(c)).collect())
            })
            .collect();
        let mut points = vec![];
        for (h, _) in m.factor() {
            points.extend(points_over_factor(&h, &coords, tower));
        }
        return Some(points);
    }
    None
}

fn one_hot<F: Field>(r: &F, n: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![r.zero(); n];
    v[i] = r.one();
    v
}

fn unit<F: Field>(r: &F, n: usize, i: usize) -> Vec<F::Elem> {
    one_hot(r, n, i)
}

fn lift_upoly<F: FiniteField>(h: &UPoly<F>, l: &GaloisField, tower: &FieldTower) -> UPoly<GaloisField> {
    let f = h.field();
    UPoly::new(l.clone(), h.coeffs().iter().map(|c| tower.lift(&f.to_element(c), l.k())).collect())
}

// the roots of an irreducible factor over F, with coordinates g_i(root)
fn points_over_factor<F: FiniteField>(h: &UPoly<F>, coords: &[UPoly<F>], tower: &FieldTower) -> Vec<Vec<FieldElement>> {
    let f = h.field();
    let deg = h.degree().unwrap();
    let lvl = f.level() * deg;
    let l = tower.level(lvl);
    let hl = lift_upoly(h, &l, tower);
    let theta = hl.roots()[0].clone();
    let q = BigUint::from(f.characteristic()).pow(f.level() as u32);
    let reduced: Vec<UPoly<GaloisField>> = coords.iter().map(|g| lift_upoly(&g.rem(h), &l, tower)).collect();
    let mut out = vec![];
    let mut t = theta;
    for _ in 0..deg {
        out.push(reduced.iter().map(|g| g.eval(&t)).collect());
        t = l.pow_big(&t, &q);
    }
    out
}

// back-substitution: split on the minimal polynomial of one variable
fn split_solve<F: FiniteField>(gb: &GroebnerBasis<F>, tower: &FieldTower) -> Result<Vec<Vec<FieldElement>>, GroebnerError> {
    let ring = gb.ring();
    let n = ring.nvars();
    let r = ring.coeffs();
    let std = gb.standard_monomials()?;
    if std.is_empty() {
        return Ok(vec![]);
    }
    let mult = mult_tables(gb, &std);
    let var = n - 1;
    // minimal polynomial of x_var
    let mut ech = Echelon::<F> { rows: vec![] };
    let mut v = unit(r, mult.dim, mult.one);
    let sel = one_hot(r, n, var);
    let mut m = None;
    for j in 0..=mult.dim {
        let (red, comb) = ech.reduce(r, v.clone(), one_hot(r, j + 1, j));
        if red.iter().all(|x| r.is_zero(x)) {
            m = Some(UPoly::new(r.clone(), comb));
            break;
        }
        ech.push(r, red, comb);
        v = apply(r, &mult, &sel, &v);
    }
    let m = m.expect("minimal polynomial exists");
    let mut out = vec![];
    for (h, _) in m.factor() {
        let lvl = r.level() * h.degree().unwrap();
        let l = tower.level(lvl);
        let lring: PolyRing<GaloisField> = ring.with_coeffs(l.clone());
        let lift = |p: &MPoly<F>| -> MPoly<GaloisField> {
            lring.from_terms(p.terms().iter().map(|(mm, c)| (*mm, tower.lift(&r.to_element(c), lvl))).collect::<Vec<_>>())
        };
        let base: Vec<MPoly<GaloisField>> = gb.polys().iter().map(lift).collect();
        let hl = lift_upoly(&h, &l, tower);
        let theta = hl.roots()[0].clone();
        let q = BigUint::from(r.characteristic()).pow(r.level() as u32);
        let mut t = theta;
        for _ in 0..h.degree().unwrap() {
            let mut gens = base.clone();
            gens.push(lring.var(var).sub(&lring.constant(t.clone())));
            let sub = groebner_basis(&gens)?;
            if n == 1 {
                out.push(vec![t.clone()]);
            } else {
                // remaining variables; x_var is now linear
                let rest = drop_last(&sub, t.clone());
                for mut pt in solve_zero_dim(&rest, tower)?.points {
                    let k = pt[0].level();
                    pt.push(tower.lift(&t, k));
                    out.push(pt);
                }
            }
            t = l.pow_big(&t, &q);
        }
    }
    Ok(out)
}

// substitutes the known value of the last variable and drops it from the ring
fn drop_last(gb: &GroebnerBasis<GaloisField>, value: FieldElement) -> GroebnerBasis<GaloisField> {
    let ring = gb.ring();
    let n = ring.nvars();
    let names: Vec<&str> = ring.vars()[..n - 1].iter().map(|s| s.as_str()).collect();
    let small = PolyRing::new(ring.coeffs().clone(), &names, ring.order()).unwrap();
    let mut vals: Vec<Option<FieldElement>> = vec![None; n];
    vals[n - 1] = Some(value);
    let map: Vec<Option<usize>> = (0..n).map(|i| (i + 1 < n).then_some(i)).collect();
    let gens: Vec<MPoly<GaloisField>> = gb
        .polys()
        .iter()
        .map(|g| g.specialize(&vals).map_into(&small, &map, |c| c.clone()).unwrap())
        .filter(|g| !g.is_zero())
        .collect();
    groebner_basis(&gens).expect("nonempty generator list")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::PrimeField;
    use crate::mpoly::MonomialOrder;

    #[test]
    fn circle_and_line_over_f7() {
        let fp = PrimeField::new(7).unwrap();
        let t = FieldTower::new(7).unwrap();
        let r = PolyRing::new(fp, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        // x^2 + y^2 = 1, x = 3y: 10 y^2 = 1 -> y^2 = 5 (non-square mod 7) -> points over F_49
        let gb = groebner_basis(&[r.parse("x^2 + y^2 - 1").unwrap(), r.parse("x - 3*y").unwrap()]).unwrap();
        let sol = solve_zero_dim(&gb, &t).unwrap();
        assert_eq!(sol.dimension, 2);
        assert!(sol.is_radical());
        assert!(sol.points.iter().all(|p| p[0].level() == 2));
    }

    #[test]
    fn non_radical_ideal() {
        let fp = PrimeField::new(11).unwrap();
        let t = FieldTower::new(11).unwrap();
        let r = PolyRing::new(fp, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        let gb = groebner_basis(&[r.parse("x^2").unwrap(), r.parse("y^2 - y").unwrap()]).unwrap();
        let sol = solve_zero_dim(&gb, &t).unwrap();
        assert_eq!(sol.dimension, 4);
        assert_eq!(sol.points.len(), 2);
        assert!(!sol.is_radical());
    }

    #[test]
    fn all_points_of_a_finite_set() {
        let fp = PrimeField::new(13).unwrap();
        let t = FieldTower::new(13).unwrap();
        let r = PolyRing::new(fp, &["x", "y", "z"], MonomialOrder::Grevlex).unwrap();
        let gens = ["x^2 + y + z - 1", "x + y^2 + z - 1", "x + y + z^2 - 1"].map(|s| r.parse(s).unwrap());
        let gb = groebner_basis(&gens).unwrap();
        let sol = solve_zero_dim(&gb, &t).unwrap();
        // z^2 (z - 1)^2 (z^2 + 2z - 1) in lex: three double points and two simple ones
        assert_eq!(sol.dimension, 8);
        assert_eq!(sol.points.len(), 5);
    }
}
