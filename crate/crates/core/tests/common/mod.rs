#![allow(dead_code)]

use std::collections::BTreeSet;

use dcec::curves::{DcecInstance, EllipticModel, Point};
use dcec::enumeration::list_superspecial_for_model;
use dcec::ff::{FieldElement, FieldTower, UPoly};
use dcec::Ring;

/// `y^2 z = x^3 + z^3`, `w^2 = x y` over F_11.
pub fn xy_curve() -> DcecInstance {
    DcecInstance::from_ints(11, (0, 1), [0, 1, 0, 0, 0, 0]).unwrap()
}

/// Roots of `x^2 - c` in the tower, at the level where they live.
fn square_roots(tower: &FieldTower, c: &FieldElement) -> Vec<FieldElement> {
    let f = tower.level(c.level());
    let poly = UPoly::new(f.clone(), vec![f.neg(c), f.zero(), f.one()]);
    tower.split(&poly).1
}

/// The two superspecial curves over `y^2 z = x^3 + 5 x z^2 + s z^3` with
/// `s^2 = -2` over F_13: `w^2 = x^2 + r x y + 6 s x z + (8 s + e) y^2 + 3 r s y z + c z^2`
/// with `(r^2, e, c) = (6 s - 1, 3, 8 s - 6)` for the first and
/// `(6 s + 1, -3, -(8 s + 6))` for the second. `root` picks the square root `r`.
pub fn p13_curve(second: bool, root: usize) -> DcecInstance {
    let tower = FieldTower::shared(13).unwrap();
    let s = square_roots(&tower, &tower.from_i64(-2, 1))[0].clone();
    let f2 = tower.level(2);
    let s = tower.lift(&s, 2);
    let six_s = f2.mul(&f2.from_i64(6), &s);
    let eight_s = f2.mul(&f2.from_i64(8), &s);
    let (r2, e, c) = if second {
        (f2.add(&six_s, &f2.one()), f2.from_i64(-3), f2.neg(&f2.add(&eight_s, &f2.from_i64(6))))
    } else {
        (f2.sub(&six_s, &f2.one()), f2.from_i64(3), f2.sub(&eight_s, &f2.from_i64(6)))
    };
    let roots = square_roots(&tower, &r2);
    let k = roots[root].level();
    let f = tower.level(k);
    let up = |x: &FieldElement| tower.lift(x, k);
    let r = roots[root].clone();
    let s = up(&s);
    let a = vec![
        f.one(),
        r.clone(),
        up(&six_s),
        f.add(&up(&eight_s), &up(&e)),
        f.mul(&f.mul(&f.from_i64(3), &r), &s),
        up(&c),
    ];
    let model = EllipticModel::new(13, &tower.from_i64(5, k), &s).unwrap();
    DcecInstance::new(&model, &a).unwrap()
}

/// A representative of a class in an enumeration report, rebuilt as a curve.
pub fn class_curve(p: u32, class: &dcec::enumeration::ClassSummary) -> DcecInstance {
    let model = dcec::curves::model_for_j(p, &class.j).unwrap().descend();
    DcecInstance::new(&model, &class.a).unwrap()
}

fn normalize(v: &[u32], p: u32) -> Vec<u32> {
    let lead = *v.iter().find(|&&x| x != 0).unwrap();
    let inv = (1..p).find(|&i| i * lead % p == 1).unwrap();
    v.iter().map(|&x| x * inv % p).collect()
}

/// Normalized prime-field quadrics giving nonsingular superspecial curves
/// over `model`: by scanning all of `F_p^6`, and from the Groebner solutions.
pub fn brute_force_vs_groebner(model: &EllipticModel) -> (BTreeSet<Vec<u32>>, BTreeSet<Vec<u32>>) {
    let p = model.p;
    assert_eq!(model.level(), 1);
    let mut scanned = BTreeSet::new();
    for n in 1..p.pow(6) {
        let v: Vec<u32> = (0..6).map(|i| n / p.pow(i) % p).collect();
        let a: Vec<FieldElement> = v.iter().map(|&x| FieldElement(vec![x])).collect();
        let c = DcecInstance::new(model, &a).unwrap();
        if c.is_nonsingular() && c.is_superspecial() {
            scanned.insert(normalize(&v, p));
        }
    }
    let mut solved = BTreeSet::new();
    for s in list_superspecial_for_model(model).unwrap() {
        for c in &s.curves {
            let c = c.descend();
            if c.level() == 1 {
                solved.insert(normalize(&c.a.iter().map(|e| e.0[0]).collect::<Vec<_>>(), p));
            }
        }
    }
    (scanned, solved)
}

/// Checks the branch points of a nonsingular curve: six distinct points on
/// both the cubic and `q = 0`, summing to zero.
pub fn six_points_ok(c: &DcecInstance) -> bool {
    let tower = c.tower();
    let Ok(six) = c.six_points() else { return false };
    let pts = six.expanded();
    let curve = c.model.at(six.level);
    let f = tower.level(six.level);
    let q = c.lift(six.level);
    let on_q = |pt: &Point| match pt {
        Point::Infinity => q.a[3].is_zero(),
        Point::Affine(x, y) => {
            let mons = [f.mul(x, x), f.mul(x, y), x.clone(), f.mul(y, y), y.clone(), f.one()];
            f.is_zero(&mons.iter().zip(&q.a).fold(f.zero(), |acc, (m, a)| f.add(&acc, &f.mul(m, a))))
        }
    };
    six.is_reduced()
        && pts.len() == 6
        && pts.iter().all(|pt| curve.contains(pt) && on_q(pt))
        && curve.sum(&pts) == Point::Infinity
}
