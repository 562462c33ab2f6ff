//! Independent checks of the library against direct computations.

mod common;

use std::collections::BTreeSet;

use dcec::curves::{
    f2_fixed_ab, f2_fixed_ab_direct, hasse_witt_numeric, hasse_witt_symbolic, supersingular_count, supersingular_models,
    DcecInstance, EllipticModel,
};
use dcec::ff::{FieldElement, FieldTower};
use dcec::groebner::groebner_basis;
use dcec::mpoly::{MPoly, MonomialOrder, PolyRing};
use dcec::{Field, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_curve(rng: &mut ChaCha8Rng, model: &EllipticModel, k: usize) -> DcecInstance {
    let f = model.tower().level(k);
    let a: Vec<FieldElement> = (0..6).map(|_| f.random_elem(rng)).collect();
    DcecInstance::new(model, &a).unwrap()
}

/// Singular points of `V(P, Q)` via the Jacobian criterion: the ideal of
/// `P`, `Q` and the 2x2 minors of the Jacobian, in each affine chart.
fn singular_by_jacobian(c: &DcecInstance) -> bool {
    let f = c.field();
    let r = PolyRing::new(f.clone(), &["x", "y", "z", "w"], MonomialOrder::Grevlex).unwrap();
    let p = c.p_poly().to_ring(&r).unwrap();
    let q = c.quadric().to_ring(&r).unwrap();
    let dp: Vec<MPoly<_>> = (0..4).map(|i| p.derivative(i)).collect();
    let dq: Vec<MPoly<_>> = (0..4).map(|i| q.derivative(i)).collect();
    let mut gens = vec![p.clone(), q.clone()];
    for i in 0..4 {
        for j in i + 1..4 {
            gens.push(dp[i].mul(&dq[j]).sub(&dp[j].mul(&dq[i])));
        }
    }
    (0..4).any(|chart| {
        let mut g = gens.clone();
        g.push(r.var(chart).sub(&r.one()));
        !groebner_basis(&g).unwrap().is_trivial()
    })
}

#[test]
fn nonsingularity_agrees_with_the_jacobian_criterion() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [5u32, 7] {
        let tower = FieldTower::shared(p).unwrap();
        let mut seen = [0usize; 2];
        for _ in 0..60 {
            let (a, b) = (rng.gen_range(0..p as i64), rng.gen_range(0..p as i64));
            let Ok(model) = EllipticModel::from_ints(p, a, b) else { continue };
            let mut c = random_curve(&mut rng, &model, 1);
            // a few degenerate quadrics to exercise the singular side
            if rng.gen_bool(0.3) {
                let f = tower.level(1);
                c = DcecInstance::new(&model, &[f.zero(), c.a[1].clone(), f.zero(), c.a[3].clone(), f.zero(), f.zero()]).unwrap();
            }
            if c.a.iter().all(|x| x.is_zero()) {
                continue;
            }
            let ns = c.is_nonsingular();
            seen[ns as usize] += 1;
            assert_eq!(ns, !singular_by_jacobian(&c), "{}", c.to_json());
        }
        assert!(seen[0] > 0 && seen[1] > 0, "p = {p}: {seen:?}");
    }
}

/// Supersingular j-invariants from the Legendre family: `lambda` is
/// supersingular when `sum_i binom(m, i)^2 lambda^i = 0`, `m = (p-1)/2`.
fn legendre_supersingular_j(p: u32) -> BTreeSet<FieldElement> {
    let tower = FieldTower::shared(p).unwrap();
    let f = tower.level(2);
    let m = (p - 1) / 2;
    let binom = |n: u32, k: u32| (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128);
    let mut out = BTreeSet::new();
    for l in f.elements() {
        if f.is_zero(&l) || l == f.one() {
            continue;
        }
        let h = (0..=m).fold(f.zero(), |acc, i| {
            let c = f.from_i64((binom(m, i) % p as u128).pow(2) as i64);
            f.add(&acc, &f.mul(&c, &f.pow(&l, i as u64)))
        });
        if !f.is_zero(&h) {
            continue;
        }
        let l2 = f.mul(&l, &l);
        let num = f.mul(&f.from_i64(256), &f.pow(&f.add(&f.sub(&l2, &l), &f.one()), 3));
        let den = f.mul(&l2, &f.pow(&f.sub(&l, &f.one()), 2));
        let j = f.div(&num, &den).unwrap();
        out.insert(tower.descend(&j, tower.minimal_level(&j)).unwrap());
    }
    out
}

#[test]
fn supersingular_models_match_the_legendre_family() {
    for p in [5u32, 7, 11, 13, 17, 19, 23] {
        let ours: BTreeSet<FieldElement> = supersingular_models(p).unwrap().iter().map(|m| m.j_invariant_descended()).collect();
        assert_eq!(ours, legendre_supersingular_j(p), "p = {p}");
    }
}

#[test]
fn supersingular_counts_match_the_class_number_formula() {
    for p in [5u32, 7, 11, 13, 17, 19, 23] {
        let extra = [0, 1, 1, 2][[1, 5, 7, 11].iter().position(|&r| r == p % 12).unwrap()];
        let expected = (p / 12) as usize + extra;
        assert_eq!(supersingular_models(p).unwrap().len(), expected, "p = {p}");
        assert_eq!(supersingular_count(p), expected);
    }
}

/// Every quadric over F_5, scanned directly, against the Groebner solutions
/// defined over F_5.
#[test]
fn brute_force_scan_over_f5() {
    for model in supersingular_models(5).unwrap() {
        let (scanned, solved) = common::brute_force_vs_groebner(&model);
        assert!(!scanned.is_empty());
        assert_eq!(scanned, solved);
    }
}

#[test]
fn symbolic_hasse_witt_specializes_to_numeric() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [5u32, 7, 11, 13] {
        for model in supersingular_models(p).unwrap() {
            let k = 2;
            let f = model.tower().level(k);
            let sym = hasse_witt_symbolic(&f, &model.lift(k));
            for _ in 0..50 {
                let c = random_curve(&mut rng, &model, k).lift(k);
                let num = hasse_witt_numeric(&c);
                for i in 0..4 {
                    for j in 0..4 {
                        assert_eq!(sym[i][j].eval(&c.a), num[i][j], "p = {p}, entry ({i}, {j})");
                    }
                }
            }
        }
    }
}

#[test]
fn hasse_witt_structural_zeros() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in [5u32, 7, 11] {
        let model = EllipticModel::from_ints(p, 1, 1).unwrap();
        let c = random_curve(&mut rng, &model, 1);
        let hw = hasse_witt_numeric(&c);
        for k in 1..4 {
            assert!(hw[0][k].is_zero() && hw[k][0].is_zero());
        }
    }
}

#[test]
fn fixed_ab_f2_agrees_with_direct_computation() {
    for p in [5u32, 7, 11, 13] {
        for model in supersingular_models(p).unwrap() {
            let f = model.tower().level(model.level());
            assert_eq!(f2_fixed_ab(&f, &model.a, &model.b), f2_fixed_ab_direct(&f, &model.a, &model.b), "p = {p}");
        }
    }
}
