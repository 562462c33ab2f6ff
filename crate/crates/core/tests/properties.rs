mod common;

use dcec::curves::{supersingular_models, DcecInstance, EllipticModel};
use dcec::enumeration::{
    all_cover_keys, bielliptic_involutions, classify_curve, cover_key, enumerate, is_isomorphic, list_superspecial_for_model,
    CurveType, EnumerateOptions, Involution, TRANSLATION_ORDER,
};
use dcec::ff::{FieldElement, FieldTower, GaloisField};
use dcec::groebner::groebner_basis;
use dcec::linalg;
use dcec::mpoly::{MonomialOrder, PolyRing};
use dcec::{Field, Ring};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn raw_curves(p: u32) -> Vec<DcecInstance> {
    let mut out = vec![];
    for m in supersingular_models(p).unwrap() {
        for s in list_superspecial_for_model(&m).unwrap() {
            out.extend(s.curves.iter().map(|c| c.normalized().descend()));
        }
    }
    out.sort_by(|a, b| (a.level(), &a.a).cmp(&(b.level(), &b.a)));
    out.dedup();
    out
}

#[test]
fn six_points_on_random_nonsingular_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [5u32, 7, 11, 13] {
        let tower = FieldTower::shared(p).unwrap();
        let mut done = 0;
        while done < 100 {
            let k = rng.gen_range(1..=2);
            let f = tower.level(k);
            let Ok(model) = EllipticModel::new(p, &f.random_elem(&mut rng), &f.random_elem(&mut rng)) else { continue };
            let a: Vec<FieldElement> = (0..6).map(|_| f.random_elem(&mut rng)).collect();
            let c = DcecInstance::new(&model, &a).unwrap();
            if !c.is_nonsingular() {
                continue;
            }
            assert!(common::six_points_ok(&c), "{}", c.to_json());
            done += 1;
        }
    }
}

#[test]
fn singular_curve_has_repeated_branch_points() {
    // q = y^2 - ... vanishing doubly: w^2 = (y - x)^2 meets the cubic with multiplicity 2
    let c = DcecInstance::from_ints(11, (0, 1), [1, -2, 0, 1, 0, 0]).unwrap();
    assert!(!c.is_nonsingular());
    if let Ok(six) = c.six_points() {
        assert!(!six.is_reduced());
    }
}

/// Isomorphism through cover keys, checked against `is_isomorphic` on a
/// sample of pairs, must be an equivalence relation.
#[test]
fn isomorphism_is_an_equivalence_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for p in [5u32, 11, 13] {
        let curves = raw_curves(p);
        let keys: Vec<_> = curves.iter().map(|c| cover_key(c, TRANSLATION_ORDER).unwrap()).collect();
        let all: Vec<_> = curves.iter().map(|c| all_cover_keys(c, TRANSLATION_ORDER).unwrap()).collect();
        let n = curves.len();
        let iso = |i: usize, j: usize| all[i].contains(&keys[j]);
        for i in 0..n {
            assert!(iso(i, i));
            for j in 0..n {
                assert_eq!(iso(i, j), iso(j, i), "p = {p}: {i} {j}");
                if iso(i, j) {
                    for k in 0..n {
                        assert!(!iso(j, k) || iso(i, k), "p = {p}: {i} {j} {k}");
                    }
                }
            }
        }
        for _ in 0..10 {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            assert_eq!(is_isomorphic(&curves[i], &curves[j], TRANSLATION_ORDER).unwrap(), iso(i, j));
        }
    }
}

fn is_scalar(f: &GaloisField, m: &[Vec<FieldElement>]) -> bool {
    (0..4).all(|i| (0..4).all(|j| if i == j { m[i][i] == m[0][0] } else { f.is_zero(&m[i][j]) }))
}

#[test]
fn howe_curves_have_commuting_involutions_with_product_of_order_two() {
    for p in [5u32, 11, 13] {
        let tower = FieldTower::shared(p).unwrap();
        let mut howe = 0;
        for c in raw_curves(p) {
            let cc = classify_curve(&c, TRANSLATION_ORDER).unwrap();
            let invs: Vec<Involution> = bielliptic_involutions(&c).unwrap();
            for inv in &invs {
                assert!(inv.preserves(&c));
            }
            let mut found = false;
            for i in 0..invs.len() {
                for j in i + 1..invs.len() {
                    let k = invs[i].level().max(invs[j].level()) * 2;
                    let f = tower.level(k);
                    let a = invs[i].lift(&tower, k).matrix(&f);
                    let b = invs[j].lift(&tower, k).matrix(&f);
                    let ab = linalg::mul(&f, &a, &b);
                    let ba = linalg::mul(&f, &b, &a);
                    if linalg::proportional(&f, &ab.concat(), &ba.concat()).is_some() {
                        assert!(!is_scalar(&f, &ab));
                        assert!(is_scalar(&f, &linalg::mul(&f, &ab, &ab)));
                        found = true;
                    }
                }
            }
            assert_eq!(found, cc.kind == CurveType::Howe, "p = {p}: {}", c.to_json());
            howe += found as usize;
        }
        assert!(howe > 0);
    }
}

#[test]
fn reports_are_deterministic_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let one = enumerate(11, &EnumerateOptions::default()).unwrap();
    let two = enumerate(11, &EnumerateOptions { workers: 3, ..Default::default() }).unwrap();
    let cached = enumerate(11, &EnumerateOptions { checkpoint_dir: Some(dir.path().into()), workers: 2, ..Default::default() }).unwrap();
    let again = enumerate(11, &EnumerateOptions { checkpoint_dir: Some(dir.path().into()), ..Default::default() }).unwrap();
    let text = |r: &dcec::enumeration::EnumerationReport| serde_json::to_string(&r.canonical_json()).unwrap();
    assert_eq!(text(&one), text(&two));
    assert_eq!(text(&one), text(&cached));
    assert_eq!(text(&one), text(&again));
}

fn small_ring() -> PolyRing<dcec::ff::PrimeField> {
    PolyRing::new(dcec::ff::PrimeField::new(7).unwrap(), &["x", "y", "z"], MonomialOrder::Grevlex).unwrap()
}

fn poly_strategy() -> impl Strategy<Value = String> {
    let term = (0i64..7, 0u32..3, 0u32..3, 0u32..3).prop_map(|(c, a, b, d)| format!("{c}*x^{a}*y^{b}*z^{d}"));
    prop::collection::vec(term, 1..5).prop_map(|ts| ts.join(" + "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomial_ring_laws(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        let r = small_ring();
        let (a, b, c) = (r.parse(&a).unwrap(), r.parse(&b).unwrap(), r.parse(&c).unwrap());
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(r.parse(&a.to_string()).unwrap(), a.clone());
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn ideal_members_reduce_to_zero(f in poly_strategy(), g in poly_strategy(), u in poly_strategy(), v in poly_strategy()) {
        let r = small_ring();
        let (f, g, u, v) = (r.parse(&f).unwrap(), r.parse(&g).unwrap(), r.parse(&u).unwrap(), r.parse(&v).unwrap());
        prop_assume!(!f.is_zero() || !g.is_zero());
        let gb = groebner_basis(&[f.clone(), g.clone()]).unwrap();
        prop_assert!(gb.contains(&u.mul(&f).add(&v.mul(&g))));
        prop_assert!(gb.contains(&f) && gb.contains(&g));
    }

    #[test]
    fn extension_field_axioms(a in prop::collection::vec(0u32..7, 3), b in prop::collection::vec(0u32..7, 3)) {
        let f = FieldTower::shared(7).unwrap().level(3);
        let (a, b) = (FieldElement(a), FieldElement(b));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.mul(&f.add(&a, &b), &b), f.add(&f.mul(&a, &b), &f.mul(&b, &b)));
        if !f.is_zero(&a) {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
        prop_assert_eq!(f.pow(&a, 343), a);
    }
}
