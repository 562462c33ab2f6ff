use std::collections::HashMap;
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::CurveError;
use crate::ff::{FieldElement, FieldTower, FiniteField, PrimeField};
use crate::mpoly::{bezout_matrix, det_expand, discriminant, MPoly, Monomial, MonomialOrder, PolyRing};
use crate::ring::{Integers, Ring};

/// Variables of the invariant polynomials `f2`, `f3`, in this order.
pub const F2_VARS: [&str; 8] = ["A", "B", "a0", "a1", "a2", "a3", "a4", "a5"];

const G_VARS: [&str; 9] = ["x", "A", "B", "a0", "a1", "a2", "a3", "a4", "a5"];

/// `Z[A, B, a0..a5]` with grevlex.
pub fn invariant_ring() -> PolyRing<Integers> {
    PolyRing::new(Integers, &F2_VARS, MonomialOrder::Grevlex).unwrap()
}

/// `f3` in a ring containing the variables `A, B, a0..a5`.
pub fn f3_poly<R: Ring>(ring: &PolyRing<R>) -> MPoly<R> {
    ring.parse("A*a1^2*a3*a4 - B*a1^3*a3 - a0*a1*a4^2 - a1^3*a5 + a1^2*a2*a4 + a3*a4^3")
        .expect("ring has the invariant variables")
}

/// `G(x) = (a3 f + a0 x^2 + a2 x + a5)^2 - (a1 x + a4)^2 f` with
/// `f = x^3 + A x + B`, in `Z[x, A, B, a0..a5]`. This is the resultant in
/// `y` of `y^2 - f` and `q(x, y, 1)`.
pub fn g_poly() -> MPoly<Integers> {
    let r = PolyRing::new(Integers, &G_VARS, MonomialOrder::Grevlex).unwrap();
    let f = r.parse("x^3 + A*x + B").unwrap();
    let rr = r.parse("a3").unwrap().mul(&f).add(&r.parse("a0*x^2 + a2*x + a5").unwrap());
    let b = r.parse("a1*x + a4").unwrap();
    rr.mul(&rr).sub(&b.mul(&b).mul(&f))
}

fn to_invariant_ring(p: &MPoly<Integers>) -> MPoly<Integers> {
    p.to_ring(&invariant_ring()).expect("x has been eliminated")
}

fn compute_f2() -> MPoly<Integers> {
    let g = g_poly();
    let bez = bezout_matrix(&g, &g.derivative(0), 0);
    // det Bez(G, G') = Res(G, G') lc(G) = disc(G) lc(G)^2 for deg G = 6, lc(G) = a3^2
    let det = det_expand(&bez);
    let a3_4 = g.ring().parse("a3^4").unwrap();
    let delta = det.exact_div(&a3_4).expect("a3^4 divides the Bezout determinant");
    let f3 = f3_poly(g.ring());
    let f2 = delta.exact_div(&f3.mul(&f3)).expect("f3^2 divides the discriminant");
    to_invariant_ring(&f2)
}

/// The discriminant of `G` computed independently through the Sylvester
/// matrix and fraction-free elimination (slow; for cross-checks).
pub fn delta_char0_sylvester() -> MPoly<Integers> {
    let g = g_poly();
    to_invariant_ring(&discriminant(&g, 0).expect("G has positive degree"))
}

/// The characteristic-zero `f2 = disc_x(G) / f3^2` in `Z[A, B, a0..a5]`.
pub fn f2_char0() -> &'static MPoly<Integers> {
    static F2: OnceLock<MPoly<Integers>> = OnceLock::new();
    F2.get_or_init(compute_f2)
}

/// `f2` read from `dir/f2_char0.json` when present (and then also used for
/// this process), otherwise computed and written there.
pub fn f2_char0_cached(dir: &Path) -> Result<MPoly<Integers>, CurveError> {
    let path = dir.join("f2_char0.json");
    if let Ok(text) = std::fs::read_to_string(&path) {
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| CurveError::Cache(e.to_string()))?;
        let f = MPoly::from_json(&invariant_ring(), &v).map_err(|e| CurveError::Cache(e.to_string()))?;
        if f == *f2_char0() {
            return Ok(f);
        }
        return Err(CurveError::Cache(format!("{} does not match the recomputed polynomial", path.display())));
    }
    let f = f2_char0().clone();
    std::fs::create_dir_all(dir).map_err(|e| CurveError::Cache(e.to_string()))?;
    let text = serde_json::to_string(&f.to_json()).unwrap();
    std::fs::write(&path, text).map_err(|e| CurveError::Cache(e.to_string()))?;
    Ok(f)
}

fn reduce_mod(c: &BigInt, p: u32) -> u32 {
    let r = c % BigInt::from(p);
    let r = r.to_i64().unwrap();
    r.rem_euclid(p as i64) as u32
}

/// `f2` reduced modulo `p` in `F_p[A, B, a0..a5]`.
pub fn f2_mod_p(p: u32) -> MPoly<PrimeField> {
    static CACHE: OnceLock<Mutex<HashMap<u32, MPoly<PrimeField>>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry(p)
        .or_insert_with(|| {
            let fp = PrimeField::new(p).expect("prime");
            let ring = invariant_ring().with_coeffs(fp);
            let ident: Vec<Option<usize>> = (0..F2_VARS.len()).map(Some).collect();
            f2_char0().map_into(&ring, &ident, |c| reduce_mod(c, p)).unwrap()
        })
        .clone()
}

/// `f2` with `A`, `B` specialized, as a polynomial in `a0..a5` over `field`.
pub fn f2_fixed_ab<F: FiniteField>(field: &F, a: &FieldElement, b: &FieldElement) -> MPoly<F> {
    let p = field.characteristic();
    let tower = FieldTower::shared(p).expect("finite field has prime characteristic");
    let f2 = f2_mod_p(p);
    let ring = PolyRing::new(field.clone(), &F2_VARS[2..], MonomialOrder::Grevlex).unwrap();
    let conv = |e: &FieldElement| field.from_element(&tower.lift(e, field.level()));
    let (a, b) = (conv(a), conv(b));
    let mut terms = Vec::with_capacity(f2.nterms());
    for (m, c) in f2.terms() {
        let mut coef = conv(&FieldElement(vec![*c]));
        coef = field.mul(&coef, &field.pow(&a, m.get(0) as u64));
        coef = field.mul(&coef, &field.pow(&b, m.get(1) as u64));
        let e: Vec<u32> = (2..8).map(|i| m.get(i)).collect();
        terms.push((Monomial::from_exps(&e), coef));
    }
    ring.from_terms(terms)
}

/// `f2` with `A`, `B` fixed, computed directly: the discriminant of `G` with
/// `A`, `B` substituted, divided by `a3^4 f3^2`. An independent route to
/// `f2_fixed_ab`.
pub fn f2_fixed_ab_direct<F: FiniteField>(field: &F, a: &FieldElement, b: &FieldElement) -> MPoly<F> {
    let p = field.characteristic();
    let tower = FieldTower::shared(p).expect("finite field has prime characteristic");
    let conv = |e: &FieldElement| field.from_element(&tower.lift(e, field.level()));
    let mut vars = vec!["x"];
    vars.extend(&F2_VARS[2..]);
    let r = PolyRing::new(field.clone(), &vars, MonomialOrder::Grevlex).unwrap();
    let f = r.parse("x^3").unwrap().add(&r.var(0).scale(&conv(a))).add(&r.constant(conv(b)));
    let rr = r.parse("a3").unwrap().mul(&f).add(&r.parse("a0*x^2 + a2*x + a5").unwrap());
    let lin = r.parse("a1*x + a4").unwrap();
    let g = rr.mul(&rr).sub(&lin.mul(&lin).mul(&f));
    let det = det_expand(&bezout_matrix(&g, &g.derivative(0), 0));
    let f3 = r
        .parse("-a0*a1*a4^2 - a1^3*a5 + a1^2*a2*a4 + a3*a4^3")
        .unwrap()
        .add(&r.parse("a1^2*a3*a4").unwrap().scale(&conv(a)))
        .sub(&r.parse("a1^3*a3").unwrap().scale(&conv(b)));
    let den = r.parse("a3^4").unwrap().mul(&f3).mul(&f3);
    let q = det.exact_div(&den).expect("a3^4 f3^2 divides the Bezout determinant");
    let out = PolyRing::new(field.clone(), &F2_VARS[2..], MonomialOrder::Grevlex).unwrap();
    q.to_ring(&out).expect("x does not occur")
}
