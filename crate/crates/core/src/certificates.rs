//! Identity checks behind the nonsingularity criterion and the enumeration:
//! the shape of `f2`, the exact factorization of the discriminant, the
//! elimination ideal giving `f3`, radicality of the superspecial ideals and
//! the Hasse-Witt entry attached to the elliptic curve.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::curves::{
    delta_char0_sylvester, f2_mod_p, f3_poly, g_poly, hasse_witt_symbolic, invariant_ring, supersingular_models,
    EllipticModel, CurveError, F2_VARS,
};
use crate::enumeration::{check_radicality, EnumerationError};
use crate::ff::{FieldElement, FieldTower, PrimeField};
use crate::groebner::{elimination, groebner_basis};
use crate::mpoly::{bezout_matrix, det_expand, MPoly, MonomialOrder, PolyRing};
use crate::ring::{Integers, Rationals, Ring};

/// Expected number of terms of `f2` in characteristic zero.
pub const F2_TERMS: usize = 3381;

/// Expected grevlex-lowest term of `f2`.
pub const F2_LOWEST: &str = "-46656*a3^5*a5^7";

/// Primes at which the factorization of the discriminant is checked.
pub const SMALL_PRIMES: [u32; 4] = [5, 7, 11, 13];

/// Sign `s` with `HW[0][0] = s * hasse_coefficient`; the same for every `p`.
pub const HASSE_SIGN: i64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Term count and lowest term of `f2`.
pub fn f2_shape(f2: &MPoly<Integers>) -> Vec<Check> {
    let lowest = f2.lowest_term(MonomialOrder::Grevlex).map(|(m, c)| f2.ring().term(m, c));
    let expected = invariant_ring().parse(F2_LOWEST).unwrap();
    let shown = lowest.as_ref().map_or("none".to_string(), |t| t.to_string());
    vec![
        Check::new("terms", f2.nterms() == F2_TERMS, format!("terms={}", f2.nterms())),
        Check::new("lowest", lowest.as_ref() == Some(&expected), format!("lowest={shown}")),
    ]
}

/// `Delta = f3^2 f2` over the integers, with `Delta` computed independently
/// from the Sylvester matrix.
pub fn discriminant_factorization_char0(f2: &MPoly<Integers>) -> Check {
    let delta = delta_char0_sylvester();
    let f3 = f3_poly(&invariant_ring());
    let ok = f3.mul(&f3).mul(f2) == delta;
    Check::new("division over Z", ok, format!("Delta has {} terms", delta.nterms()))
}

/// `Delta = f3^2 f2` over `F_p`, with `Delta` computed from the Bezout
/// matrix of `G` reduced modulo `p` and `f2` reduced from characteristic 0.
pub fn discriminant_factorization_mod_p(p: u32) -> Check {
    let fp = PrimeField::new(p).expect("prime");
    let g = g_poly();
    let ring = g.ring().with_coeffs(fp);
    let ident: Vec<Option<usize>> = (0..ring.nvars()).map(Some).collect();
    let gp = g.map_into(&ring, &ident, |c| reduce(c, p)).unwrap();
    let det = det_expand(&bezout_matrix(&gp, &gp.derivative(0), 0));
    let f3 = f3_poly(&ring);
    let a3 = ring.var_named("a3").unwrap();
    let f2 = f2_mod_p(p).to_ring(&ring).unwrap();
    let ok = a3.pow(4).mul(&f3).mul(&f3).mul(&f2) == det;
    Check::new(format!("division over F_{p}"), ok, format!("f2 mod {p} has {} terms", f2.nterms()))
}

fn reduce(c: &BigInt, p: u32) -> u32 {
    let r = c % BigInt::from(p);
    let r: i64 = r.try_into().unwrap();
    r.rem_euclid(p as i64) as u32
}

/// The checks for the nonsingularity criterion: shape of `f2` and exact
/// division of the discriminant, over the integers and the small primes.
pub fn main_theorem(f2: &MPoly<Integers>) -> Vec<Check> {
    let mut out = f2_shape(f2);
    out.push(discriminant_factorization_char0(f2));
    out.extend(SMALL_PRIMES.iter().map(|&p| discriminant_factorization_mod_p(p)));
    out
}

/// Every term of `f2` is divisible by `a1` or `a3`.
pub fn prop_a1_a3(f2: &MPoly<Integers>) -> Vec<Check> {
    let (i1, i3) = (3, 5);
    debug_assert_eq!((F2_VARS[i1], F2_VARS[i3]), ("a1", "a3"));
    let bad = f2.terms().iter().filter(|(m, _)| m.get(i1) == 0 && m.get(i3) == 0).count();
    vec![Check::new("f2 in (a1, a3)", bad == 0, format!("{bad} terms outside (a1, a3)"))]
}

/// Elimination of `x, y` from `(P|_{z=1}, q|_{z=1}, a1 x + a4)` over the
/// rationals gives the principal ideal `(f3)`: each side reduces to zero
/// modulo the other.
pub fn lemma_f3() -> Vec<Check> {
    let mut vars = vec!["x", "y"];
    vars.extend(F2_VARS);
    let r = PolyRing::new(Rationals, &vars, MonomialOrder::Grevlex).unwrap();
    let gens = [
        r.parse("y^2 - x^3 - A*x - B").unwrap(),
        r.parse("a0*x^2 + a1*x*y + a2*x + a3*y^2 + a4*y + a5").unwrap(),
        r.parse("a1*x + a4").unwrap(),
    ];
    let elim = match elimination(&gens, &F2_VARS) {
        Ok(e) => e,
        Err(e) => return vec![Check::new("elimination", false, e.to_string())],
    };
    let f3 = f3_poly(&r);
    let contains_f3 = groebner_basis(&elim).map(|gb| gb.contains(&f3)).unwrap_or(false);
    let in_f3 = groebner_basis(&[f3.clone()]).map(|gb| elim.iter().all(|g| gb.contains(g))).unwrap_or(false);
    let unit = BigRational::from_integer(1.into());
    let principal = elim.len() == 1 && elim[0].lc() == Some(&unit);
    vec![Check::new(
        "elimination ideal = (f3)",
        contains_f3 && in_f3 && principal,
        format!("{} generator(s)", elim.len()),
    )]
}

/// `|V(I_M)|` equals the quotient dimension for every supersingular model.
pub fn radical(p: u32) -> Result<Vec<Check>, EnumerationError> {
    let mut out = vec![];
    for m in supersingular_models(p)? {
        let w = check_radicality(&m)?;
        let j = m.j_invariant_descended();
        out.push(Check::new(format!("radical j={}", label(&j)), w.radical, format!("|V|={} dim={}", w.points, w.dimension)));
    }
    Ok(out)
}

fn label(e: &FieldElement) -> String {
    e.0.iter().map(u32::to_string).collect::<Vec<_>>().join("_")
}

/// The `(1,1)` entry of the Hasse-Witt matrix equals `HASSE_SIGN` times the
/// Hasse coefficient of the cubic, for every `(A, B)` in `F_p` with
/// `4 A^3 + 27 B^2 != 0`.
pub fn hasse_witt_corner(p: u32) -> Result<Vec<Check>, CurveError> {
    let tower = FieldTower::shared(p)?;
    let f = tower.level(1);
    let mut bad = 0;
    let mut total = 0;
    for a in 0..p as i64 {
        for b in 0..p as i64 {
            let Ok(m) = EllipticModel::from_ints(p, a, b) else { continue };
            total += 1;
            let hw = hasse_witt_symbolic(&f, &m);
            let corner = hw[0][0].constant_value().unwrap_or_else(|| f.zero());
            let want = f.mul(&f.from_i64(HASSE_SIGN), &m.hasse_coefficient());
            if hw[0][0].total_degree() != 0 || corner != want {
                bad += 1;
            }
        }
    }
    Ok(vec![Check::new(
        format!("HW(1,1) vs Hasse coefficient, p={p}"),
        bad == 0 && total > 0,
        format!("{} of {total} models disagree", bad),
    )])
}
