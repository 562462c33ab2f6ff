use super::{groebner_basis, GroebnerError};
use crate::mpoly::{MPoly, MonomialOrder, PolyRing};
use crate::ring::Field;

/// Generators of the elimination ideal `(gens) ∩ F[keep]`, returned in the
/// ring of `gens`. The variables outside `keep` are moved to the front and
/// eliminated with a block order; the result is the reduced basis of the
/// elimination ideal under grevlex on `keep`. With every variable kept this
/// is the reduced basis of the ideal itself under the ring's order.
pub fn elimination<F: Field>(gens: &[MPoly<F>], keep: &[&str]) -> Result<Vec<MPoly<F>>, GroebnerError> {
    let ring = gens.first().ok_or(GroebnerError::RingMismatch)?.ring().clone();
    let vars = ring.vars();
    if let Some(bad) = keep.iter().find(|k| !vars.iter().any(|v| v == *k)) {
        return Err(GroebnerError::UnknownVariable(bad.to_string()));
    }
    let drop: Vec<&str> = vars.iter().map(String::as_str).filter(|v| !keep.contains(v)).collect();
    if drop.is_empty() {
        return Ok(groebner_basis(gens)?.polys().to_vec());
    }
    let kept: Vec<&str> = vars.iter().map(String::as_str).filter(|v| keep.contains(v)).collect();
    let names: Vec<&str> = drop.iter().chain(&kept).copied().collect();
    let block = PolyRing::new(ring.coeffs().clone(), &names, MonomialOrder::Block { split: drop.len() })
        .expect("same number of variables");
    let moved: Vec<MPoly<F>> = gens.iter().map(|g| g.to_ring(&block).expect("same variables")).collect();
    let gb = groebner_basis(&moved)?;
    let drop_idx: Vec<usize> = (0..drop.len()).collect();
    Ok(gb
        .polys()
        .iter()
        .filter(|g| drop_idx.iter().all(|&i| g.degree_in(i) == 0))
        .map(|g| g.to_ring(&ring).expect("same variables"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::PrimeField;

    #[test]
    fn twisted_cubic() {
        let r = PolyRing::new(PrimeField::new(101).unwrap(), &["t", "x", "y"], MonomialOrder::Grevlex).unwrap();
        let gens = [r.parse("x - t^2").unwrap(), r.parse("y - t^3").unwrap()];
        let e = elimination(&gens, &["x", "y"]).unwrap();
        assert!(e.iter().all(|g| g.degree_in(0) == 0));
        let target = r.parse("y^2 - x^3").unwrap();
        assert!(groebner_basis(&e).unwrap().contains(&target));
    }

    #[test]
    fn eliminating_nothing_keeps_the_basis() {
        let r = PolyRing::new(PrimeField::new(7).unwrap(), &["x", "y"], MonomialOrder::Grevlex).unwrap();
        let gens = [r.parse("x^2 + y").unwrap(), r.parse("x*y - 1").unwrap()];
        let e = elimination(&gens, &["x", "y"]).unwrap();
        assert_eq!(e, groebner_basis(&gens).unwrap().polys().to_vec());
    }
}
