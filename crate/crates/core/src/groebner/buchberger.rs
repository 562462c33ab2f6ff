use std::collections::{BTreeMap, BTreeSet};

use super::GroebnerError;
use crate::mpoly::{MPoly, Monomial, PolyRing, SortKey};
use crate::ring::Field;

/// A reduced Groebner basis: monic, interreduced, sorted by increasing
/// leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    ring: PolyRing<F>,
    polys: Vec<MPoly<F>>,
}

struct Engine<F: Field> {
    ring: PolyRing<F>,
    polys: Vec<MPoly<F>>,
    lms: Vec<Monomial>,
    masks: Vec<u32>,
    active: Vec<usize>,
    pairs: BTreeSet<(SortKey, usize, usize)>,
}

impl<F: Field> Engine<F> {
    fn divisor_of(&self, m: &Monomial) -> Option<usize> {
        let mask = m.support_mask();
        self.active
            .iter()
            .copied()
            .find(|&i| self.masks[i] & !mask == 0 && self.lms[i].divides(m))
    }

    fn reduce(&self, f: &MPoly<F>) -> MPoly<F> {
        reduce_with(&self.ring, f, |m| self.divisor_of(m).map(|i| &self.polys[i]))
    }

    fn add(&mut self, h: MPoly<F>) {
        let order = self.ring.order();
        let idx = self.polys.len();
        let hm = *h.lm().unwrap();
        self.lms.push(hm);
        self.masks.push(hm.support_mask());
        self.polys.push(h);

        // chain criterion on the new pairs
        let cands: Vec<(usize, Monomial)> = self.active.iter().map(|&g| (g, hm.lcm(&self.lms[g]))).collect();
        let mut kept: Vec<(usize, Monomial)> = vec![];
        for (pos, &(g, l)) in cands.iter().enumerate() {
            let disjoint = hm.is_coprime(&self.lms[g]);
            let dominated = !disjoint
                && (cands[pos + 1..].iter().any(|(_, l2)| l2.divides(&l))
                    || kept.iter().any(|(_, l2)| l2.divides(&l)));
            if !dominated {
                kept.push((g, l));
            }
        }
        // old pairs made redundant by h
        let stale: Vec<(SortKey, usize, usize)> = self
            .pairs
            .iter()
            .filter(|&&(_, i, j)| {
                let l = self.lms[i].lcm(&self.lms[j]);
                hm.divides(&l) && hm.lcm(&self.lms[i]) != l && hm.lcm(&self.lms[j]) != l
            })
            .copied()
            .collect();
        for s in stale {
            self.pairs.remove(&s);
        }
        for (g, l) in kept {
            if !hm.is_coprime(&self.lms[g]) {
                self.pairs.insert((order.key(&l), g, idx));
            }
        }
        self.active.retain(|&g| !hm.divides(&self.lms[g]));
        self.active.push(idx);
    }

    fn spoly(&self, i: usize, j: usize) -> MPoly<F> {
        let r = self.ring.coeffs();
        let l = self.lms[i].lcm(&self.lms[j]);
        let (a, b) = (&self.polys[i], &self.polys[j]);
        let ta = self.lms[i].div_into(&l).unwrap();
        let tb = self.lms[j].div_into(&l).unwrap();
        // both are monic
        a.mul_term(&ta, &r.one()).sub(&b.mul_term(&tb, &r.one()))
    }
}

/// Full reduction of `f`; `divisor` returns a monic reducer whose leading
/// monomial divides the argument.
pub(crate) fn reduce_with<'a, F: Field + 'a>(
    ring: &PolyRing<F>,
    f: &MPoly<F>,
    divisor: impl Fn(&Monomial) -> Option<&'a MPoly<F>>,
) -> MPoly<F> {
    let r = ring.coeffs();
    let order = ring.order();
    let mut acc: BTreeMap<SortKey, (Monomial, F::Elem)> =
        f.terms().iter().map(|(m, c)| (order.key(m), (*m, c.clone()))).collect();
    let mut out = vec![];
    while let Some((_, (m, c))) = acc.pop_last() {
        match divisor(&m) {
            Some(g) => {
                let q = g.lm().unwrap().div_into(&m).unwrap();
                for (gm, gc) in &g.terms()[1..] {
                    let nm = gm.mul(&q);
                    let t = r.mul(&c, gc);
                    let key = order.key(&nm);
                    match acc.get_mut(&key) {
                        Some(v) => {
                            v.1 = r.sub(&v.1, &t);
                            if r.is_zero(&v.1) {
                                acc.remove(&key);
                            }
                        }
                        None => {
                            acc.insert(key, (nm, r.neg(&t)));
                        }
                    }
                }
            }
            None => out.push((m, c)),
        }
    }
    ring.from_terms(out)
}

/// Reduced Groebner basis of the ideal generated by `gens` under the ring's
/// order. Pairs are processed by the normal strategy (smallest lcm first,
/// ties broken by index).
pub fn groebner_basis<F: Field>(gens: &[MPoly<F>]) -> Result<GroebnerBasis<F>, GroebnerError> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => return Err(GroebnerError::RingMismatch),
    };
    if gens.iter().any(|g| !g.ring().same(&ring)) {
        return Err(GroebnerError::RingMismatch);
    }
    let mut eng = Engine { ring: ring.clone(), polys: vec![], lms: vec![], masks: vec![], active: vec![], pairs: BTreeSet::new() };
    let mut input: Vec<MPoly<F>> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    input.sort_by(|a, b| ring.order().cmp(a.lm().unwrap(), b.lm().unwrap()));
    for g in input {
        let h = eng.reduce(&g);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(GroebnerBasis { ring: ring.clone(), polys: vec![ring.one()] });
        }
        eng.add(h.monic());
    }
    while let Some((_, i, j)) = eng.pairs.pop_first() {
        let s = eng.spoly(i, j);
        let h = eng.reduce(&s);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(GroebnerBasis { ring: ring.clone(), polys: vec![ring.one()] });
        }
        eng.add(h.monic());
    }
    Ok(GroebnerBasis::interreduce(ring, eng.active.iter().map(|&i| eng.polys[i].clone()).collect()))
}

impl<F: Field> GroebnerBasis<F> {
    fn interreduce(ring: PolyRing<F>, mut polys: Vec<MPoly<F>>) -> Self {
        let order = ring.order();
        polys.sort_by(|a, b| order.cmp(a.lm().unwrap(), b.lm().unwrap()));
        let mut out: Vec<MPoly<F>> = Vec::with_capacity(polys.len());
        for i in 0..polys.len() {
            let others: Vec<&MPoly<F>> = polys.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p).collect();
            let lead = polys[i].terms()[0].clone();
            let tail = ring.from_terms(polys[i].terms()[1..].to_vec());
            let red = reduce_with(&ring, &tail, |m| others.iter().copied().find(|g| g.lm().unwrap().divides(m)));
            out.push(ring.term(lead.0, lead.1).add(&red));
        }
        GroebnerBasis { ring, polys: out }
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn polys(&self) -> &[MPoly<F>] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// True when the ideal is the whole ring.
    pub fn is_trivial(&self) -> bool {
        self.polys.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|g| *g.lm().unwrap()).collect()
    }

    fn divisor_of(&self, m: &Monomial) -> Option<&MPoly<F>> {
        self.polys.iter().find(|g| g.lm().unwrap().divides(m))
    }

    pub fn normal_form(&self, f: &MPoly<F>) -> MPoly<F> {
        reduce_with(&self.ring, f, |m| self.divisor_of(m))
    }

    pub fn contains(&self, f: &MPoly<F>) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Ok when every variable has a pure power among the leading monomials.
    pub fn check_zero_dimensional(&self) -> Result<(), GroebnerError> {
        if self.is_trivial() {
            return Ok(());
        }
        let lms = self.leading_monomials();
        for v in 0..self.ring.nvars() {
            let pure = lms.iter().any(|m| m.get(v) > 0 && m.deg() == m.get(v));
            if !pure {
                return Err(GroebnerError::NotZeroDimensional(self.ring.vars()[v].clone()));
            }
        }
        Ok(())
    }

    /// Monomials outside the leading-term ideal, sorted increasingly; only
    /// meaningful for zero-dimensional ideals.
    pub fn standard_monomials(&self) -> Result<Vec<Monomial>, GroebnerError> {
        self.check_zero_dimensional()?;
        if self.is_trivial() {
            return Ok(vec![]);
        }
        let lms = self.leading_monomials();
        let n = self.ring.nvars();
        let mut out = vec![];
        let mut stack = vec![Monomial::one()];
        // depth-first over exponent vectors, extending only in variables >= the last raised one
        let mut start = vec![0usize];
        while let Some(m) = stack.pop() {
            let s = start.pop().unwrap();
            if lms.iter().any(|l| l.divides(&m)) {
                continue;
            }
            out.push(m);
            for v in s..n {
                stack.push(m.with(v, m.get(v) + 1));
                start.push(v);
            }
        }
        let order = self.ring.order();
        out.sort_by(|a, b| order.cmp(a, b));
        Ok(out)
    }

    /// Dimension of the quotient ring as a vector space.
    pub fn quotient_dimension(&self) -> Result<usize, GroebnerError> {
        Ok(self.standard_monomials()?.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::PrimeField;
    use crate::mpoly::MonomialOrder;
    use crate::ring::Rationals;

    #[test]
    fn textbook_example_over_q() {
        // Cox-Little-O'Shea: x^3 - 2xy, x^2 y - 2y^2 + x in grevlex
        let r = PolyRing::new(Rationals, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        let f = r.parse("x^3 - 2*x*y").unwrap();
        let g = r.parse("x^2*y - 2*y^2 + x").unwrap();
        let gb = groebner_basis(&[f.clone(), g.clone()]).unwrap();
        let want: Vec<MPoly<Rationals>> = ["x^2", "x*y", "y^2 - x/2"]
            .iter()
            .map(|s| {
                if *s == "y^2 - x/2" {
                    r.parse("2*y^2 - x").unwrap().monic()
                } else {
                    r.parse(s).unwrap()
                }
            })
            .collect();
        let mut got = gb.polys().to_vec();
        got.sort_by(|a, b| a.to_string().cmp(&b.to_string()));
        let mut want = want;
        want.sort_by(|a, b| a.to_string().cmp(&b.to_string()));
        assert_eq!(got, want);
        assert!(gb.contains(&f) && gb.contains(&g));
        assert_eq!(gb.quotient_dimension().unwrap(), 3);
    }

    #[test]
    fn detects_unit_ideal_and_positive_dimension() {
        let fp = PrimeField::new(7).unwrap();
        let r = PolyRing::new(fp, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        let gb = groebner_basis(&[r.parse("x*y - 1").unwrap(), r.parse("x").unwrap()]).unwrap();
        assert!(gb.is_trivial());
        let gb = groebner_basis(&[r.parse("x^2 - y^2").unwrap()]).unwrap();
        assert_eq!(gb.check_zero_dimensional(), Err(GroebnerError::NotZeroDimensional("y".into())));
    }

    #[test]
    fn lex_basis_is_triangular() {
        let fp = PrimeField::new(101).unwrap();
        let r = PolyRing::new(fp, &["x", "y", "z"], MonomialOrder::Lex).unwrap();
        let gens = ["x^2 + y + z - 1", "x + y^2 + z - 1", "x + y + z^2 - 1"].map(|s| r.parse(s).unwrap());
        let gb = groebner_basis(&gens).unwrap();
        let last = gb.polys().first().unwrap();
        assert!(last.terms().iter().all(|(m, _)| m.get(0) == 0 && m.get(1) == 0));
        assert_eq!(last.degree_in(2), 6);
        for g in &gens {
            assert!(gb.contains(g));
        }
    }
}
