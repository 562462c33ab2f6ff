use super::EnumerationError;
use crate::curves::{f2_fixed_ab, hasse_witt_symbolic, DcecInstance, EllipticModel};
use crate::ff::{FieldElement, FiniteField, GaloisField, PrimeField};
use crate::groebner::{groebner_basis, solve_zero_dim};
use crate::mpoly::{MPoly, MonomialOrder, PolyRing};

/// The superspecial locus over one cubic in the affine chart where
/// `a_chart = 1` and the earlier coefficients vanish; `s` inverts `f2`.
#[derive(Clone, Debug)]
pub struct ChartIdeal<F: FiniteField> {
    pub chart: usize,
    pub ring: PolyRing<F>,
    /// Nonzero Hasse-Witt entries restricted to the chart.
    pub hasse_witt: Vec<MPoly<F>>,
    /// `f2` restricted to the chart.
    pub f2: MPoly<F>,
}

#[derive(Clone, Debug)]
pub struct ChartSolution {
    pub chart: usize,
    /// Dimension of the quotient by the saturated ideal.
    pub dimension: usize,
    pub curves: Vec<DcecInstance>,
}

impl ChartSolution {
    pub fn is_radical(&self) -> bool {
        self.curves.len() == self.dimension
    }
}

const A_NAMES: [&str; 6] = ["a0", "a1", "a2", "a3", "a4", "a5"];

pub fn chart_ideal<F: FiniteField>(field: &F, model: &EllipticModel, chart: usize) -> ChartIdeal<F> {
    assert!(chart < 6);
    let mut names: Vec<&str> = A_NAMES[chart + 1..].to_vec();
    names.push("s");
    let ring = PolyRing::new(field.clone(), &names, MonomialOrder::Grevlex).unwrap();
    let images: Vec<MPoly<F>> = (0..6)
        .map(|i| match i.cmp(&chart) {
            std::cmp::Ordering::Less => ring.zero(),
            std::cmp::Ordering::Equal => ring.one(),
            std::cmp::Ordering::Greater => ring.var(i - chart - 1),
        })
        .collect();
    let hw = hasse_witt_symbolic(field, model);
    let hasse_witt = hw.iter().flatten().map(|e| e.compose(&images)).filter(|e| !e.is_zero()).collect();
    let f2 = f2_fixed_ab(field, &model.a, &model.b).compose(&images);
    ChartIdeal { chart, ring, hasse_witt, f2 }
}

impl<F: FiniteField> ChartIdeal<F> {
    /// Generators `c_ij` and `s * f2 - 1`.
    pub fn generators(&self) -> Vec<MPoly<F>> {
        let s = self.ring.var(self.ring.nvars() - 1);
        let mut g = self.hasse_witt.clone();
        g.push(s.mul(&self.f2).sub(&self.ring.one()));
        g
    }

    pub fn solve(&self, model: &EllipticModel) -> Result<ChartSolution, EnumerationError> {
        let tower = model.tower();
        let s = self.ring.var(self.ring.nvars() - 1);
        let gb = if self.hasse_witt.is_empty() {
            None
        } else {
            Some(groebner_basis(&self.hasse_witt)?)
        };
        let (mut gens, f2) = match &gb {
            Some(gb) if gb.is_trivial() => {
                return Ok(ChartSolution { chart: self.chart, dimension: 0, curves: vec![] });
            }
            Some(gb) => (gb.polys().to_vec(), gb.normal_form(&self.f2)),
            None => (vec![], self.f2.clone()),
        };
        gens.push(s.mul(&f2).sub(&self.ring.one()));
        let gb = groebner_basis(&gens)?;
        let sol = solve_zero_dim(&gb, &tower)?;
        let mut curves = vec![];
        for pt in &sol.points {
            let k = pt[0].level();
            let mut a: Vec<FieldElement> = vec![tower.from_i64(0, k); 6];
            a[self.chart] = tower.from_i64(1, k);
            for (i, v) in pt[..pt.len() - 1].iter().enumerate() {
                a[self.chart + 1 + i] = v.clone();
            }
            curves.push(DcecInstance::new(model, &a)?);
        }
        Ok(ChartSolution { chart: self.chart, dimension: sol.dimension, curves })
    }
}

fn solve_all<F: FiniteField>(field: &F, model: &EllipticModel) -> Result<Vec<ChartSolution>, EnumerationError> {
    (0..6).map(|c| chart_ideal(field, model, c).solve(model)).collect()
}

/// Every superspecial curve over the given cubic, one per point of the
/// projective space of quadrics (each normalized so its first nonzero
/// coefficient is 1), grouped by chart.
pub fn list_superspecial_for_model(model: &EllipticModel) -> Result<Vec<ChartSolution>, EnumerationError> {
    let tower = model.tower();
    if model.level() == 1 {
        solve_all(&PrimeField::new(model.p).map_err(crate::curves::CurveError::from)?, model)
    } else {
        let f: GaloisField = tower.level(model.level());
        solve_all(&f, model)
    }
}
