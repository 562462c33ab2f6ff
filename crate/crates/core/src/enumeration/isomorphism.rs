use super::quotients::{bielliptic_involutions, quotient_datum, twist_onto};
use super::EnumerationError;
use crate::curves::{model_for_j, DcecInstance, EllipticModel, Point};
use crate::ff::FieldTower;

/// Canonical form of a curve as a double cover of its representative
/// cubic: the smallest image of its branch points under the maps
/// `P -> u.P + R` with `u` an automorphism and `R` in `E[n]`. Points are
/// written at their smallest level and sorted, so keys of different curves
/// over the same model compare directly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverKey {
    pub model: EllipticModel,
    pub points: Vec<Point>,
}

fn descend_point(tower: &FieldTower, pt: &Point) -> Point {
    match pt {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => {
            let k = crate::ff_lcm(tower.minimal_level(x), tower.minimal_level(y));
            Point::Affine(tower.descend(x, k).unwrap(), tower.descend(y, k).unwrap())
        }
    }
}

/// The representative model with the same j-invariant.
pub fn representative_model(m: &EllipticModel) -> Result<EllipticModel, EnumerationError> {
    let tower = m.tower();
    let j = m.j_invariant();
    let j = tower.descend(&j, tower.minimal_level(&j)).unwrap();
    Ok(model_for_j(m.p, &j)?.descend())
}

/// The curve moved onto the representative model of its cubic.
pub fn on_representative(c: &DcecInstance) -> Result<DcecInstance, EnumerationError> {
    let rep = representative_model(&c.model)?;
    if c.model.descend() == rep {
        return Ok(c.normalized().descend());
    }
    twist_onto(c, &rep).ok_or_else(|| EnumerationError::Inconsistent("no twist onto the representative model".into()))
}

/// `translation_order` is 6 for the full group `E[6]` or 3 for `E[3]`.
pub fn cover_key(c: &DcecInstance, translation_order: i64) -> Result<CoverKey, EnumerationError> {
    let c = on_representative(c)?;
    let tower = c.tower();
    let model = c.model.descend();
    let six = c.six_points()?;
    if !six.is_reduced() {
        return Err(EnumerationError::Inconsistent("branch points are not distinct".into()));
    }
    let (tl, torsion) = model.torsion6();
    let lvl = [six.level, tl, 2 * model.level()].into_iter().fold(1, crate::ff_lcm);
    let curve = model.at(lvl);
    let pts: Vec<Point> = six.expanded().iter().map(|p| p.lift(&tower, lvl)).collect();
    let shifts: Vec<Point> = torsion
        .iter()
        .map(|r| r.lift(&tower, lvl))
        .filter(|r| curve.mul(translation_order, r) == Point::Infinity)
        .collect();
    let mut best: Option<Vec<Point>> = None;
    for u in model.automorphism_units(lvl) {
        let moved: Vec<Point> = pts.iter().map(|p| curve.act(&u, p)).collect();
        for r in &shifts {
            let mut img: Vec<Point> = moved.iter().map(|p| descend_point(&tower, &curve.add(p, r))).collect();
            img.sort();
            if best.as_ref().map_or(true, |b| img < *b) {
                best = Some(img);
            }
        }
    }
    Ok(CoverKey { model, points: best.unwrap() })
}

/// Whether two curves are isomorphic as double covers of elliptic curves
/// through their defining involutions: some `u.P + R` with `R` in `E[n]`
/// maps one branch locus onto the other after both are moved onto the
/// representative model.
pub fn is_isomorphic_as_covers(c1: &DcecInstance, c2: &DcecInstance, translation_order: i64) -> Result<bool, EnumerationError> {
    if c1.model.j_invariant_descended() != c2.model.j_invariant_descended() {
        return Ok(false);
    }
    Ok(cover_key(c1, translation_order)? == cover_key(c2, translation_order)?)
}

/// Keys of the curve through each of its bielliptic involutions.
pub fn all_cover_keys(c: &DcecInstance, translation_order: i64) -> Result<Vec<CoverKey>, EnumerationError> {
    let mut keys = vec![];
    for inv in bielliptic_involutions(c)? {
        let form = if inv.is_defining() { c.clone() } else { quotient_datum(c, &inv)?.curve };
        keys.push(cover_key(&form, translation_order)?);
    }
    keys.sort();
    keys.dedup();
    Ok(keys)
}

/// Isomorphism of curves: some bielliptic involution of the first curve
/// presents it as a double cover isomorphic to the second curve's defining
/// cover.
pub fn is_isomorphic(c1: &DcecInstance, c2: &DcecInstance, translation_order: i64) -> Result<bool, EnumerationError> {
    let k2 = cover_key(c2, translation_order)?;
    Ok(all_cover_keys(c1, translation_order)?.contains(&k2))
}
