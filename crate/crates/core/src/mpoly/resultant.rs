use rustc_hash::FxHashMap;

use super::{MPoly, MpolyError};
use crate::ring::Ring;

type Matrix<R> = Vec<Vec<MPoly<R>>>;

fn coeffs_padded<R: Ring>(f: &MPoly<R>, var: usize, deg: usize) -> Vec<MPoly<R>> {
    let mut c = f.coefficients_in(var);
    c.resize(deg + 1, f.ring().zero());
    c
}

/// Sylvester matrix of `f` and `g` in `var` with formal degrees `m >= deg f`
/// and `n >= deg g`: `n` shifted rows of `f`, then `m` shifted rows of `g`,
/// coefficients in decreasing degree.
pub fn sylvester_matrix<R: Ring>(f: &MPoly<R>, g: &MPoly<R>, var: usize, m: usize, n: usize) -> Matrix<R> {
    let fc = coeffs_padded(f, var, m);
    let gc = coeffs_padded(g, var, n);
    let size = m + n;
    let zero = f.ring().zero();
    let mut mat = vec![vec![zero; size]; size];
    for i in 0..n {
        for k in 0..=m {
            mat[i][i + k] = fc[m - k].clone();
        }
    }
    for i in 0..m {
        for k in 0..=n {
            mat[n + i][i + k] = gc[n - k].clone();
        }
    }
    mat
}

/// Bezout matrix: entries `b_ij` with
/// `(f(x) g(y) - f(y) g(x)) / (x - y) = sum b_ij x^i y^j`, size `max(deg)`.
pub fn bezout_matrix<R: Ring>(f: &MPoly<R>, g: &MPoly<R>, var: usize) -> Matrix<R> {
    let n = f.degree_in(var).max(g.degree_in(var)) as usize;
    let fc = coeffs_padded(f, var, n);
    let gc = coeffs_padded(g, var, n);
    let mut b = vec![vec![f.ring().zero(); n]; n];
    for a in 0..=n {
        for c in 0..a {
            let cab = fc[a].mul(&gc[c]).sub(&fc[c].mul(&gc[a]));
            if cab.is_zero() {
                continue;
            }
            for t in 0..a - c {
                let (i, j) = (c + t, a - 1 - t);
                b[i][j] = b[i][j].add(&cab);
            }
        }
    }
    b
}

/// Fraction-free Gaussian elimination (Bareiss); every division is exact.
pub fn det_bareiss<R: Ring>(mat: &Matrix<R>) -> MPoly<R> {
    let n = mat.len();
    if n == 0 {
        panic!("determinant of an empty matrix");
    }
    let ring = mat[0][0].ring().clone();
    let mut m = mat.clone();
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = ring.zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Division-free determinant by Laplace expansion with memoized minors.
pub fn det_expand<R: Ring>(mat: &Matrix<R>) -> MPoly<R> {
    let n = mat.len();
    assert!(n > 0 && n < 31);
    let ring = mat[0][0].ring().clone();
    // minors of the first k columns, keyed by row subset
    let mut level: FxHashMap<u32, MPoly<R>> = FxHashMap::default();
    level.insert(0, ring.one());
    for k in 0..n {
        let mut next: FxHashMap<u32, MPoly<R>> = FxHashMap::default();
        for (&set, minor) in &level {
            if minor.is_zero() {
                continue;
            }
            for i in 0..n {
                if set & (1 << i) != 0 || mat[i][k].is_zero() {
                    continue;
                }
                // row i becomes position `rank` inside the enlarged subset
                let rank = (set & ((1 << i) - 1)).count_ones() as usize;
                let t = mat[i][k].mul(minor);
                let t = if (rank + k) % 2 == 1 { t.neg() } else { t };
                let key = set | (1 << i);
                match next.get_mut(&key) {
                    Some(v) => *v = v.add(&t),
                    None => {
                        next.insert(key, t);
                    }
                }
            }
        }
        level = next;
    }
    level.remove(&((1u32 << n) - 1)).unwrap_or_else(|| ring.zero())
}

/// Resultant with respect to `var` via the Sylvester matrix and Bareiss
/// elimination. A constant argument `c` gives `c^deg(other)`.
pub fn resultant<R: Ring>(f: &MPoly<R>, g: &MPoly<R>, var: usize) -> Result<MPoly<R>, MpolyError> {
    let (m, n) = (f.degree_in(var), g.degree_in(var));
    match (m, n) {
        (0, 0) => Err(MpolyError::BothConstant),
        (0, _) => Ok(f.pow(n)),
        (_, 0) => Ok(g.pow(m)),
        _ => Ok(det_bareiss(&sylvester_matrix(f, g, var, m as usize, n as usize))),
    }
}

/// Same value as [`resultant`], computed from the Bezout matrix with a
/// division-free determinant.
pub fn resultant_bezout<R: Ring>(f: &MPoly<R>, g: &MPoly<R>, var: usize) -> Result<MPoly<R>, MpolyError> {
    let (m, n) = (f.degree_in(var), g.degree_in(var));
    match (m, n) {
        (0, 0) => return Err(MpolyError::BothConstant),
        (0, _) => return Ok(f.pow(n)),
        (_, 0) => return Ok(g.pow(m)),
        _ => {}
    }
    if n > m {
        let r = resultant_bezout(g, f, var)?;
        return Ok(if (m * n) % 2 == 1 { r.neg() } else { r });
    }
    let d = det_expand(&bezout_matrix(f, g, var));
    let d = if (m * (m - 1) / 2) % 2 == 1 { d.neg() } else { d };
    if m == n {
        return Ok(d);
    }
    let lc = f.coefficients_in(var).pop().unwrap();
    d.exact_div(&lc.pow(m - n)).ok_or(MpolyError::NotDivisible)
}

/// `disc(g) = (-1)^(d(d-1)/2) Res(g, g') / lc(g)` with `g'` taken at formal
/// degree `d - 1`.
pub fn discriminant<R: Ring>(g: &MPoly<R>, var: usize) -> Result<MPoly<R>, MpolyError> {
    let d = g.degree_in(var) as usize;
    if d == 0 {
        return Err(MpolyError::BothConstant);
    }
    let dg = g.derivative(var);
    let res = if d == 1 {
        dg.clone()
    } else {
        det_bareiss(&sylvester_matrix(g, &dg, var, d, d - 1))
    };
    let lc = g.coefficients_in(var).pop().unwrap();
    let q = res.exact_div(&lc).ok_or(MpolyError::NotDivisible)?;
    Ok(if (d * (d - 1) / 2) % 2 == 1 { q.neg() } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::{MonomialOrder, PolyRing};
    use crate::ring::Integers;

    fn ring() -> PolyRing<Integers> {
        PolyRing::new(Integers, &["x", "a", "b", "c"], MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn quadratic_discriminant() {
        let r = ring();
        let g = r.parse("a*x^2 + b*x + c").unwrap();
        assert_eq!(discriminant(&g, 0).unwrap(), r.parse("b^2 - 4*a*c").unwrap());
    }

    #[test]
    fn cubic_discriminant() {
        let r = ring();
        let g = r.parse("x^3 + a*x + b").unwrap();
        assert_eq!(discriminant(&g, 0).unwrap(), r.parse("-4*a^3 - 27*b^2").unwrap());
    }

    #[test]
    fn bezout_agrees_with_sylvester() {
        let r = ring();
        let pairs = [
            ("a*x^3 + b*x + c", "x^2 + a*x + 3"),
            ("x^4 + a*x^3 - b", "c*x^4 + 2*x + a*b"),
            ("x^2 + a", "b*x^3 + c*x - 1"),
            ("(x - a)*(x - b)*(x + 2)", "3*x^2 + c"),
        ];
        for (f, g) in pairs {
            let (f, g) = (r.parse(f).unwrap(), r.parse(g).unwrap());
            let s = resultant(&f, &g, 0).unwrap();
            assert_eq!(resultant_bezout(&f, &g, 0).unwrap(), s, "{f} / {g}");
            assert_eq!(det_expand(&sylvester_matrix(&f, &g, 0, f.degree_in(0) as usize, g.degree_in(0) as usize)), s);
        }
    }

    #[test]
    fn resultant_of_linear_factors() {
        let r = ring();
        let f = r.parse("(x - a)*(x - b)").unwrap();
        let g = r.parse("x - c").unwrap();
        assert_eq!(resultant(&f, &g, 0).unwrap(), r.parse("(a - c)*(b - c)").unwrap());
        assert_eq!(resultant(&r.parse("a + b").unwrap(), &r.parse("c").unwrap(), 0), Err(MpolyError::BothConstant));
    }
}
