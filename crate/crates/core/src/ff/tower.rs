use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use super::{FfError, FieldElement, GaloisField, PrimeField, UPoly};
use crate::ring::{Field, Ring};

/// All extensions F_{p^k} of one prime field, each defined by the smallest
/// monic irreducible polynomial of degree `k` (coefficients read as base-p
/// digits, constant term least significant), together with embeddings
/// between levels.
///
/// Embeddings are compatible: going `a -> b -> c` agrees with `a -> c`.
/// At each level `c`, the images of the generators of all proper divisor
/// levels are chosen in increasing order of the divisor, each as the
/// smallest root that agrees with the choices already made for smaller
/// divisors.
pub struct FieldTower {
    prime: PrimeField,
    levels: RwLock<BTreeMap<usize, GaloisField>>,
    // (a, c) -> images of g_a^0 .. g_a^(a-1) in level c
    embeddings: RwLock<HashMap<(usize, usize), Arc<Vec<FieldElement>>>>,
}

impl std::fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldTower(p = {})", self.p())
    }
}

impl FieldTower {
    pub fn new(p: u32) -> Result<Self, FfError> {
        Ok(FieldTower {
            prime: PrimeField::new(p)?,
            levels: RwLock::new(BTreeMap::new()),
            embeddings: RwLock::new(HashMap::new()),
        })
    }

    /// Process-wide tower for `p`.
    pub fn shared(p: u32) -> Result<Arc<FieldTower>, FfError> {
        static TOWERS: OnceLock<Mutex<HashMap<u32, Arc<FieldTower>>>> = OnceLock::new();
        let mut map = TOWERS.get_or_init(Default::default).lock().unwrap();
        if let Some(t) = map.get(&p) {
            return Ok(t.clone());
        }
        let t = Arc::new(FieldTower::new(p)?);
        map.insert(p, t.clone());
        Ok(t)
    }

    pub fn p(&self) -> u32 {
        self.prime.p()
    }

    pub fn prime_field(&self) -> PrimeField {
        self.prime
    }

    /// The level `k` field, created on first use.
    pub fn field(&self, k: usize) -> Result<GaloisField, FfError> {
        if k == 0 {
            return Err(FfError::ZeroDegree);
        }
        if let Some(f) = self.levels.read().unwrap().get(&k) {
            return Ok(f.clone());
        }
        let f = GaloisField::from_parts(self.prime, smallest_irreducible(self.prime, k));
        Ok(self.levels.write().unwrap().entry(k).or_insert(f).clone())
    }

    /// Level field; panics on `k == 0`.
    pub fn level(&self, k: usize) -> GaloisField {
        self.field(k).expect("level must be positive")
    }

    pub fn from_i64(&self, n: i64, k: usize) -> FieldElement {
        self.level(k).from_i64(n)
    }

    /// Maps `e` into level `to`; `to` must be a multiple of the level of `e`.
    pub fn embed(&self, e: &FieldElement, to: usize) -> Result<FieldElement, FfError> {
        let from = e.level();
        if from == to {
            return Ok(e.clone());
        }
        if from == 0 || to % from != 0 {
            return Err(FfError::NoEmbedding { from, to });
        }
        let target = self.field(to)?;
        if from == 1 {
            return Ok(target.from_base(e.0[0]));
        }
        let img = self.embedding(from, to);
        let mut acc = target.zero();
        for (c, im) in e.0.iter().zip(img.iter()) {
            if *c != 0 {
                acc = target.add(&acc, &target.mul(&target.from_base(*c), im));
            }
        }
        Ok(acc)
    }

    /// Embeds into the level; panics if it is not a multiple.
    pub fn lift(&self, e: &FieldElement, to: usize) -> FieldElement {
        self.embed(e, to).expect("incompatible levels")
    }

    /// Preimage of `e` in level `to` (a divisor of its level), if `e` lies
    /// in that subfield.
    pub fn descend(&self, e: &FieldElement, to: usize) -> Option<FieldElement> {
        let from = e.level();
        if from == to {
            return Some(e.clone());
        }
        if to == 0 || from % to != 0 {
            return None;
        }
        let fp = self.prime;
        if to == 1 {
            return e.0[1..].iter().all(|&c| c == 0).then(|| FieldElement(vec![e.0[0]]));
        }
        let img = self.embedding(to, from);
        // solve sum x_i img_i = e over F_p: `from` equations, `to` unknowns
        let mut rows: Vec<Vec<u32>> = (0..from)
            .map(|r| {
                let mut row: Vec<u32> = img.iter().map(|v| v.0[r]).collect();
                row.push(e.0[r]);
                row
            })
            .collect();
        let sol = solve_fp(fp, &mut rows, to)?;
        Some(FieldElement(sol))
    }

    /// Smallest level (a divisor of the element's level) containing `e`.
    pub fn minimal_level(&self, e: &FieldElement) -> usize {
        let k = e.level();
        (1..=k).filter(|d| k % d == 0).find(|&d| self.descend(e, d).is_some()).unwrap_or(k)
    }

    /// Lifts all elements to the least common multiple of their levels.
    pub fn common_level(&self, elems: &[&FieldElement]) -> (usize, Vec<FieldElement>) {
        let k = elems.iter().fold(1, |acc, e| lcm(acc, e.level()));
        (k, elems.iter().map(|e| self.lift(e, k)).collect())
    }

    /// Splitting level of `f` (a multiple of its coefficients' level) and its
    /// distinct roots there, sorted.
    pub fn split(&self, f: &UPoly<GaloisField>) -> (usize, Vec<FieldElement>) {
        let k = f.field().k();
        let lvl = f.factor().iter().fold(k, |acc, (h, _)| lcm(acc, k * h.degree().unwrap()));
        let l = self.level(lvl);
        let fl = UPoly::new(l, f.coeffs().iter().map(|c| self.lift(c, lvl)).collect());
        (lvl, fl.roots())
    }

    fn embedding(&self, a: usize, c: usize) -> Arc<Vec<FieldElement>> {
        if let Some(v) = self.embeddings.read().unwrap().get(&(a, c)) {
            return v.clone();
        }
        self.build_level_embeddings(c);
        self.embeddings.read().unwrap()[&(a, c)].clone()
    }

    // fixes the images of all proper divisor levels inside level c
    fn build_level_embeddings(&self, c: usize) {
        let fc = self.level(c);
        let divisors: Vec<usize> = (2..c).filter(|d| c % d == 0).collect();
        let mut roots: BTreeMap<usize, FieldElement> = BTreeMap::new();
        for &a in &divisors {
            let fa = self.level(a);
            let m = UPoly::new(fc.clone(), fa.modulus().iter().map(|&x| fc.from_base(x)).collect());
            let cands = m.roots();
            let sub: Vec<usize> = divisors.iter().copied().filter(|&d| d < a && a % d == 0).collect();
            let chosen = cands
                .into_iter()
                .find(|r| {
                    sub.iter().all(|&d| {
                        // g_d as an element of level a, mapped through g_a -> r
                        let gd_in_a = self.embed(&self.level(d).generator(), a).unwrap();
                        let mapped = eval_at(&fc, &gd_in_a, r);
                        mapped == roots[&d]
                    })
                })
                .expect("compatible embedding exists");
            roots.insert(a, chosen);
        }
        let mut map = self.embeddings.write().unwrap();
        for (a, r) in roots {
            let mut pw = Vec::with_capacity(a);
            let mut acc = fc.one();
            for _ in 0..a {
                pw.push(acc.clone());
                acc = fc.mul(&acc, &r);
            }
            map.entry((a, c)).or_insert_with(|| Arc::new(pw));
        }
    }
}

// evaluates the coefficient polynomial of `e` at `r`
fn eval_at(f: &GaloisField, e: &FieldElement, r: &FieldElement) -> FieldElement {
    let mut acc = f.zero();
    for &c in e.0.iter().rev() {
        acc = f.add(&f.mul(&acc, r), &f.from_base(c));
    }
    acc
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / num_integer::gcd(a, b) * b
}

fn smallest_irreducible(fp: PrimeField, k: usize) -> Vec<u32> {
    let p = fp.p() as u64;
    let mut n: u64 = 0;
    loop {
        let mut c = Vec::with_capacity(k + 1);
        let mut t = n;
        for _ in 0..k {
            c.push((t % p) as u32);
            t /= p;
        }
        c.push(1);
        if UPoly::new(fp, c.clone()).is_irreducible() {
            return c;
        }
        n += 1;
    }
}

/// Solves an augmented system over F_p with `n` unknowns; `None` if
/// inconsistent. Free variables are set to zero.
pub(crate) fn solve_fp(fp: PrimeField, rows: &mut [Vec<u32>], n: usize) -> Option<Vec<u32>> {
    let mut piv_cols = vec![];
    let mut r = 0;
    for col in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, pr);
        let inv = fp.inv(&rows[r][col]).unwrap();
        for x in rows[r].iter_mut() {
            *x = fp.mul(x, &inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let f = rows[i][col];
                for j in 0..=n {
                    let t = fp.mul(&f, &rows[r][j]);
                    rows[i][j] = fp.sub(&rows[i][j], &t);
                }
            }
        }
        piv_cols.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut x = vec![0; n];
    for (i, &c) in piv_cols.iter().enumerate() {
        x[c] = rows[i][n];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embeddings_are_compatible() {
        let t = FieldTower::new(5).unwrap();
        let f2 = t.level(2);
        let g2 = f2.generator();
        let via4 = t.lift(&t.lift(&g2, 4), 8);
        assert_eq!(via4, t.lift(&g2, 8));
        let g4 = t.level(4).generator();
        assert_eq!(t.descend(&t.lift(&g4, 8), 4), Some(g4));
        assert_eq!(t.descend(&t.level(4).generator(), 2), None);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let t = FieldTower::new(3).unwrap();
        let (f2, f6) = (t.level(2), t.level(6));
        for a in f2.elements() {
            for b in f2.elements() {
                let lhs = t.lift(&f2.mul(&a, &b), 6);
                let rhs = f6.mul(&t.lift(&a, 6), &t.lift(&b, 6));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn defining_polynomials_are_smallest() {
        let t = FieldTower::new(7).unwrap();
        assert_eq!(t.level(2).modulus(), &[1, 0, 1]);
        assert_eq!(t.level(1).modulus(), &[0, 1]);
    }
}
