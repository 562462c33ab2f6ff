use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Maximum number of variables in a polynomial ring.
pub const MAX_VARS: usize = 20;

/// Exponent vector with cached total degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u32,
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::default();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(e: &[u32]) -> Self {
        assert!(e.len() <= MAX_VARS, "too many variables");
        let mut m = Self::default();
        for (i, &x) in e.iter().enumerate() {
            m.exps[i] = u16::try_from(x).expect("exponent overflow");
            m.deg += x;
        }
        m
    }

    #[inline]
    pub fn exps(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    #[inline]
    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn with(&self, i: usize, e: u32) -> Self {
        let mut m = *self;
        m.deg = m.deg - m.exps[i] as u32 + e;
        m.exps[i] = u16::try_from(e).expect("exponent overflow");
        m
    }

    #[inline]
    pub fn mul(&self, o: &Self) -> Self {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] += o.exps[i];
        }
        m.deg += o.deg;
        m
    }

    #[inline]
    pub fn divides(&self, o: &Self) -> bool {
        self.deg <= o.deg && self.exps.iter().zip(&o.exps).all(|(a, b)| a <= b)
    }

    /// `o / self` when `self` divides `o`.
    #[inline]
    pub fn div_into(&self, o: &Self) -> Option<Self> {
        if !self.divides(o) {
            return None;
        }
        let mut m = *o;
        for i in 0..MAX_VARS {
            m.exps[i] -= self.exps[i];
        }
        m.deg -= self.deg;
        Some(m)
    }

    pub fn lcm(&self, o: &Self) -> Self {
        let mut m = Self::default();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].max(o.exps[i]);
            m.deg += m.exps[i] as u32;
        }
        m
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut m = Self::default();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].min(o.exps[i]);
            m.deg += m.exps[i] as u32;
        }
        m
    }

    pub fn is_coprime(&self, o: &Self) -> bool {
        self.exps.iter().zip(&o.exps).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Bit `i` set when variable `i` occurs.
    #[inline]
    pub fn support_mask(&self) -> u32 {
        let mut s = 0u32;
        for i in 0..MAX_VARS {
            if self.exps[i] != 0 {
                s |= 1 << i;
            }
        }
        s
    }
}

/// Monomial orders, with variable `0` ranked highest.
///
/// `Block { split }` compares the variables `0..split` by graded reverse
/// lexicographic order first and breaks ties with grevlex on the rest, so it
/// eliminates the first block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    Grevlex,
    Block { split: usize },
}

fn grevlex_range(a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
    let da: u32 = a.exps[lo..hi].iter().map(|&e| e as u32).sum();
    let db: u32 = b.exps[lo..hi].iter().map(|&e| e as u32).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (lo..hi).rev() {
        if a.exps[i] != b.exps[i] {
            return b.exps[i].cmp(&a.exps[i]);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Grevlex => {
                if a.deg != b.deg {
                    return a.deg.cmp(&b.deg);
                }
                for i in (0..MAX_VARS).rev() {
                    if a.exps[i] != b.exps[i] {
                        return b.exps[i].cmp(&a.exps[i]);
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block { split } => {
                grevlex_range(a, b, 0, split).then_with(|| grevlex_range(a, b, split, MAX_VARS))
            }
        }
    }

    /// A key whose natural ordering agrees with `cmp`.
    pub fn key(&self, m: &Monomial) -> SortKey {
        let mut k = [0u32; MAX_VARS + 2];
        match *self {
            MonomialOrder::Lex => {
                for i in 0..MAX_VARS {
                    k[i] = m.exps[i] as u32;
                }
            }
            MonomialOrder::Grevlex => {
                k[0] = m.deg;
                for i in 0..MAX_VARS {
                    k[1 + i] = u16::MAX as u32 - m.exps[MAX_VARS - 1 - i] as u32;
                }
            }
            MonomialOrder::Block { split } => {
                let mut pos = 0;
                for (lo, hi) in [(0, split), (split, MAX_VARS)] {
                    k[pos] = m.exps[lo..hi].iter().map(|&e| e as u32).sum();
                    pos += 1;
                    for i in (lo..hi).rev() {
                        k[pos] = u16::MAX as u32 - m.exps[i] as u32;
                        pos += 1;
                    }
                }
            }
        }
        SortKey(k)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SortKey([u32; MAX_VARS + 2]);

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exps(e)
    }

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::Grevlex;
        // x^2 > xy > y^2 > xz > yz > z^2 in grevlex with x > y > z
        let seq = [m(&[2, 0, 0]), m(&[1, 1, 0]), m(&[0, 2, 0]), m(&[1, 0, 1]), m(&[0, 1, 1]), m(&[0, 0, 2])];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater, "{:?} {:?}", w[0], w[1]);
            assert!(o.key(&w[0]) > o.key(&w[1]));
        }
    }

    #[test]
    fn block_eliminates_first_block() {
        let o = MonomialOrder::Block { split: 1 };
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 1, 2]), &m(&[0, 2, 0])), Ordering::Greater);
        assert!(o.key(&m(&[1, 0, 0])) > o.key(&m(&[0, 5, 5])));
    }

    #[test]
    fn lex_examples() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 9, 9])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 2, 0]), &m(&[1, 1, 9])), Ordering::Greater);
    }
}
