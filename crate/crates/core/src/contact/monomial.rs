//! Exponent-vector monomials in the complexified degree −1 generators.
//!
//! A monomial of width `2n` records exponents for the generators
//! `z1, …, zn, zb1, …, zbn`: slots `0..n` are holomorphic, slots `n..2n`
//! antiholomorphic.  Monomials are commutative; the symmetric powers they
//! span carry every graded component of the contact algebra.

use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    /// The empty monomial (the constant 1).
    pub fn one(width: usize) -> Self {
        assert!(width > 0 && width % 2 == 0, "width must be a positive even number");
        Monomial(vec![0; width])
    }

    /// The single generator sitting in `slot`.
    pub fn generator(width: usize, slot: usize) -> Self {
        let mut m = Monomial::one(width);
        assert!(slot < width, "generator slot out of range");
        m.0[slot] = 1;
        m
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        assert!(!exps.is_empty() && exps.len() % 2 == 0, "width must be a positive even number");
        Monomial(exps)
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn exp(&self, slot: usize) -> u32 {
        self.0[slot]
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    /// Total polynomial degree.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    /// Holomorphic and antiholomorphic degrees `(l, m)`.
    pub fn bidegree(&self) -> (i64, i64) {
        let n = self.0.len() / 2;
        let l = self.0[..n].iter().map(|&e| e as i64).sum();
        let m = self.0[n..].iter().map(|&e| e as i64).sum();
        (l, m)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.width(), other.width(), "monomial width mismatch");
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial(self.0.iter().map(|&a| a * e).collect())
    }

    /// Formal partial derivative in one slot.  Returns the integer factor
    /// brought down together with the reduced monomial, or `None` when the
    /// slot does not occur.
    pub fn derivative(&self, slot: usize) -> Option<(u32, Monomial)> {
        if self.0[slot] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        let f = e[slot];
        e[slot] -= 1;
        Some((f, Monomial(e)))
    }

    /// Swap each `z_i` with `zb_i`.
    pub fn conjugate_slots(&self) -> Monomial {
        let n = self.0.len() / 2;
        let mut e = vec![0; self.0.len()];
        for i in 0..n {
            e[i] = self.0[i + n];
            e[i + n] = self.0[i];
        }
        Monomial(e)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial{:?}", self.0)
    }
}

/// All monomials of the given width and total degree, in increasing
/// lexicographic order of their exponent vectors.
pub fn monomials(width: usize, degree: u32) -> Vec<Monomial> {
    assert!(width > 0 && width % 2 == 0, "width must be a positive even number");
    let mut out = Vec::new();
    let mut cur = vec![0u32; width];
    fill(&mut out, &mut cur, 0, degree);
    out
}

fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, slot: usize, rem: u32) {
    if slot + 1 == cur.len() {
        cur[slot] = rem;
        out.push(Monomial(cur.clone()));
        cur[slot] = 0;
        return;
    }
    for e in 0..=rem {
        cur[slot] = e;
        fill(out, cur, slot + 1, rem - e);
    }
    cur[slot] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        num_integer::binomial(n, k)
    }

    #[test]
    fn enumeration_is_complete_and_sorted() {
        for n in 1..=3usize {
            for d in 0..=5u32 {
                let ms = monomials(2 * n, d);
                let expect = binomial((2 * n as u64 - 1) + d as u64, d as u64);
                assert_eq!(ms.len() as u64, expect, "n={n} d={d}");
                for w in ms.windows(2) {
                    assert!(w[0] < w[1]);
                }
                for m in &ms {
                    assert_eq!(m.degree(), d as i64);
                }
            }
        }
    }

    #[test]
    fn derivative_and_product() {
        // z1^2 * zb2, width 4
        let m = Monomial::from_exps(vec![2, 0, 0, 1]);
        let (f, dm) = m.derivative(0).unwrap();
        assert_eq!(f, 2);
        assert_eq!(dm, Monomial::from_exps(vec![1, 0, 0, 1]));
        assert!(m.derivative(1).is_none());
        assert_eq!(dm.mul(&Monomial::generator(4, 0)), m);
        assert_eq!(m.degree(), 3);
        assert_eq!(m.bidegree(), (2, 1));
    }

    #[test]
    fn conjugation_swaps_slots() {
        let m = Monomial::from_exps(vec![2, 1, 0, 3]);
        assert_eq!(m.conjugate_slots(), Monomial::from_exps(vec![0, 3, 2, 1]));
        assert_eq!(m.conjugate_slots().conjugate_slots(), m);
        assert_eq!(m.conjugate_slots().bidegree(), (3, 3));
    }
}
