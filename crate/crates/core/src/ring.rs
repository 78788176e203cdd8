//! The residue ring `R = Z/p^e Z` for an odd prime `p` and `e >= 2`.
//!
//! Elements are plain `u64` values kept in canonical form `[0, p^e)`. The
//! modulus is capped at `u32::MAX` so that a product of two residues always
//! fits in a `u64` without widening.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// A canonical residue in `[0, p^e)`.
pub type Residue = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingCtx {
    p: u64,
    e: u32,
    modulus: u64,
}

impl RingCtx {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if p < 3 || !arith::is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if e < 2 {
            return Err(Error::ExponentTooSmall(e));
        }
        let modulus = p
            .checked_pow(e)
            .filter(|m| *m <= u32::MAX as u64)
            .ok_or(Error::ModulusOverflow { p, e })?;
        Ok(Self { p, e, modulus })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p^i` for `0 <= i <= e`.
    #[inline]
    pub fn p_pow(&self, i: u32) -> u64 {
        debug_assert!(i <= self.e);
        self.p.pow(i)
    }

    pub fn reduce(&self, v: i64) -> Residue {
        v.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: Residue) -> Residue {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        a * b % self.modulus
    }

    pub fn pow(&self, a: Residue, exp: u64) -> Residue {
        arith::mod_pow(a, exp, self.modulus)
    }

    pub fn inv(&self, a: Residue) -> Option<Residue> {
        arith::mod_inv(a, self.modulus)
    }

    #[inline]
    pub fn is_unit(&self, a: Residue) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Units of `R` in increasing order.
    pub fn units(&self) -> impl Iterator<Item = Residue> + '_ {
        (0..self.modulus).filter(move |a| self.is_unit(*a))
    }

    /// `|R^x| = p^(e-1) (p-1)`.
    pub fn unit_count(&self) -> u64 {
        self.p_pow(self.e - 1) * (self.p - 1)
    }

    /// Base-`p` digits, least significant first: `a = sum d_i p^i`.
    pub fn digits(&self, a: Residue) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.e as usize);
        let mut a = a % self.modulus;
        for _ in 0..self.e {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    /// Digit `i` of `a` (the coordinate `a_i`).
    #[inline]
    pub fn digit(&self, a: Residue, i: u32) -> u64 {
        a / self.p.pow(i) % self.p
    }

    pub fn from_digits(&self, d: &[u64]) -> Result<Residue> {
        if d.len() != self.e as usize {
            return Err(Error::LengthMismatch {
                expected: self.e as usize,
                got: d.len(),
            });
        }
        let mut acc = 0u64;
        for (position, &digit) in d.iter().enumerate().rev() {
            if digit >= self.p {
                return Err(Error::DigitOutOfRange {
                    position,
                    digit,
                    p: self.p,
                });
            }
            acc = acc * self.p + digit;
        }
        Ok(acc)
    }

    /// The `m` elements `w` with `w^m = 1`, sorted. Requires `m | p - 1`.
    pub fn roots_of_unity(&self, m: u64) -> Result<Vec<Residue>> {
        if m == 0 || !(self.p - 1).is_multiple_of(m) {
            return Err(Error::NotDivisorOfPMinusOne {
                m,
                p_minus_1: self.p - 1,
            });
        }
        let g = self.unit_generator();
        let order = self.unit_count();
        let w = self.pow(g, order / m);
        let mut roots: Vec<Residue> = std::iter::successors(Some(1), |x| Some(self.mul(*x, w)))
            .take(m as usize)
            .collect();
        roots.sort_unstable();
        Ok(roots)
    }

    /// Smallest generator of the cyclic group `R^x`.
    pub fn unit_generator(&self) -> Residue {
        let order = self.unit_count();
        self.units()
            .find(|&g| self.order_of(g) == order)
            .expect("R^x is cyclic for odd p")
    }

    /// Multiplicative order of a unit.
    pub fn order_of(&self, a: Residue) -> u64 {
        arith::element_order(&a, self.unit_count(), |x, k| self.pow(*x, k), |x| *x == 1)
    }

    /// `a + p^(e-1) R`, sorted.
    pub fn top_coset(&self, a: Residue) -> Vec<Residue> {
        let step = self.p_pow(self.e - 1);
        let base = a % step;
        (0..self.p).map(|j| base + j * step).collect()
    }

    /// The orbit `{a w^i : i in Z}` under multiplication by `w`, sorted.
    pub fn orbit(&self, a: Residue, w: Residue) -> Vec<Residue> {
        let mut out = vec![a];
        let mut x = self.mul(a, w);
        while x != a {
            out.push(x);
            x = self.mul(x, w);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Signed representative in `(-p^e/2, p^e/2]`, for display.
    pub fn signed(&self, a: Residue) -> i64 {
        if a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, e: u32) -> RingCtx {
        RingCtx::new(p, e).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(RingCtx::new(2, 3), Err(Error::NotOddPrime(2)));
        assert_eq!(RingCtx::new(9, 2), Err(Error::NotOddPrime(9)));
        assert_eq!(RingCtx::new(3, 1), Err(Error::ExponentTooSmall(1)));
        assert!(matches!(RingCtx::new(3, 21), Err(Error::ModulusOverflow { .. })));
        assert!(RingCtx::new(3, 20).is_ok());
    }

    #[test]
    fn digits_examples() {
        assert_eq!(ring(3, 2).digits(7), vec![1, 2]);
        assert_eq!(ring(3, 2).digits(0), vec![0, 0]);
        assert_eq!(ring(3, 3).digits(13), vec![1, 1, 1]);
    }

    #[test]
    fn from_digits_examples() {
        assert_eq!(ring(3, 2).from_digits(&[1, 2]), Ok(7));
        assert_eq!(ring(3, 3).from_digits(&[0, 0, 0]), Ok(0));
        assert_eq!(ring(3, 3).from_digits(&[1, 1, 1]), Ok(13));
        assert_eq!(
            ring(3, 2).from_digits(&[3, 0]),
            Err(Error::DigitOutOfRange { position: 0, digit: 3, p: 3 })
        );
        assert!(matches!(ring(3, 2).from_digits(&[1]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn roots_of_unity_examples() {
        assert_eq!(ring(3, 2).roots_of_unity(2).unwrap(), vec![1, 8]);
        assert_eq!(ring(5, 2).roots_of_unity(2).unwrap(), vec![1, 24]);
        assert_eq!(ring(3, 2).roots_of_unity(1).unwrap(), vec![1]);
        assert!(ring(3, 2).roots_of_unity(3).is_err());
        let r = ring(7, 2);
        for m in [1, 2, 3, 6] {
            let roots = r.roots_of_unity(m).unwrap();
            assert_eq!(roots.len() as u64, m);
            let brute: Vec<u64> = (0..r.modulus()).filter(|&w| r.pow(w, m) == 1).collect();
            assert_eq!(roots, brute);
        }
    }

    #[test]
    fn roots_closed_under_mul_and_inverse() {
        let r = ring(7, 2);
        let roots = r.roots_of_unity(3).unwrap();
        for &a in &roots {
            assert!(r.is_unit(a));
            assert!(roots.contains(&r.inv(a).unwrap()));
            for &b in &roots {
                assert!(roots.contains(&r.mul(a, b)));
            }
        }
    }

    #[test]
    fn top_coset_examples() {
        assert_eq!(ring(3, 2).top_coset(1), vec![1, 4, 7]);
        assert_eq!(ring(3, 2).top_coset(4), vec![1, 4, 7]);
        assert_eq!(ring(3, 3).top_coset(0), vec![0, 9, 18]);
    }

    #[test]
    fn top_cosets_partition_ring() {
        for (p, e) in [(3, 2), (3, 3), (5, 2)] {
            let r = ring(p, e);
            let mut seen = vec![0u32; r.modulus() as usize];
            let mut blocks = std::collections::BTreeSet::new();
            for a in 0..r.modulus() {
                let c = r.top_coset(a);
                assert_eq!(c.len() as u64, p);
                assert!(c.contains(&a));
                blocks.insert(c);
            }
            for b in &blocks {
                for &x in b {
                    seen[x as usize] += 1;
                }
            }
            assert_eq!(blocks.len() as u64, r.p_pow(e - 1));
            assert!(seen.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn unit_count_matches_gcd_census() {
        for (p, e) in [(3, 2), (3, 3), (5, 2), (7, 2)] {
            let r = ring(p, e);
            let brute = (0..r.modulus()).filter(|&a| arith::gcd(a, r.modulus()) == 1).count();
            assert_eq!(brute as u64, r.unit_count());
            assert_eq!(r.units().count() as u64, r.unit_count());
        }
    }

    #[test]
    fn digits_round_trip_exhaustive() {
        for (p, e) in [(3, 2), (3, 3), (5, 2), (5, 3)] {
            let r = ring(p, e);
            for a in 0..r.modulus() {
                let d = r.digits(a);
                assert!(d.iter().all(|&x| x < p));
                assert_eq!(r.from_digits(&d), Ok(a));
                for (i, &x) in d.iter().enumerate() {
                    assert_eq!(r.digit(a, i as u32), x);
                }
            }
        }
    }

    #[test]
    fn signed_display() {
        let r = ring(3, 2);
        assert_eq!(r.signed(5), -4);
        assert_eq!(r.signed(4), 4);
        assert_eq!(r.signed(8), -1);
    }
}
