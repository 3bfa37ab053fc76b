//! Arithmetic in the prime field F_p with the prime chosen at runtime.
//!
//! Field elements are plain `u32` residues in `[0, p)`; the modulus lives in
//! a [`PrimeField`] value that is passed to every operation. Keeping the
//! modulus out of the element type lets one binary serve every prime without
//! generic parameters leaking through the rest of the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A residue in `[0, p)`; the prime is carried by the ambient [`PrimeField`].
pub type FieldElement = u32;

/// Largest prime accepted, so that products of two residues fit in a `u64`
/// with room to spare for accumulation.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// The prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// Creates F_p, rejecting composites and primes above [`MAX_PRIME`].
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    pub fn from_i64(&self, v: i64) -> FieldElement {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn from_u64(&self, v: u64) -> FieldElement {
        (v % self.p as u64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for display only.
    pub fn to_signed(&self, a: FieldElement) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a as u64 + b as u64;
        (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    /// Panics on zero; callers only invert pivots, which are nonzero by
    /// construction.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `num / den` reduced into the field, if `den` is invertible.
    pub fn ratio(&self, num: i64, den: i64) -> Option<FieldElement> {
        let d = self.from_i64(den);
        if d == 0 {
            return None;
        }
        Some(self.mul(self.from_i64(num), self.inv(d)))
    }
}

/// Deterministic trial-division primality test; inputs here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn inverses_multiply_to_one() {
        let f = PrimeField::new(11).unwrap();
        for a in 1..11 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn ratio_and_signed_display() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.ratio(1, 2), Some(4));
        assert_eq!(f.ratio(1, 7), None);
        assert_eq!(f.to_signed(6), -1);
        assert_eq!(f.from_i64(-2), 5);
    }
}
