//! Arithmetic in the prime field `F_p` and binomial coefficients modulo `p`.
//!
//! Field elements carry no modulus. Every operation goes through a
//! [`PrimeField`] context, so several characteristics can be used side by
//! side as long as elements are only combined within their own context.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `F_p`, stored reduced into `[0, p)`.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Fp(u32);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for Fp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The prime field of characteristic `p > 3`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Fails unless `p` is a prime greater than 3 that fits comfortably in 31 bits.
    pub fn new(p: u32) -> Result<Self> {
        if p <= 3 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn elem(&self, v: i64) -> Fp {
        Fp(v.rem_euclid(self.p as i64) as u32)
    }

    /// Wraps an already reduced value.
    #[inline]
    pub fn from_reduced(&self, v: u32) -> Result<Fp> {
        if v < self.p {
            Ok(Fp(v))
        } else {
            Err(Error::Parse(format!(
                "{v} is not reduced modulo {}",
                self.p
            )))
        }
    }

    /// Symmetric representative in `(-p/2, p/2]`, handy for reports.
    pub fn centered(&self, a: Fp) -> i64 {
        let v = a.0 as i64;
        if v > (self.p as i64) / 2 {
            v - self.p as i64
        } else {
            v
        }
    }

    #[inline]
    pub fn add(&self, a: Fp, b: Fp) -> Fp {
        let s = a.0 + b.0;
        Fp(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: Fp, b: Fp) -> Fp {
        Fp(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.p - b.0
        })
    }

    #[inline]
    pub fn neg(&self, a: Fp) -> Fp {
        Fp(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: Fp, b: Fp) -> Fp {
        Fp(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    /// `a` if `negate` is false, `-a` otherwise. Used for Koszul signs.
    #[inline]
    pub fn signed(&self, a: Fp, negate: bool) -> Fp {
        if negate {
            self.neg(a)
        } else {
            a
        }
    }

    pub fn pow(&self, a: Fp, mut e: u64) -> Fp {
        let mut base = a;
        let mut acc = Fp::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fp) -> Result<Fp> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Ok(self.elem(s0))
    }

    /// `C(a, b) mod p` by Lucas' theorem, digit by digit in base `p`.
    pub fn binomial(&self, mut a: u64, mut b: u64) -> Fp {
        if b > a {
            return Fp::ZERO;
        }
        let p = self.p as u64;
        let mut acc = Fp::ONE;
        while b > 0 {
            let (ad, bd) = (a % p, b % p);
            if bd > ad {
                return Fp::ZERO;
            }
            acc = self.mul(acc, self.small_binomial(ad, bd));
            a /= p;
            b /= p;
        }
        acc
    }

    // C(a, b) for 0 <= b <= a < p, via the multiplicative formula
    fn small_binomial(&self, a: u64, b: u64) -> Fp {
        let b = b.min(a - b);
        let mut num = Fp::ONE;
        let mut den = Fp::ONE;
        for i in 0..b {
            num = self.mul(num, self.elem((a - i) as i64));
            den = self.mul(den, self.elem((i + 1) as i64));
        }
        // den is a product of integers < p, hence invertible
        self.mul(num, self.inv(den).expect("nonzero denominator"))
    }

    /// `∏ C(α_i + β_i, α_i) mod p`.
    pub fn multi_binomial(&self, alpha: &[u32], beta: &[u32]) -> Result<Fp> {
        if alpha.len() != beta.len() {
            return Err(Error::LengthMismatch {
                left: alpha.len(),
                right: beta.len(),
            });
        }
        let mut acc = Fp::ONE;
        for (&a, &b) in alpha.iter().zip(beta) {
            acc = self.mul(acc, self.binomial(a as u64 + b as u64, a as u64));
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_composite_characteristics() {
        for p in [0, 1, 2, 3, 4, 9, 25] {
            assert_eq!(PrimeField::new(p), Err(Error::InvalidCharacteristic(p)));
        }
        assert!(PrimeField::new(5).is_ok());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn basic_ops_mod_five() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.add(f.elem(3), f.elem(4)), f.elem(2));
        assert_eq!(f.inv(f.elem(2)).unwrap(), f.elem(3));
        assert_eq!(f.inv(Fp::ZERO), Err(Error::ZeroInverse));
        assert_eq!(f.neg(f.elem(1)), f.elem(4));
        assert_eq!(f.sub(f.elem(1), f.elem(3)), f.elem(3));
        assert_eq!(f.elem(-7), f.elem(3));
        assert_eq!(f.centered(f.elem(4)), -1);
    }

    #[test]
    fn inverse_of_every_unit() {
        for p in [5u32, 7, 11, 13, 101] {
            let f = PrimeField::new(p).unwrap();
            for v in 1..p {
                let a = f.elem(v as i64);
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Fp::ONE);
            }
        }
    }

    #[test]
    fn lucas_examples() {
        let f = PrimeField::new(5).unwrap();
        // C(4,2) = 6, C(5,2) = 10
        assert_eq!(f.binomial(4, 2), f.elem(1));
        assert_eq!(f.binomial(5, 2), Fp::ZERO);
        assert_eq!(f.binomial(3, 7), Fp::ZERO);
        for k in 0..60 {
            assert_eq!(f.binomial(k, 0), Fp::ONE);
        }
    }

    #[test]
    fn multi_binomial_examples() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.multi_binomial(&[1, 0], &[1, 0]).unwrap(), f.elem(2));
        // C(5,4) = 5
        assert_eq!(f.multi_binomial(&[4, 0], &[1, 0]).unwrap(), Fp::ZERO);
        assert_eq!(f.multi_binomial(&[0, 0], &[3, 2]).unwrap(), Fp::ONE);
        assert!(matches!(
            f.multi_binomial(&[1], &[1, 0]),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
