//! Arithmetic in the nine imaginary quadratic rings of integers with class
//! number one.
//!
//! Elements are stored as `a + b·ω` in the integral basis `{1, ω}` where
//! `ω = √−D` for `D ≡ 1, 2 (mod 4)` and `ω = (1 + √−D)/2` for `D ≡ 3 (mod 4)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The square-free `D` for which `Q(√−D)` has class number one.
pub const ADMISSIBLE_D: [u32; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

/// An admissible ring `O_D`. Construction is the only place `D` is validated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u32")]
pub struct Ring(u32);

impl TryFrom<i64> for Ring {
    type Error = Error;
    fn try_from(d: i64) -> Result<Self> {
        Ring::new(d)
    }
}

impl From<Ring> for u32 {
    fn from(r: Ring) -> u32 {
        r.0
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Ring {
    pub fn new(d: i64) -> Result<Self> {
        match u32::try_from(d) {
            Ok(d) if ADMISSIBLE_D.contains(&d) => Ok(Ring(d)),
            _ => Err(Error::InadmissibleD(d)),
        }
    }

    /// All nine rings in increasing `D`.
    pub fn all() -> impl Iterator<Item = Ring> {
        ADMISSIBLE_D.iter().map(|&d| Ring(d))
    }

    #[inline]
    pub fn d(self) -> u32 {
        self.0
    }

    /// True when `D ≡ 3 (mod 4)`, i.e. `ω = (1 + √−D)/2`.
    #[inline]
    pub fn is_half_integral(self) -> bool {
        self.0 % 4 == 3
    }

    /// `(1 + D)/4` for half-integral rings; the `y²` coefficient of the norm form.
    #[inline]
    pub(crate) fn quarter(self) -> i64 {
        debug_assert!(self.is_half_integral());
        (1 + self.0 as i64) / 4
    }

    /// Number of units `u_D`.
    pub fn unit_count(self) -> u32 {
        match self.0 {
            1 => 4,
            3 => 6,
            _ => 2,
        }
    }

    /// Field discriminant: `−4D` or `−D`.
    pub fn discriminant(self) -> i64 {
        if self.is_half_integral() {
            -(self.0 as i64)
        } else {
            -4 * self.0 as i64
        }
    }

    /// The norm form `x² + Dy²` or `x² + xy + ((1 + D)/4)y²`.
    pub fn norm_form(self, x: &BigInt, y: &BigInt) -> BigInt {
        if self.is_half_integral() {
            x * x + x * y + y * y * self.quarter()
        } else {
            x * x + y * y * self.0
        }
    }

    /// Machine-integer norm form; exact for `|x|, |y| < 2⁵⁶`.
    #[inline]
    pub fn norm_form_i128(self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        if self.is_half_integral() {
            x * x + x * y + y * y * self.quarter() as i128
        } else {
            x * x + y * y * self.0 as i128
        }
    }

    /// The unit group, in a fixed order starting with `1` and `−1`.
    pub fn units(self) -> Vec<QuadInt> {
        let pairs: &[(i64, i64)] = match self.0 {
            1 => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            3 => &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)],
            _ => &[(1, 0), (-1, 0)],
        };
        pairs
            .iter()
            .map(|&(a, b)| QuadInt::from_i64(self, a, b))
            .collect()
    }
}

/// An element `a + b·ω` of `O_D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    ring: Ring,
    a: BigInt,
    b: BigInt,
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl QuadInt {
    pub fn new(ring: Ring, a: BigInt, b: BigInt) -> Self {
        QuadInt { ring, a, b }
    }

    pub fn from_i64(ring: Ring, a: i64, b: i64) -> Self {
        QuadInt::new(ring, BigInt::from(a), BigInt::from(b))
    }

    pub fn zero(ring: Ring) -> Self {
        QuadInt::new(ring, BigInt::zero(), BigInt::zero())
    }

    pub fn one(ring: Ring) -> Self {
        QuadInt::new(ring, BigInt::one(), BigInt::zero())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Coordinate on `1`.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Coordinate on `ω`.
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        self.ring.norm_form(&self.a, &self.b)
    }

    /// Complex conjugate; `ω̄ = −ω` or `ω̄ = 1 − ω`.
    pub fn conj(&self) -> Self {
        if self.ring.is_half_integral() {
            QuadInt::new(self.ring, &self.a + &self.b, -&self.b)
        } else {
            QuadInt::new(self.ring, self.a.clone(), -&self.b)
        }
    }

    pub fn neg(&self) -> Self {
        QuadInt::new(self.ring, -&self.a, -&self.b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(QuadInt::new(
            self.ring,
            &self.a + &other.a,
            &self.b + &other.b,
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let (a1, b1, a2, b2) = (&self.a, &self.b, &other.a, &other.b);
        let bb = b1 * b2;
        if self.ring.is_half_integral() {
            // ω² = ω − (1 + D)/4
            QuadInt::new(
                self.ring,
                a1 * a2 - &bb * self.ring.quarter(),
                a1 * b2 + a2 * b1 + bb,
            )
        } else {
            QuadInt::new(self.ring, a1 * a2 - &bb * self.ring.d(), a1 * b2 + a2 * b1)
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuadInt::one(self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Complex embedding `(Re, Im)` in double precision.
    pub fn embed(&self) -> (f64, f64) {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let sqrt_d = (self.ring.d() as f64).sqrt();
        if self.ring.is_half_integral() {
            (a + 0.5 * b, 0.5 * b * sqrt_d)
        } else {
            (a, b * sqrt_d)
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// True if `b` is zero and `a` is non-negative, i.e. a non-negative rational integer.
    pub fn is_nonnegative_integer(&self) -> bool {
        self.b.is_zero() && !self.a.is_negative()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::MismatchedRing(self.ring.d(), other.ring.d()))
        }
    }
}
