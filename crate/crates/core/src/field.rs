//! Exact arithmetic in prime fields `F_q`.
//!
//! Residues are stored as `u32` and products are formed in `u64` before
//! reduction, so every prime up to `2^31 - 1` is handled without bignums.
//! Hot loops elsewhere in the crate work on raw residues through the
//! [`PrimeModulus`] helpers; [`FieldElement`] is the checked, self-describing
//! value type used at API boundaries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_MODULUS: u32 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range [2, 2^31 - 1]")]
    ModulusOutOfRange(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
}

/// A prime `q` with `2 <= q <= 2^31 - 1`, validated by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if !(2..=MAX_MODULUS as u64).contains(&q) {
            return Err(FieldError::ModulusOutOfRange(q));
        }
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        Ok(PrimeModulus(q as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u32 {
        (x % self.0 as u64) as u32
    }

    /// Reduces a signed integer into `[0, q)`.
    #[inline]
    pub fn reduce_signed(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let q = self.0 as u64;
        (if s >= q { s - q } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.0 as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// Inverse of a nonzero residue by the extended Euclidean algorithm.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.0 as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_signed(t0))
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn element(self, value: u64) -> FieldElement {
        FieldElement {
            value: self.reduce(value),
            modulus: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        self.element(0)
    }

    pub fn one(self) -> FieldElement {
        self.element(1)
    }

    /// All field elements in increasing residue order.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.0).map(move |v| FieldElement {
            value: v,
            modulus: self,
        })
    }
}

impl<'de> Deserialize<'de> for PrimeModulus {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let q = u64::deserialize(d)?;
        PrimeModulus::new(q).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q.is_multiple_of(2) {
        return q == 2;
    }
    let mut d = 3u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// An element of `F_q`; `value` is always reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: PrimeModulus,
}

impl FieldElement {
    pub fn new(value: u64, modulus: PrimeModulus) -> Self {
        modulus.element(value)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: FieldElement) -> Result<PrimeModulus, FieldError> {
        if self.modulus != other.modulus {
            return Err(FieldError::ModulusMismatch(self.modulus.get(), other.modulus.get()));
        }
        Ok(self.modulus)
    }

    pub fn arith(self, other: FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
        let m = self.check(other)?;
        let value = match op {
            ArithOp::Add => m.add(self.value, other.value),
            ArithOp::Sub => m.sub(self.value, other.value),
            ArithOp::Mul => m.mul(self.value, other.value),
        };
        Ok(FieldElement { value, modulus: m })
    }

    pub fn try_add(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        self.arith(other, ArithOp::Add)
    }

    pub fn try_sub(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        self.arith(other, ArithOp::Sub)
    }

    pub fn try_mul(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        self.arith(other, ArithOp::Mul)
    }

    pub fn inv(self) -> Result<FieldElement, FieldError> {
        self.modulus
            .inv(self.value)
            .map(|value| FieldElement {
                value,
                modulus: self.modulus,
            })
            .ok_or(FieldError::DivisionByZero(self.modulus.get()))
    }

    pub fn try_div(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        self.try_mul(other.inv()?)
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        FieldElement {
            value: self.modulus.pow(self.value, exp),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// The operator impls panic on mismatched moduli; use the `try_*` methods
// when operands come from different sources.
impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field operands must share a modulus")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.try_sub(rhs).expect("field operands must share a modulus")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field operands must share a modulus")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}
