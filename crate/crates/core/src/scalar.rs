//! Scalar backends.
//!
//! Every algebraic routine in the crate is written once against [`Ring`] and
//! instantiated either with `f64` or with overflow-checked `i128`. Dense
//! polynomials ([`crate::poly::Poly`]) are themselves a `Ring`, which is how
//! transfer matrices with polynomial entries are built.

use std::fmt::Debug;

use crate::error::{Error, Result};

/// A commutative ring with fallible arithmetic.
///
/// Floating point operations never fail; the exact integer backend reports
/// [`Error::Overflow`] instead of wrapping.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn try_add(&self, rhs: &Self) -> Result<Self>;
    fn try_sub(&self, rhs: &Self) -> Result<Self>;
    fn try_mul(&self, rhs: &Self) -> Result<Self>;
    fn try_neg(&self) -> Result<Self>;
    fn is_zero(&self) -> bool;
}

/// A scalar coefficient: a `Ring` element that is `Copy` and maps to `f64`.
pub trait Coeff: Ring + Copy {
    fn to_f64(self) -> f64;

    /// Whether `self` counts as zero next to a coefficient of magnitude
    /// `scale` when determining polynomial degrees.
    fn negligible(self, scale: f64) -> bool;

    /// Converts a real input, failing in exact mode if it is not integral.
    fn from_real(x: f64) -> Result<Self>;

    fn magnitude(self) -> f64 {
        self.to_f64().abs()
    }
}

/// Relative threshold below which a float coefficient is treated as zero for
/// degree determination.
pub const FLOAT_DEGREE_THRESHOLD: f64 = 1e-12;

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn try_add(&self, rhs: &Self) -> Result<Self> {
        Ok(self + rhs)
    }
    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        Ok(self - rhs)
    }
    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        Ok(self * rhs)
    }
    fn try_neg(&self) -> Result<Self> {
        Ok(-self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Coeff for f64 {
    fn to_f64(self) -> f64 {
        self
    }
    fn negligible(self, scale: f64) -> bool {
        self.abs() <= FLOAT_DEGREE_THRESHOLD * scale
    }
    fn from_real(x: f64) -> Result<Self> {
        Ok(x)
    }
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_int(n: i64) -> Self {
        n as i128
    }
    fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(*rhs).ok_or(Error::Overflow)
    }
    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_sub(*rhs).ok_or(Error::Overflow)
    }
    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.checked_mul(*rhs).ok_or(Error::Overflow)
    }
    fn try_neg(&self) -> Result<Self> {
        self.checked_neg().ok_or(Error::Overflow)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

impl Coeff for i128 {
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn negligible(self, _scale: f64) -> bool {
        self == 0
    }
    fn from_real(x: f64) -> Result<Self> {
        if x.is_finite() && x.fract() == 0.0 && x.abs() < 1.7e38 {
            Ok(x as i128)
        } else {
            Err(Error::NotInteger(x))
        }
    }
}

/// Sums a slice of ring elements.
pub fn try_sum<R: Ring>(items: &[R]) -> Result<R> {
    items.iter().try_fold(R::zero(), |acc, x| acc.try_add(x))
}
