//! Dense univariate polynomials in the spectral variable λ.

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Ring};

/// A polynomial stored as ascending coefficients `c_0 + c_1 λ + … + c_d λ^d`.
///
/// Exact trailing zeros are trimmed on construction. In float mode the
/// stored top coefficient may still be tiny; [`Poly::degree`] applies the
/// relative threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial λ.
    pub fn lambda() -> Self {
        Poly::new(vec![C::zero(), C::one()])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of λ^k (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).copied().unwrap_or_else(C::zero)
    }

    /// Degree after discarding negligible top coefficients; `None` for the
    /// zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let scale = self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max);
        (0..self.coeffs.len())
            .rev()
            .find(|&k| !self.coeffs[k].negligible(scale))
    }

    /// Coefficient at [`Poly::degree`].
    pub fn leading(&self) -> Option<C> {
        self.degree().map(|d| self.coeffs[d])
    }

    /// Drops coefficients above the threshold degree.
    pub fn trimmed(&self) -> Self {
        match self.degree() {
            Some(d) => Poly::new(self.coeffs[..=d].to_vec()),
            None => Poly::new(Vec::new()),
        }
    }

    /// Horner evaluation in floating point.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    /// Horner evaluation in the coefficient ring.
    pub fn eval_exact(&self, x: C) -> Result<C> {
        self.coeffs
            .iter()
            .rev()
            .try_fold(C::zero(), |acc, c| acc.try_mul(&x)?.try_add(c))
    }

    pub fn derivative(&self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.try_mul(&C::from_int(k as i64))?);
        }
        Ok(Poly::new(out))
    }

    pub fn scale(&self, s: C) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.try_mul(&s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }

    /// Synthetic division by `(λ − root)`, returning quotient and remainder.
    pub fn div_linear(&self, root: C) -> Result<(Self, C)> {
        if self.coeffs.is_empty() {
            return Ok((Poly::new(Vec::new()), C::zero()));
        }
        let n = self.coeffs.len();
        let mut quotient = vec![C::zero(); n - 1];
        let mut carry = C::zero();
        for k in (0..n).rev() {
            let value = self.coeffs[k].try_add(&carry.try_mul(&root)?)?;
            if k == 0 {
                return Ok((Poly::new(quotient), value));
            }
            quotient[k - 1] = value;
            carry = value;
        }
        unreachable!()
    }

    pub fn to_f64(&self) -> Poly<f64> {
        Poly::new(self.coeffs.iter().map(|c| c.to_f64()).collect())
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&C, &C) -> Result<C>) -> Result<Self> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let out = (0..n)
            .map(|k| f(&self.coeff(k), &rhs.coeff(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(out))
    }
}

impl Poly<i128> {
    /// Converts float coefficients, failing unless each is integral.
    pub fn from_f64_exact(p: &Poly<f64>) -> Result<Self> {
        let coeffs = p
            .coeffs()
            .iter()
            .map(|&c| <i128 as Coeff>::from_real(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }
}

impl<C: Coeff> Ring for Poly<C> {
    fn zero() -> Self {
        Poly::new(Vec::new())
    }
    fn one() -> Self {
        Poly::constant(C::one())
    }
    fn from_int(n: i64) -> Self {
        Poly::constant(C::from_int(n))
    }
    fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.try_add(b))
    }
    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.try_sub(b))
    }
    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Ok(Self::zero());
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].try_add(&a.try_mul(b)?)?;
            }
        }
        Ok(Poly::new(out))
    }
    fn try_neg(&self) -> Result<Self> {
        let out = self.coeffs.iter().map(|c| c.try_neg()).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(out))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Characteristic polynomial in either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum CharPoly {
    Float(Poly<f64>),
    Exact(Poly<i128>),
}

impl CharPoly {
    pub fn to_float(&self) -> Poly<f64> {
        match self {
            CharPoly::Float(p) => p.clone(),
            CharPoly::Exact(p) => p.to_f64(),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            CharPoly::Float(p) => p.degree(),
            CharPoly::Exact(p) => p.degree(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CharPoly::Exact(_))
    }

    /// Exact coefficients, or an error for the float backend.
    pub fn exact(&self) -> Result<&Poly<i128>> {
        match self {
            CharPoly::Exact(p) => Ok(p),
            CharPoly::Float(_) => Err(Error::Unsupported("exact coefficients of a float polynomial")),
        }
    }
}
