//! 2×2 matrices and phase-space vectors over any [`Ring`].

use crate::error::Result;
use crate::scalar::Ring;

/// A column vector `(x, y)ᵀ`, typically `(y(j), y(j+1))ᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vec2<R> {
    pub x: R,
    pub y: R,
}

/// A 2×2 matrix stored row-major as `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<R> {
    pub a: R,
    pub b: R,
    pub c: R,
    pub d: R,
}

impl<R: Ring> Vec2<R> {
    pub fn new(x: R, y: R) -> Self {
        Vec2 { x, y }
    }

    /// Row-times-column product `selfᵀ · rhs`.
    pub fn dot(&self, rhs: &Self) -> Result<R> {
        self.x.try_mul(&rhs.x)?.try_add(&self.y.try_mul(&rhs.y)?)
    }

    /// The symplectic form `selfᵀ J rhs = x·rhs.y − y·rhs.x`.
    pub fn symplectic(&self, rhs: &Self) -> Result<R> {
        self.x.try_mul(&rhs.y)?.try_sub(&self.y.try_mul(&rhs.x)?)
    }

    /// The row vector `selfᵀ J`, returned as a column.
    pub fn adjoint(&self) -> Result<Self> {
        Ok(Vec2::new(self.y.try_neg()?, self.x.clone()))
    }
}

impl<R: Ring> Mat2<R> {
    pub fn new(a: R, b: R, c: R, d: R) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(R::one(), R::zero(), R::zero(), R::one())
    }

    pub fn zero() -> Self {
        Mat2::new(R::zero(), R::zero(), R::zero(), R::zero())
    }

    /// The symplectic metric `[[0, 1], [−1, 0]]`.
    pub fn j() -> Self {
        Mat2::new(R::zero(), R::one(), R::from_int(-1), R::zero())
    }

    /// The projector `[[0, 0], [0, 1]]` multiplying λ in a step matrix.
    pub fn a_split() -> Self {
        Mat2::new(R::zero(), R::zero(), R::zero(), R::one())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        let dot = |p: &R, q: &R, r: &R, s: &R| p.try_mul(q)?.try_add(&r.try_mul(s)?);
        Ok(Mat2::new(
            dot(&self.a, &rhs.a, &self.b, &rhs.c)?,
            dot(&self.a, &rhs.b, &self.b, &rhs.d)?,
            dot(&self.c, &rhs.a, &self.d, &rhs.c)?,
            dot(&self.c, &rhs.b, &self.d, &rhs.d)?,
        ))
    }

    pub fn mul_vec(&self, v: &Vec2<R>) -> Result<Vec2<R>> {
        Ok(Vec2::new(
            self.a.try_mul(&v.x)?.try_add(&self.b.try_mul(&v.y)?)?,
            self.c.try_mul(&v.x)?.try_add(&self.d.try_mul(&v.y)?)?,
        ))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        Ok(Mat2::new(
            self.a.try_add(&rhs.a)?,
            self.b.try_add(&rhs.b)?,
            self.c.try_add(&rhs.c)?,
            self.d.try_add(&rhs.d)?,
        ))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        Ok(Mat2::new(
            self.a.try_sub(&rhs.a)?,
            self.b.try_sub(&rhs.b)?,
            self.c.try_sub(&rhs.c)?,
            self.d.try_sub(&rhs.d)?,
        ))
    }

    pub fn scale(&self, s: &R) -> Result<Self> {
        Ok(Mat2::new(
            self.a.try_mul(s)?,
            self.b.try_mul(s)?,
            self.c.try_mul(s)?,
            self.d.try_mul(s)?,
        ))
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn det(&self) -> Result<R> {
        self.a.try_mul(&self.d)?.try_sub(&self.b.try_mul(&self.c)?)
    }

    pub fn trace(&self) -> Result<R> {
        self.a.try_add(&self.d)
    }

    /// `selfᵀ J rhs`.
    pub fn symplectic(&self, rhs: &Self) -> Result<Self> {
        self.transpose().try_mul(&Self::j())?.try_mul(rhs)
    }
}

impl Mat2<f64> {
    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }
}

/// Discrete Wronskian `ãJb` of two phase-space vectors.
pub fn casoratian<R: Ring>(a: &Vec2<R>, b: &Vec2<R>) -> Result<R> {
    a.symplectic(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_is_antisymmetric_and_squares_to_minus_one() {
        let j = Mat2::<i128>::j();
        let jj = j.try_mul(&j).unwrap();
        assert_eq!(jj, Mat2::new(-1, 0, 0, -1));
        assert_eq!(j.transpose(), Mat2::new(0, -1, 1, 0));
    }

    #[test]
    fn casoratian_examples() {
        let v = Vec2::new(3i128, 7);
        assert_eq!(casoratian(&v, &v).unwrap(), 0);
        assert_eq!(casoratian(&Vec2::new(0i128, 1), &Vec2::new(1, 0)).unwrap(), -1);
    }

    #[test]
    fn adjoint_matches_symplectic_form() {
        let a = Vec2::new(2i128, 5);
        let b = Vec2::new(-3i128, 4);
        assert_eq!(a.adjoint().unwrap().dot(&b).unwrap(), a.symplectic(&b).unwrap());
    }

    #[test]
    fn unimodular_matrix_is_symplectic() {
        let m = Mat2::new(2i128, 3, 1, 2);
        assert_eq!(m.det().unwrap(), 1);
        assert_eq!(m.symplectic(&m).unwrap(), Mat2::j());
    }
}
