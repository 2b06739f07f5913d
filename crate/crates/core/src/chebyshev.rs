//! Chebyshev polynomials of the first, second and third kinds.
//!
//! Everything is driven by the three-term recurrence
//! `U_{n+1} = 2x·U_n − U_{n−1}` seeded with `U_{−2} = −1`, `U_{−1} = 0`,
//! which is the power of the free step matrix `C = [[0, 1], [−1, 2x]]`:
//!
//! ```text
//! Cⁿ = [[−U_{n−2}, U_{n−1}], [−U_{n−1}, U_n]]
//! ```
//!
//! The generic routines take the recurrence coefficient `2x`; the free-lattice
//! value is `2x = 2 − λ`.

use crate::error::Result;
use crate::mat2::Mat2;
use crate::poly::Poly;
use crate::scalar::Ring;

/// `U_n` evaluated over any ring, for any integer `n`.
///
/// Negative orders follow the recurrence backwards: `U_{−n} = −U_{n−2}`.
pub fn cheb_u_ring<R: Ring>(n: i64, two_x: &R) -> Result<R> {
    if n < -1 {
        return cheb_u_ring(-n - 2, two_x)?.try_neg();
    }
    if n == -1 {
        return Ok(R::zero());
    }
    let (mut prev, mut cur) = (R::zero(), R::one());
    for _ in 0..n {
        let next = two_x.try_mul(&cur)?.try_sub(&prev)?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Table of `U_{−2} … U_{nmax}` over a ring.
#[derive(Clone, Debug)]
pub struct ChebTable<R> {
    values: Vec<R>,
}

impl<R: Ring> ChebTable<R> {
    pub fn new(nmax: usize, two_x: &R) -> Result<Self> {
        let mut values = Vec::with_capacity(nmax + 3);
        values.push(R::from_int(-1));
        values.push(R::zero());
        for k in 0..=nmax {
            let next = two_x.try_mul(&values[k + 1])?.try_sub(&values[k])?;
            values.push(next);
        }
        Ok(ChebTable { values })
    }

    /// `U_n` for `−2 ≤ n ≤ nmax`.
    pub fn u(&self, n: i64) -> &R {
        &self.values[(n + 2) as usize]
    }

    /// `V_n = U_n − U_{n−1}` for `−1 ≤ n ≤ nmax`.
    pub fn v(&self, n: i64) -> Result<R> {
        self.u(n).try_sub(self.u(n - 1))
    }

    pub fn nmax(&self) -> usize {
        self.values.len() - 3
    }
}

/// Second kind, `U_n(x)`.
pub fn cheb_u(n: i64, x: f64) -> f64 {
    cheb_u_ring(n, &(2.0 * x)).expect("float arithmetic is infallible")
}

/// Third kind, `V_n(x) = U_n(x) − U_{n−1}(x)`.
pub fn cheb_v(n: i64, x: f64) -> f64 {
    let two_x = 2.0 * x;
    let (mut prev, mut cur) = (0.0, 1.0);
    if n < 0 {
        return cheb_u(n, x) - cheb_u(n - 1, x);
    }
    for _ in 0..n {
        let next = two_x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur - prev
}

/// First kind, `T_n(x) = (U_n(x) − U_{n−2}(x))/2`.
pub fn cheb_t(n: i64, x: f64) -> f64 {
    0.5 * (cheb_u(n, x) - cheb_u(n - 2, x))
}

/// The free step matrix `C = [[0, 1], [−1, 2x]]` over a ring.
pub fn free_step<R: Ring>(two_x: &R) -> Result<Mat2<R>> {
    Ok(Mat2::new(R::zero(), R::one(), R::from_int(-1), two_x.clone()))
}

/// `Cⁿ` assembled from Chebyshev values.
pub fn cheb_matrix_power_ring<R: Ring>(n: usize, two_x: &R) -> Result<Mat2<R>> {
    let n = n as i64;
    let u = |k| cheb_u_ring(k, two_x);
    Ok(Mat2::new(u(n - 2)?.try_neg()?, u(n - 1)?, u(n - 1)?.try_neg()?, u(n)?))
}

/// `Cⁿ` at a real argument.
pub fn cheb_matrix_power(n: usize, x: f64) -> Mat2<f64> {
    cheb_matrix_power_ring(n, &(2.0 * x)).expect("float arithmetic is infallible")
}

/// Exact coefficients of `U_n(1 − λ/2)` in λ.
pub fn cheb_u_poly(n: usize) -> Result<Poly<i128>> {
    cheb_u_ring(n as i64, &Poly::new(vec![2, -1]))
}

/// `(U_n, U_{n−1})` scaled by `e^{-log_scale}`, so very large orders stay finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledPair {
    pub u_n: f64,
    pub u_nm1: f64,
    pub log_scale: f64,
}

const RESCALE_AT: f64 = 1e100;

pub fn cheb_u_scaled_pair(n: usize, x: f64) -> ScaledPair {
    let two_x = 2.0 * x;
    let (mut prev, mut cur, mut log_scale) = (0.0f64, 1.0f64, 0.0f64);
    for _ in 0..n {
        let next = two_x * cur - prev;
        prev = cur;
        cur = next;
        let big = cur.abs().max(prev.abs());
        if big > RESCALE_AT {
            cur /= big;
            prev /= big;
            log_scale += big.ln();
        }
    }
    ScaledPair { u_n: cur, u_nm1: prev, log_scale }
}

/// `(sign, ln|U_n(x)|)` without overflow.
pub fn cheb_u_log(n: usize, x: f64) -> (i8, f64) {
    let p = cheb_u_scaled_pair(n, x);
    signed_log(p.u_n, p.log_scale)
}

/// `(sign, ln|2T_n(x) − c|)` without overflow; the constant `c` is dropped
/// once it is below double precision relative to `2T_n`.
pub fn cheb_2t_minus_log(n: usize, x: f64, c: f64) -> (i8, f64) {
    if n == 0 {
        return signed_log(2.0 - c, 0.0);
    }
    let p = cheb_u_scaled_pair(n, x);
    // 2T_n = U_n − U_{n−2} = 2U_n − 2x·U_{n−1}
    let two_t = 2.0 * p.u_n - 2.0 * x * p.u_nm1;
    let shifted = if p.log_scale < 700.0 { two_t - c * (-p.log_scale).exp() } else { two_t };
    signed_log(shifted, p.log_scale)
}

fn signed_log(value: f64, log_scale: f64) -> (i8, f64) {
    if value == 0.0 {
        (0, f64::NEG_INFINITY)
    } else {
        (if value > 0.0 { 1 } else { -1 }, value.abs().ln() + log_scale)
    }
}

/// Outcome of one family of identity checks.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct IdentityReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `U_n` as an exact polynomial in `s = 2x`.
pub fn cheb_u_in_two_x(n: i64) -> Result<Poly<i128>> {
    cheb_u_ring(n, &Poly::lambda())
}

/// Coefficient of `tⁿ` in the binomial expansion of `1/(1 − t(2x − t))`,
/// returned with the sum of the magnitudes of its terms.
pub fn cheb_u_generating(n: usize, x: f64) -> (f64, f64) {
    let two_x = 2.0 * x;
    let (mut total, mut scale) = (0.0, 0.0);
    for j in 0..=n / 2 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = binomial(n - j, j) as f64 * two_x.powi((n - 2 * j) as i32);
        total += sign * term;
        scale += term.abs();
    }
    (total, scale)
}

/// The same coefficient as an exact polynomial in `s = 2x`.
pub fn cheb_u_generating_exact(n: usize) -> Poly<i128> {
    let mut coeffs = vec![0i128; n + 1];
    for j in 0..=n / 2 {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        coeffs[n - 2 * j] = sign * binomial(n - j, j);
    }
    Poly::new(coeffs)
}

fn binomial(n: usize, k: usize) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Runs the exact and float identity suite used by the `chebyshev` CLI
/// subcommand and the test-suite.
pub fn identity_self_test() -> Result<Vec<IdentityReport>> {
    let mut reports = Vec::new();
    let us: Vec<Poly<i128>> = (-2..=62).map(cheb_u_in_two_x).collect::<Result<_>>()?;
    let u = |n: i64| &us[(n + 2) as usize];

    let mut turan = IdentityReport { name: "turan", cases: 0, failures: 0 };
    for n in 0..=30i64 {
        let lhs = u(n - 1).try_mul(u(n - 1))?.try_sub(&u(n).try_mul(u(n - 2))?)?;
        turan.cases += 1;
        turan.failures += usize::from(lhs != Poly::constant(1));
        for x in -2i128..=2 {
            let (a, b, c) = (
                cheb_u_ring(n - 1, &(2 * x))?,
                cheb_u_ring(n, &(2 * x))?,
                cheb_u_ring(n - 2, &(2 * x))?,
            );
            turan.cases += 1;
            turan.failures += usize::from(a.try_mul(&a)?.try_sub(&b.try_mul(&c)?)? != 1);
        }
    }
    reports.push(turan);

    let mut comp = IdentityReport { name: "composition", cases: 0, failures: 0 };
    for m in 0..=30i64 {
        for n in 0..=30i64 {
            let rhs = u(m).try_mul(u(n))?.try_sub(&u(m - 1).try_mul(u(n - 1))?)?;
            comp.cases += 1;
            comp.failures += usize::from(&rhs != u(m + n));
        }
    }
    reports.push(comp);

    let mut cg = IdentityReport { name: "clebsch_gordan", cases: 0, failures: 0 };
    for m in 0..=12i64 {
        for n in 0..=12i64 {
            let mut sum = Poly::zero();
            let mut k = (m - n).abs();
            while k <= m + n {
                sum = sum.try_add(u(k))?;
                k += 2;
            }
            cg.cases += 1;
            cg.failures += usize::from(sum != u(m).try_mul(u(n))?);
        }
    }
    reports.push(cg);

    let mut det = IdentityReport { name: "det_power", cases: 0, failures: 0 };
    let c = free_step(&Poly::<i128>::lambda())?;
    let mut power = Mat2::identity();
    for n in 0..=30usize {
        let closed = cheb_matrix_power_ring(n, &Poly::<i128>::lambda())?;
        det.cases += 1;
        det.failures += usize::from(closed != power || closed.det()? != Poly::constant(1));
        power = power.try_mul(&c)?;
    }
    reports.push(det);

    let mut vu = IdentityReport { name: "v_difference", cases: 0, failures: 0 };
    // V_j − V_{j−1} = (2x − 2)·U_{j−1}
    let s_minus_two = Poly::new(vec![-2, 1]);
    for j in 0..=30i64 {
        let v = |n: i64| u(n).try_sub(u(n - 1));
        let lhs = v(j)?.try_sub(&v(j - 1)?)?;
        vu.cases += 1;
        vu.failures += usize::from(lhs != s_minus_two.try_mul(u(j - 1))?);
    }
    reports.push(vu);

    let mut gf = IdentityReport { name: "generating_function", cases: 0, failures: 0 };
    for n in 0..=20usize {
        gf.cases += 1;
        gf.failures += usize::from(&cheb_u_generating_exact(n) != u(n as i64));
        for step in 0..=20 {
            let x = -1.0 + 0.1 * step as f64;
            let (value, scale) = cheb_u_generating(n, x);
            gf.cases += 1;
            gf.failures += usize::from((cheb_u(n as i64, x) - value).abs() > 1e-12 * scale.max(1.0));
        }
    }
    reports.push(gf);

    Ok(reports)
}
