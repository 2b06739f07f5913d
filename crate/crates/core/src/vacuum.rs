//! Lattice vacuum (Casimir) energies `E = ½ Σ √λ̄_n`.
//!
//! A twisted field is complex, so its energy carries an extra factor of two.

use std::f64::consts::PI;

use crate::closedform::{free_eigenvalues, MassParam};
use crate::domain::{reduce_twist, BoundaryCondition, LatticeSpec, Potential, Topology};
use crate::error::{Error, Result};
use crate::spectrum::oracle_spectrum;

/// Neumaier-compensated sum.
fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

fn field_factor(bc: &BoundaryCondition) -> f64 {
    match bc {
        BoundaryCondition::TwistedPeriodic { .. } => 1.0,
        _ => 0.5,
    }
}

/// `½ Σ √λ̄` (real fields) or `Σ √λ̄` (twisted complex field) over a list of
/// physical eigenvalues.
pub fn mode_sum(physical: &[f64], bc: &BoundaryCondition) -> Result<f64> {
    let max = physical.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let roots = physical
        .iter()
        .map(|&l| {
            if l >= 0.0 {
                Ok(l.sqrt())
            } else if l.abs() <= 1e-12 * max {
                Ok(0.0)
            } else {
                Err(Error::NegativeEigenvalue(l))
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(field_factor(bc) * compensated_sum(roots))
}

/// Vacuum energy of the lattice operator from its spectrum.
///
/// Free massless spectra on interval D/N and on the circle use the exact
/// mode lists; everything else goes through the matrix oracle.
pub fn vacuum_energy(potential: &Potential, bc: &BoundaryCondition, spec: &LatticeSpec) -> Result<f64> {
    potential.check_len(spec.nu())?;
    bc.require(spec.topology())?;
    let spectrum = match bc {
        BoundaryCondition::Robin { .. } => oracle_spectrum(potential, bc)?,
        _ if potential.is_free() => free_eigenvalues(bc, spec, &MassParam::massless())?,
        _ => oracle_spectrum(potential, bc)?,
    };
    mode_sum(&spectrum.physical(spec), bc)
}

/// Direct free massless mode sum, for any ν.
pub fn free_mode_sum(bc: &BoundaryCondition, spec: &LatticeSpec) -> Result<f64> {
    let spectrum = free_eigenvalues(bc, spec, &MassParam::massless())?;
    mode_sum(&spectrum.physical(spec), bc)
}

/// Closed-form free massless vacuum energy.
///
/// D: `(cot(π/4(ν+1)) − 1)/2h`; N: `(cot(π/4ν) − 1)/2h`;
/// P: `cot(πh/2L)/h`; twisted: `2cos(a(2τ−1))/(h sin a)` with `a = πh/2L`.
pub fn free_energy_closed(bc: &BoundaryCondition, spec: &LatticeSpec) -> Result<f64> {
    bc.require(spec.topology())?;
    let h = spec.h();
    let nu = spec.nu() as f64;
    if spec.nu() == 0 {
        return Ok(0.0);
    }
    let cot = |x: f64| 1.0 / x.tan();
    let a = PI * h / (2.0 * spec.length());
    match *bc {
        BoundaryCondition::Dirichlet => Ok((cot(PI / (4.0 * (nu + 1.0))) - 1.0) / (2.0 * h)),
        BoundaryCondition::Neumann => Ok((cot(PI / (4.0 * nu)) - 1.0) / (2.0 * h)),
        BoundaryCondition::Robin { .. } => Err(Error::Unsupported("free Robin vacuum energy has no closed form")),
        BoundaryCondition::Periodic => Ok(cot(a) / h),
        BoundaryCondition::TwistedPeriodic { tau } => {
            let tau = reduce_twist(tau);
            Ok(2.0 * (a * (2.0 * tau - 1.0)).cos() / (h * a.sin()))
        }
    }
}

/// Universal constant term of the small-`h` expansion.
///
/// D and N: `−π/24L`; P: `−π/6L`; twisted: `−(2π/L)(1/6 − τ + τ²)`.
pub fn universal_constant(bc: &BoundaryCondition, length: f64) -> Result<f64> {
    match *bc {
        BoundaryCondition::Dirichlet | BoundaryCondition::Neumann => Ok(-PI / (24.0 * length)),
        BoundaryCondition::Robin { .. } => Err(Error::Unsupported("Robin vacuum constant")),
        BoundaryCondition::Periodic => Ok(-PI / (6.0 * length)),
        BoundaryCondition::TwistedPeriodic { tau } => {
            let t = reduce_twist(tau);
            Ok(-(2.0 * PI / length) * (1.0 / 6.0 - t + t * t))
        }
    }
}

/// Least-squares fit of `E(h)` on `{h⁻², h⁻¹, 1, h, …}`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct EnergyExpansion {
    /// Powers of `h` in the basis, ascending.
    pub powers: Vec<i32>,
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
    /// Spacings actually used (after rounding to integral ν).
    pub h_values: Vec<f64>,
    pub condition: f64,
}

impl EnergyExpansion {
    /// The `h⁰` coefficient.
    pub fn constant(&self) -> f64 {
        let k = self.powers.iter().position(|&p| p == 0).expect("basis contains h^0");
        self.coefficients[k]
    }

    pub fn coefficient(&self, power: i32) -> Option<f64> {
        self.powers.iter().position(|&p| p == power).map(|k| self.coefficients[k])
    }
}

/// Condition estimates above this are rejected.
pub const MAX_FIT_CONDITION: f64 = 1e12;

/// Solves the least-squares problem `min ‖A c − b‖` by Householder QR on
/// column-scaled `A` (row-major, `m × n`). Returns the coefficients and a
/// condition estimate.
pub fn least_squares(a: &[f64], b: &[f64], m: usize, n: usize) -> Result<(Vec<f64>, f64)> {
    if m < n {
        return Err(Error::InvalidArgument(format!("{m} samples cannot fit {n} coefficients")));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    let scales: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| a[i * n + j].powi(2)).sum::<f64>().sqrt())
        .collect();
    for i in 0..m {
        for j in 0..n {
            if scales[j] > 0.0 {
                a[i * n + j] /= scales[j];
            }
        }
    }
    for k in 0..n {
        let norm = (k..m).map(|i| a[i * n + k].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        let alpha = if a[k * n + k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| a[i * n + k]).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|x| x * x).sum::<f64>();
        if vn == 0.0 {
            continue;
        }
        for j in k..n {
            let dot: f64 = (k..m).map(|i| v[i - k] * a[i * n + j]).sum();
            let f = 2.0 * dot / vn;
            for i in k..m {
                a[i * n + j] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..m).map(|i| v[i - k] * b[i]).sum();
        let f = 2.0 * dot / vn;
        for i in k..m {
            b[i] -= f * v[i - k];
        }
    }
    let diag: Vec<f64> = (0..n).map(|k| a[k * n + k].abs()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if dmin == 0.0 { f64::INFINITY } else { dmax / dmin };
    if condition > MAX_FIT_CONDITION {
        return Err(Error::IllConditioned(condition));
    }
    let mut c = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k * n + j] * c[j]).sum();
        c[k] = (b[k] - s) / a[k * n + k];
    }
    for j in 0..n {
        c[j] /= scales[j];
    }
    Ok((c, condition))
}

/// Fits the free massless energy over an h-sweep and extracts the
/// constant term. Each requested `h` is rounded to the nearest integral
/// lattice of length `L`.
pub fn extract_constant(
    bc: &BoundaryCondition,
    length: f64,
    h_values: &[f64],
    positive_powers: usize,
) -> Result<EnergyExpansion> {
    bc.validate()?;
    if h_values.len() < 5 {
        return Err(Error::InvalidArgument("need at least 5 spacings".into()));
    }
    let hmin = h_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hmax = h_values.iter().cloned().fold(0.0, f64::max);
    if !(hmin > 0.0) || hmax / hmin < 10.0 * (1.0 - 1e-9) {
        return Err(Error::InvalidArgument("spacings must be positive and span a decade".into()));
    }
    let topology = bc.topology();
    let mut specs = Vec::with_capacity(h_values.len());
    for &h in h_values {
        let cells = (length / h).round().max(1.0) as usize;
        let nu = match topology {
            Topology::Interval => cells.saturating_sub(1).max(1),
            Topology::Circle => cells,
        };
        specs.push(LatticeSpec::with_length(nu, length, topology)?);
    }
    let powers: Vec<i32> = (-2..=positive_powers as i32).collect();
    let (m, n) = (specs.len(), powers.len());
    let mut a = Vec::with_capacity(m * n);
    let mut b = Vec::with_capacity(m);
    for spec in &specs {
        for &p in &powers {
            a.push(spec.h().powi(p));
        }
        b.push(free_energy_closed(bc, spec)?);
    }
    let (coefficients, condition) = least_squares(&a, &b, m, n)?;
    let residual_norm = (0..m)
        .map(|i| {
            let fit: f64 = (0..n).map(|j| a[i * n + j] * coefficients[j]).sum();
            (fit - b[i]).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    Ok(EnergyExpansion {
        powers,
        coefficients,
        residual_norm,
        h_values: specs.iter().map(|s| s.h()).collect(),
        condition,
    })
}

/// `n` spacings in geometric progression from `lo` to `hi`.
pub fn geometric_sweep(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|k| lo * (ratio * k as f64).exp()).collect()
}

/// Bernoulli numbers `B_0 … B_n` (with `B_1 = −1/2`).
pub fn bernoulli_numbers(n: usize) -> Vec<f64> {
    let mut b = vec![0.0; n + 1];
    b[0] = 1.0;
    for m in 1..=n {
        let mut acc = 0.0;
        let mut binom = 1.0;
        for k in 0..m {
            acc += binom * b[k];
            binom = binom * (m + 1 - k) as f64 / (k + 1) as f64;
        }
        b[m] = -acc / (m as f64 + 1.0);
    }
    b
}

/// Bernoulli polynomial `B_n(x)`.
pub fn bernoulli_poly(n: usize, x: f64) -> f64 {
    let b = bernoulli_numbers(n);
    let mut binom = 1.0;
    let mut total = 0.0;
    for k in 0..=n {
        total += binom * b[k] * x.powi((n - k) as i32);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    total
}

/// Partial sum `2 Σ_{m=0}^{mmax} (−1)^m B_{2m}(τ) (h/2)^{2m−2} / (2m)!` of the
/// small-`h` expansion of the twisted energy on a circle of length `2π`.
pub fn twisted_bernoulli_series(tau: f64, h: f64, mmax: usize) -> Result<f64> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidArgument(format!("twist must lie in (0, 1], got {tau}")));
    }
    if mmax > 8 {
        return Err(Error::InvalidArgument("the expansion is truncated at mmax ≤ 8".into()));
    }
    let mut total = 0.0;
    let mut factorial = 1.0;
    for m in 0..=mmax {
        if m > 0 {
            factorial *= ((2 * m - 1) * (2 * m)) as f64;
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        total += 2.0 * sign * bernoulli_poly(2 * m, tau) * (h / 2.0).powi(2 * m as i32 - 2) / factorial;
    }
    Ok(total)
}
