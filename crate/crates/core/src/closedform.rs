//! Free-field closed forms: constant mass, zero potential.
//!
//! The free step matrix is the Chebyshev matrix at `x = 1 + (μ² − λ)/2`, so
//! eigenvalues and determinants reduce to `U_n`, `V_n` and `T_n` at that
//! argument.

use std::f64::consts::PI;

use crate::chebyshev::{cheb_2t_minus_log, cheb_u, cheb_u_scaled_pair};
use crate::domain::{BoundaryCondition, LatticeSpec, LogDet, Potential, Spectrum};
use crate::error::{Error, Result};
use crate::transfer::{self, leading_structure, BoundaryVectors};

/// Constant mass in physical (`mubar`) and lattice (`mu = h·mubar`) units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassParam {
    pub mubar: f64,
    pub mu: f64,
}

impl MassParam {
    pub fn new(mubar: f64, h: f64) -> Result<Self> {
        if !(mubar.is_finite() && mubar >= 0.0) {
            return Err(Error::InvalidArgument(format!("mass must be non-negative, got {mubar}")));
        }
        Ok(MassParam { mubar, mu: h * mubar })
    }

    pub fn massless() -> Self {
        MassParam { mubar: 0.0, mu: 0.0 }
    }

    /// `γ₀` with `μ = 2 sinh γ₀`.
    pub fn gamma0(&self) -> f64 {
        (self.mu / 2.0).asinh()
    }

    /// Chebyshev argument `1 + μ²/2` of the free determinant.
    pub fn cheb_arg(&self) -> f64 {
        1.0 + self.mu * self.mu / 2.0
    }
}

/// The constant potential `v_j = μ²` representing a mass term.
pub fn mass_potential(nu: usize, mass: &MassParam) -> Potential {
    Potential::constant(nu, mass.mu * mass.mu)
}

fn sin2(x: f64) -> f64 {
    x.sin().powi(2)
}

/// Dimensionless free eigenvalues; physical values follow from
/// [`Spectrum::physical`].
///
/// The untwisted periodic list pairs `n` with `−n` and, for even ν, adds the
/// single alternating mode `λ = 4 + μ²`.
pub fn free_eigenvalues(bc: &BoundaryCondition, spec: &LatticeSpec, mass: &MassParam) -> Result<Spectrum> {
    bc.require(spec.topology())?;
    let nu = spec.nu();
    let n_f = nu as f64;
    let m2 = mass.mu * mass.mu;
    let lambdas: Vec<f64> = match *bc {
        BoundaryCondition::Dirichlet => (1..=nu).map(|n| m2 + 4.0 * sin2(PI * n as f64 / (2.0 * (n_f + 1.0)))).collect(),
        BoundaryCondition::Neumann => (0..nu).map(|n| m2 + 4.0 * sin2(PI * n as f64 / (2.0 * n_f))).collect(),
        BoundaryCondition::Robin { .. } => return Err(Error::Unsupported("free Robin eigenvalues have no closed form")),
        BoundaryCondition::Periodic => {
            let mut out = vec![m2];
            for n in 1..=(nu - 1) / 2 {
                let l = m2 + 4.0 * sin2(PI * n as f64 / n_f);
                out.push(l);
                out.push(l);
            }
            if nu % 2 == 0 {
                out.push(m2 + 4.0);
            }
            out
        }
        BoundaryCondition::TwistedPeriodic { tau } => {
            let tau = crate::domain::reduce_twist(tau);
            (0..nu).map(|n| m2 + 4.0 * sin2(PI * (n as f64 + tau) / n_f)).collect()
        }
    };
    Ok(Spectrum::new(lambdas))
}

/// `P(0)` of the free Robin lattice, scaled: returns `(value, log_scale)`.
fn robin_p0_scaled(nu: usize, alpha: f64, beta: f64, mu: f64) -> (f64, f64) {
    let pair = cheb_u_scaled_pair(nu, 1.0 + mu * mu / 2.0);
    let value = (alpha + beta + alpha * beta) * pair.u_n - (alpha + beta - mu * mu) * pair.u_nm1;
    (value, pair.log_scale)
}

fn signed(value: f64, log_scale: f64) -> LogDet {
    if value == 0.0 {
        LogDet::vanishing()
    } else {
        LogDet::from_parts(if value > 0.0 { 1 } else { -1 }, value.abs().ln() + log_scale)
    }
}

/// Free determinant `Π λ̄_n`.
///
/// On the circle this is the product over the ν modes; the complexified
/// determinant is its square ([`LogDet::squared`]). With `prime`, a massless
/// zero mode is removed and counted in `zero_modes_removed`.
pub fn free_determinant(bc: &BoundaryCondition, spec: &LatticeSpec, mass: &MassParam, prime: bool) -> Result<LogDet> {
    bc.require(spec.topology())?;
    let nu = spec.nu();
    let h = spec.h();
    if nu == 0 {
        return Ok(LogDet::one());
    }
    let x = mass.cheb_arg();
    let mu2 = mass.mu * mass.mu;
    let zero_mode = |dimensionless: f64| -> LogDet {
        LogDet::from_value(dimensionless).with_zero_modes(1).times_h_power(h, -2 * (nu as i64 - 1))
    };
    let full = |det: LogDet, factors: usize| det.times_h_power(h, -2 * factors as i64);
    match *bc {
        BoundaryCondition::Dirichlet => {
            let pair = cheb_u_scaled_pair(nu, x);
            Ok(full(signed(pair.u_n, pair.log_scale), nu))
        }
        BoundaryCondition::Neumann => {
            if mass.mu == 0.0 {
                return Ok(if prime { zero_mode(nu as f64) } else { LogDet::vanishing() });
            }
            let pair = cheb_u_scaled_pair(nu - 1, x);
            Ok(full(signed(mu2 * pair.u_n, pair.log_scale), nu))
        }
        BoundaryCondition::Robin { alpha, beta } => {
            let bv = BoundaryVectors::<f64>::for_bc(bc)?;
            let (degree, lead) = leading_structure(&bv.v_in, &bv.v_out_adjoint, nu)
                .ok_or_else(|| Error::InvalidBoundary("boundary element vanishes identically".into()))?;
            let (p0, log_scale) = robin_p0_scaled(nu, alpha, beta, mass.mu);
            let value = if degree % 2 == 0 { p0 / lead } else { -p0 / lead };
            let det = signed(value, log_scale);
            if det.is_zero() && prime {
                return transfer::determinant(&mass_potential(nu, mass), bc, spec, true);
            }
            Ok(full(det, degree))
        }
        BoundaryCondition::Periodic | BoundaryCondition::TwistedPeriodic { .. } => {
            let tau = bc.twist().expect("circle condition");
            let two_cos = if tau == 1.0 { 2.0 } else { 2.0 * (2.0 * PI * tau).cos() };
            if mass.mu == 0.0 && tau == 1.0 {
                return Ok(if prime { zero_mode((nu * nu) as f64) } else { LogDet::vanishing() });
            }
            let (sign, log_abs) = cheb_2t_minus_log(nu, x, two_cos);
            Ok(full(LogDet::from_parts(sign, log_abs), nu))
        }
    }
}

/// `Υ†_out · K(λ) · Υ_in` for the free Robin lattice with `v_j = μ²`, by
/// direct transfer-matrix iteration.
pub fn robin_matrix_element(nu: usize, alpha: f64, beta: f64, mass: &MassParam, lambda: f64) -> Result<f64> {
    let bc = BoundaryCondition::Robin { alpha, beta };
    let bv = BoundaryVectors::<f64>::for_bc(&bc)?;
    let path = transfer::propagate(&mass_potential(nu, mass), lambda, &bv.v_in);
    Ok(bv.v_out_adjoint.dot(path.last().expect("non-empty"))?)
}

/// Chebyshev form of the same element:
/// `(α+β+αβ)U_ν − (α+β+λ−μ²)U_{ν−1}` at `x = 1 + (μ² − λ)/2`.
pub fn robin_matrix_element_closed(nu: usize, alpha: f64, beta: f64, mu: f64, lambda: f64) -> f64 {
    let x = 1.0 + (mu * mu - lambda) / 2.0;
    let nu = nu as i64;
    (alpha + beta + alpha * beta) * cheb_u(nu, x) - (alpha + beta + lambda - mu * mu) * cheb_u(nu - 1, x)
}

/// Massless Robin determinant normalised by `(1+α)(1+β)`:
/// `(αβ(ν+1) + α + β)/((1+α)(1+β))`.
pub fn robin_normalized_det_massless(nu: usize, alpha: f64, beta: f64) -> f64 {
    (alpha * beta * (nu as f64 + 1.0) + alpha + beta) / ((1.0 + alpha) * (1.0 + beta))
}

/// A continuum-limit target: `h^{2ν + h_power_offset} · Det → value`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuumTarget {
    pub h_power_offset: i64,
    pub value: f64,
    /// Whether the zero mode is removed from the lattice determinant.
    pub primed: bool,
}

/// One lattice point on the approach to the continuum.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct LimitPoint {
    pub nu: usize,
    pub h: f64,
    pub scaled: f64,
    pub target: f64,
    pub rel_error: f64,
}

/// A free continuum problem of length `L`.
///
/// For Robin the parameters stored in `bc` are the physical `ᾱ, β̄`; the
/// lattice values `α = hᾱ`, `β = hβ̄` are derived per ν.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuumProblem {
    pub bc: BoundaryCondition,
    pub mubar: f64,
    pub length: f64,
}

fn sinh_over(m: f64, l: f64) -> f64 {
    if m == 0.0 {
        l
    } else {
        (m * l).sinh() / m
    }
}

impl ContinuumProblem {
    pub fn target(&self) -> Result<ContinuumTarget> {
        let (m, l) = (self.mubar, self.length);
        if !(l.is_finite() && l > 0.0) || !(m.is_finite() && m >= 0.0) {
            return Err(Error::InvalidArgument("continuum limit needs L > 0 and mass ≥ 0".into()));
        }
        let t = |offset, value, primed| Ok(ContinuumTarget { h_power_offset: offset, value, primed });
        match self.bc {
            BoundaryCondition::Dirichlet => t(1, sinh_over(m, l), false),
            BoundaryCondition::Neumann if m == 0.0 => t(-1, l, true),
            BoundaryCondition::Neumann => t(-1, m * (m * l).sinh(), false),
            BoundaryCondition::Robin { alpha, beta } => {
                t(-1, (alpha + beta) * (m * l).cosh() + (alpha * beta + m * m) * sinh_over(m, l), false)
            }
            BoundaryCondition::Periodic if m == 0.0 => t(0, l * l, true),
            BoundaryCondition::Periodic | BoundaryCondition::TwistedPeriodic { .. } => {
                let tau = self.bc.twist().expect("circle condition");
                if tau == 1.0 && m == 0.0 {
                    return t(0, l * l, true);
                }
                t(0, 2.0 * ((m * l).cosh() - (2.0 * PI * tau).cos()), false)
            }
        }
    }

    /// `h^{2ν+p}·Det` at the given ν against the target.
    pub fn point(&self, nu: usize) -> Result<LimitPoint> {
        let target = self.target()?;
        let topology = self.bc.topology();
        let spec = LatticeSpec::with_length(nu, self.length, topology)?;
        let h = spec.h();
        let mass = MassParam::new(self.mubar, h)?;
        let lattice_bc = match self.bc {
            BoundaryCondition::Robin { alpha, beta } => BoundaryCondition::Robin { alpha: h * alpha, beta: h * beta },
            other => other,
        };
        let unit = LatticeSpec::with_spacing(nu, 1.0, topology)?;
        let (dimless, factors) = if target.primed {
            let det = free_determinant(&lattice_bc, &unit, &mass, true)?;
            (det, nu - det.zero_modes_removed)
        } else {
            transfer::determinant_dimensionless(&mass_potential(nu, &mass), &lattice_bc, false)?
        };
        let power = 2 * nu as i64 + target.h_power_offset - 2 * factors as i64;
        let scaled = dimless.times_h_power(h, power).value();
        Ok(LimitPoint { nu, h, scaled, target: target.value, rel_error: (scaled / target.value - 1.0).abs() })
    }
}

/// Target for `h^{2ν+p}·Det` as `h → 0`; Robin uses the physical `ᾱ, β̄`.
pub fn continuum_limit_targets(
    bc: &BoundaryCondition,
    mubar: f64,
    alphabar: f64,
    betabar: f64,
    length: f64,
) -> Result<ContinuumTarget> {
    continuum_problem(bc, mubar, alphabar, betabar, length).target()
}

/// Builds a [`ContinuumProblem`], substituting physical Robin parameters.
pub fn continuum_problem(bc: &BoundaryCondition, mubar: f64, alphabar: f64, betabar: f64, length: f64) -> ContinuumProblem {
    let bc = match bc {
        BoundaryCondition::Robin { .. } => BoundaryCondition::Robin { alpha: alphabar, beta: betabar },
        other => *other,
    };
    ContinuumProblem { bc, mubar, length }
}

/// Convergence order `ln(e₁/e₂)/ln(h₁/h₂)` between two points.
pub fn observed_order(a: &LimitPoint, b: &LimitPoint) -> f64 {
    (a.rel_error / b.rel_error).ln() / (a.h / b.h).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::oracle_spectrum;

    fn unit(nu: usize) -> LatticeSpec {
        LatticeSpec::interval(nu, 1.0).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        let m = MassParam::new(0.7, 1.0).unwrap();
        let n = free_eigenvalues(&BoundaryCondition::Neumann, &unit(5), &m).unwrap();
        assert!((n.lambdas[0] - 0.49).abs() < 1e-15);
        let d = free_eigenvalues(&BoundaryCondition::Dirichlet, &unit(3), &MassParam::massless()).unwrap();
        let want = [4.0 * sin2(PI / 8.0), 2.0, 4.0 * sin2(3.0 * PI / 8.0)];
        for (a, b) in d.lambdas.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((d.lambdas[0] - 0.58579).abs() < 1e-5 && (d.lambdas[2] - 3.41421).abs() < 1e-5);
        let ring = LatticeSpec::circle(2, 0.5).unwrap();
        let t = free_eigenvalues(&BoundaryCondition::TwistedPeriodic { tau: 0.5 }, &ring, &MassParam::massless()).unwrap();
        for l in t.physical(&ring) {
            assert!((l - 4.0 / 0.25 * 0.5).abs() < 1e-12);
        }
        assert!(free_eigenvalues(&BoundaryCondition::Robin { alpha: 1.0, beta: 1.0 }, &unit(3), &m).is_err());
    }

    #[test]
    fn periodic_bookkeeping_matches_oracle() {
        for nu in 1..12 {
            let ring = LatticeSpec::circle(nu, 1.0).unwrap();
            let f = free_eigenvalues(&BoundaryCondition::Periodic, &ring, &MassParam::massless()).unwrap();
            let o = oracle_spectrum(&Potential::zeros(nu), &BoundaryCondition::Periodic).unwrap();
            assert_eq!(f.len(), nu);
            for (a, b) in f.lambdas.iter().zip(&o.lambdas) {
                assert!((a - b).abs() < 1e-12, "nu={nu}");
            }
        }
    }

    #[test]
    fn determinant_examples() {
        let m1 = MassParam::new(1.0, 1.0).unwrap();
        let d = free_determinant(&BoundaryCondition::Dirichlet, &unit(1), &m1, false).unwrap();
        assert!((d.value() - 3.0).abs() < 1e-14);
        let n = free_determinant(&BoundaryCondition::Neumann, &unit(1), &m1, false).unwrap();
        assert!((n.value() - 1.0).abs() < 1e-14);
        let ring = LatticeSpec::circle(6, 1.0).unwrap();
        let t = free_determinant(&BoundaryCondition::TwistedPeriodic { tau: 0.5 }, &ring, &MassParam::massless(), false)
            .unwrap();
        assert!((t.value() - 4.0).abs() < 1e-12);
        let d3 = free_determinant(&BoundaryCondition::Dirichlet, &unit(3), &MassParam::massless(), false).unwrap();
        assert!((d3.value() - 4.0).abs() < 1e-14);
        let n0 = free_determinant(&BoundaryCondition::Neumann, &unit(4), &MassParam::massless(), false).unwrap();
        assert!(n0.is_zero());
        let np = free_determinant(&BoundaryCondition::Neumann, &unit(4), &MassParam::massless(), true).unwrap();
        assert!((np.value() - 4.0).abs() < 1e-14);
        assert_eq!(np.zero_modes_removed, 1);
        let pp = free_determinant(&BoundaryCondition::Periodic, &ring, &MassParam::massless(), true).unwrap();
        assert!((pp.value() - 36.0).abs() < 1e-12);
    }

    #[test]
    fn robin_element_examples() {
        let free = MassParam::massless();
        for nu in 1..8usize {
            for &lam in &[-0.4, 0.3, 1.7, 3.9] {
                let direct = robin_matrix_element(nu, 0.0, 0.0, &free, lam).unwrap();
                let want = -lam * cheb_u(nu as i64 - 1, 1.0 - lam / 2.0);
                assert!((direct - want).abs() < 1e-11);
            }
        }
        for &lam in &[0.0, 0.25, 2.0] {
            assert!((robin_matrix_element(1, 1.0, 0.0, &free, lam).unwrap() - (1.0 - 2.0 * lam)).abs() < 1e-14);
        }
        let (nu, a, b) = (7usize, 0.4, 1.3);
        let p0 = robin_matrix_element(nu, a, b, &free, 0.0).unwrap();
        let normalized = p0 / ((1.0 + a) * (1.0 + b));
        assert!((normalized - robin_normalized_det_massless(nu, a, b)).abs() < 1e-13);
    }

    #[test]
    fn robin_element_closed_form_matches_iteration() {
        let mass = MassParam { mubar: 0.3, mu: 0.3 };
        for nu in 1..20usize {
            for &(a, b, lam) in &[(0.5, 2.0, 0.7), (-0.3, 0.1, 3.1), (1.0, 1.0, -0.5)] {
                let direct = robin_matrix_element(nu, a, b, &mass, lam).unwrap();
                let closed = robin_matrix_element_closed(nu, a, b, mass.mu, lam);
                assert!((direct - closed).abs() < 1e-10 * (1.0 + closed.abs()));
            }
        }
    }

    #[test]
    fn closed_forms_agree_with_oracle_in_all_conditions() {
        let spec = LatticeSpec::interval(9, 0.3).unwrap();
        let mass = MassParam::new(0.8, 0.3).unwrap();
        for bc in [
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Neumann,
            BoundaryCondition::Robin { alpha: 0.4, beta: -0.2 },
        ] {
            let closed = free_determinant(&bc, &spec, &mass, false).unwrap();
            let oracle = oracle_spectrum(&mass_potential(9, &mass), &bc).unwrap();
            let prod: f64 = oracle.physical(&spec).iter().product();
            assert!((closed.value() / prod - 1.0).abs() < 1e-10, "{bc:?}");
        }
    }

    #[test]
    fn continuum_targets() {
        let d = continuum_limit_targets(&BoundaryCondition::Dirichlet, 1.0, 0.0, 0.0, 1.0).unwrap();
        assert!((d.value - 1f64.sinh()).abs() < 1e-15);
        assert!((d.value - 1.17520).abs() < 1e-5);
        let d0 = continuum_limit_targets(&BoundaryCondition::Dirichlet, 0.0, 0.0, 0.0, 2.5).unwrap();
        assert_eq!(d0.value, 2.5);
        let r = continuum_limit_targets(&BoundaryCondition::Robin { alpha: 0.0, beta: 0.0 }, 0.7, 0.0, 0.0, 1.3).unwrap();
        assert!((r.value - 0.7 * (0.7f64 * 1.3).sinh()).abs() < 1e-14);
    }

    #[test]
    fn continuum_approach_dirichlet() {
        let p = continuum_problem(&BoundaryCondition::Dirichlet, 1.0, 0.0, 0.0, 1.0);
        let a = p.point(200).unwrap();
        let b = p.point(400).unwrap();
        assert!(b.rel_error < 1e-5);
        assert!((observed_order(&a, &b) - 2.0).abs() < 0.05);
    }
}
