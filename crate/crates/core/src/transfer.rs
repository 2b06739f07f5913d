//! Transfer matrices, propagators and Gel'fand–Yaglom determinants.
//!
//! The recurrence `y(j+1) + (λ − v_j − 2) y(j) + y(j−1) = 0` is advanced by
//! the step matrix `M(j) = [[0, 1], [−1, v_j + 2 − λ]]` acting on
//! `Υ(j) = (y(j), y(j+1))ᵀ`. The characteristic polynomial is the boundary
//! matrix element `P(λ) = Υ†_out · K(λ; ν, 0) · Υ_in`.

use crate::domain::{BoundaryCondition, LatticeSpec, LogDet, Potential, Spectrum, Topology};
use crate::error::{Error, Result};
use crate::mat2::{Mat2, Vec2};
use crate::poly::{CharPoly, Poly};
use crate::scalar::{Coeff, Ring};
use crate::spectrum;

pub use crate::mat2::casoratian;

/// `M = [[0, 1], [−1, v + 2 − λ]]`.
pub fn step_matrix<R: Ring>(v: &R, lambda: &R) -> Result<Mat2<R>> {
    let d = R::from_int(2).try_add(v)?.try_sub(lambda)?;
    Ok(Mat2::new(R::zero(), R::one(), R::from_int(-1), d))
}

/// The split `M = B − λA`, returned as `(B, A)`.
pub fn step_split<R: Ring>(v: &R) -> Result<(Mat2<R>, Mat2<R>)> {
    Ok((step_matrix(v, &R::zero())?, Mat2::a_split()))
}

/// Vertex-ordered products `K(λ; j, j′) = M(j)···M(j′+1)`.
#[derive(Clone, Debug)]
pub struct Propagator<R> {
    steps: Vec<Mat2<R>>,
}

impl<R: Ring> Propagator<R> {
    pub fn new(values: &[R], lambda: &R) -> Result<Self> {
        let steps = values.iter().map(|v| step_matrix(v, lambda)).collect::<Result<_>>()?;
        Ok(Propagator { steps })
    }

    pub fn nu(&self) -> usize {
        self.steps.len()
    }

    /// `M(j)` for `1 ≤ j ≤ ν`.
    pub fn step(&self, j: usize) -> &Mat2<R> {
        &self.steps[j - 1]
    }

    /// `K(λ; j, j′)`; the identity when `j = j′`.
    pub fn k(&self, j: usize, j_prime: usize) -> Result<Mat2<R>> {
        if j < j_prime {
            return Err(Error::Acausal { j, j_prime });
        }
        if j > self.nu() {
            return Err(Error::SiteOutOfRange { site: j, nu: self.nu() });
        }
        let mut k = Mat2::identity();
        for step in &self.steps[j_prime..j] {
            k = step.try_mul(&k)?;
        }
        Ok(k)
    }

    /// `K(λ; j, 0)` for `j = 0..=ν`.
    pub fn prefixes(&self) -> Result<Vec<Mat2<R>>> {
        let mut out = Vec::with_capacity(self.nu() + 1);
        out.push(Mat2::identity());
        for step in &self.steps {
            let next = step.try_mul(out.last().expect("non-empty"))?;
            out.push(next);
        }
        Ok(out)
    }
}

/// Float propagator at a fixed λ.
pub fn propagator(potential: &Potential, lambda: f64) -> Propagator<f64> {
    Propagator::new(potential.values(), &lambda).expect("float arithmetic is infallible")
}

/// Boundary data for interval conditions: the seed `Υ_in` and the adjoint
/// row `Υ†_out = Υ̃_out J`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryVectors<C> {
    pub v_in: Vec2<C>,
    pub v_out_adjoint: Vec2<C>,
}

impl<C: Coeff> BoundaryVectors<C> {
    pub fn for_bc(bc: &BoundaryCondition) -> Result<Self> {
        bc.require(Topology::Interval)?;
        let (alpha, beta) = match *bc {
            BoundaryCondition::Dirichlet => {
                return Ok(BoundaryVectors {
                    v_in: Vec2::new(C::zero(), C::one()),
                    v_out_adjoint: Vec2::new(C::zero(), C::one()),
                })
            }
            BoundaryCondition::Neumann => (0.0, 0.0),
            BoundaryCondition::Robin { alpha, beta } => (alpha, beta),
            _ => unreachable!("topology checked above"),
        };
        let one_plus = |p: f64| C::one().try_add(&C::from_real(p)?);
        let v_out = Vec2::new(one_plus(beta)?, C::one());
        Ok(BoundaryVectors { v_in: Vec2::new(C::one(), one_plus(alpha)?), v_out_adjoint: v_out.adjoint()? })
    }
}

/// `Υ(j) = K(λ; j, 0)·v0` for `j = 0..=ν`.
pub fn propagate(potential: &Potential, lambda: f64, v0: &Vec2<f64>) -> Vec<Vec2<f64>> {
    let mut out = Vec::with_capacity(potential.nu() + 1);
    out.push(v0.clone());
    for &v in potential.values() {
        let Vec2 { x, y } = *out.last().expect("non-empty");
        out.push(Vec2::new(y, (v + 2.0 - lambda) * y - x));
    }
    out
}

/// `o · K(λ; ν, 0) · i` as a polynomial in λ.
pub fn boundary_element_poly<C: Coeff>(values: &[C], v_in: &Vec2<C>, v_out_adjoint: &Vec2<C>) -> Result<Poly<C>> {
    let mut x = Poly::constant(v_in.x);
    let mut y = Poly::constant(v_in.y);
    for v in values {
        let d = Poly::new(vec![C::from_int(2).try_add(v)?, C::from_int(-1)]);
        let next = d.try_mul(&y)?.try_sub(&x)?;
        x = y;
        y = next;
    }
    Poly::constant(v_out_adjoint.x).try_mul(&x)?.try_add(&Poly::constant(v_out_adjoint.y).try_mul(&y)?)
}

fn converted<C: Coeff>(potential: &Potential) -> Result<Vec<C>> {
    potential.values().iter().map(|&v| C::from_real(v)).collect()
}

fn char_poly_in<C: Coeff>(potential: &Potential, bc: &BoundaryCondition) -> Result<Poly<C>> {
    let bv = BoundaryVectors::<C>::for_bc(bc)?;
    boundary_element_poly(&converted::<C>(potential)?, &bv.v_in, &bv.v_out_adjoint)
}

/// Characteristic polynomial for an interval condition, float backend.
pub fn char_poly(potential: &Potential, bc: &BoundaryCondition) -> Result<Poly<f64>> {
    char_poly_in(potential, bc)
}

/// Characteristic polynomial with overflow-checked integer coefficients.
///
/// Potential values and Robin parameters must be integral.
pub fn char_poly_exact(potential: &Potential, bc: &BoundaryCondition) -> Result<Poly<i128>> {
    char_poly_in(potential, bc)
}

/// Characteristic polynomial in the requested backend.
pub fn char_poly_backend(potential: &Potential, bc: &BoundaryCondition, exact: bool) -> Result<CharPoly> {
    if exact {
        char_poly_exact(potential, bc).map(CharPoly::Exact)
    } else {
        char_poly(potential, bc).map(CharPoly::Float)
    }
}

/// Degree and leading coefficient of `o·K(λ)·i`, fixed by the boundary
/// vectors alone. `None` when the element vanishes identically.
pub fn leading_structure(v_in: &Vec2<f64>, v_out_adjoint: &Vec2<f64>, nu: usize) -> Option<(usize, f64)> {
    let (i1, i2, o1, o2) = (v_in.x, v_in.y, v_out_adjoint.x, v_out_adjoint.y);
    let scale = (i1.abs() + i2.abs()) * (o1.abs() + o2.abs());
    let nonzero = |t: f64| t.abs() > 1e-12 * scale;
    let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    if nu == 0 {
        let p = o1 * i1 + o2 * i2;
        return nonzero(p).then_some((0, p));
    }
    if nonzero(o2 * i2) {
        return Some((nu, o2 * i2 * sign(nu)));
    }
    let cross = o1 * i2 - o2 * i1;
    if nonzero(cross) {
        return Some((nu - 1, cross * sign(nu - 1)));
    }
    if nonzero(o1 * i1) && nu >= 2 {
        return Some((nu - 2, -o1 * i1 * sign(nu - 2)));
    }
    None
}

fn two_cos_twist(tau: f64) -> f64 {
    match tau {
        1.0 => 2.0,
        0.5 => -2.0,
        t if t == 0.25 || t == 0.75 => 0.0,
        t => 2.0 * (2.0 * std::f64::consts::PI * t).cos(),
    }
}

/// `tr K(λ; ν, 0) − 2cos 2πτ`, whose zeros are the twisted eigenvalues.
pub fn periodic_char_fn(potential: &Potential, tau: f64, lambda: f64) -> Result<f64> {
    if potential.nu() == 0 {
        return Err(Error::InvalidLattice("a circle needs at least one vertex".into()));
    }
    let k = propagator(potential, lambda).k(potential.nu(), 0)?;
    Ok(k.a + k.d - two_cos_twist(crate::domain::reduce_twist(tau)))
}

fn periodic_poly_in<C: Coeff>(values: &[C], two_cos: C) -> Result<Poly<C>> {
    if values.is_empty() {
        return Err(Error::InvalidLattice("a circle needs at least one vertex".into()));
    }
    let mut k: Mat2<Poly<C>> = Mat2::identity();
    for v in values {
        let d = Poly::new(vec![C::from_int(2).try_add(v)?, C::from_int(-1)]);
        let row2 = (d.try_mul(&k.c)?.try_sub(&k.a)?, d.try_mul(&k.d)?.try_sub(&k.b)?);
        k = Mat2::new(k.c, k.d, row2.0, row2.1);
    }
    k.trace()?.try_sub(&Poly::constant(two_cos))
}

/// `tr K(λ) − 2cos 2πτ` as a float polynomial in λ.
pub fn periodic_char_poly(potential: &Potential, tau: f64) -> Result<Poly<f64>> {
    periodic_poly_in(potential.values(), two_cos_twist(crate::domain::reduce_twist(tau)))
}

/// Exact variant; needs integral potential and integral `2cos 2πτ`.
pub fn periodic_char_poly_exact(potential: &Potential, tau: f64) -> Result<Poly<i128>> {
    let c = two_cos_twist(crate::domain::reduce_twist(tau));
    let rounded = c.round();
    if (c - rounded).abs() > 1e-12 {
        return Err(Error::NotInteger(c));
    }
    periodic_poly_in(&converted::<i128>(potential)?, rounded as i128)
}

/// Polynomial whose roots are the eigenvalues for any boundary condition.
pub fn spectral_poly(potential: &Potential, bc: &BoundaryCondition) -> Result<Poly<f64>> {
    match bc.twist() {
        Some(tau) => periodic_char_poly(potential, tau),
        None => char_poly(potential, bc),
    }
}

const RESCALE_AT: f64 = 1e100;
const ZERO_TOL: f64 = 64.0 * f64::EPSILON;

/// Runs `(x, y) → (y, (2 + v)y − x)` over the potential in difference form,
/// `y − x ← (y − x) + v·y`.
/// Returns the final pair divided by `exp(log_scale)`.
fn propagate_scaled(values: &[f64], x0: f64, y0: f64) -> (f64, f64, f64) {
    let (mut y, mut d, mut log_scale) = (y0, y0 - x0, 0.0f64);
    for &v in values {
        d += v * y;
        y += d;
        let big = y.abs().max(d.abs());
        if big > RESCALE_AT {
            y /= big;
            d /= big;
            log_scale += big.ln();
        }
    }
    (y - d, y, log_scale)
}

fn interval_det(potential: &Potential, bc: &BoundaryCondition) -> Result<LogDet> {
    let bv = BoundaryVectors::<f64>::for_bc(bc)?;
    let nu = potential.nu();
    if nu == 0 {
        return Ok(LogDet::one());
    }
    let (degree, lead) = leading_structure(&bv.v_in, &bv.v_out_adjoint, nu)
        .ok_or_else(|| Error::InvalidBoundary("boundary element vanishes identically".into()))?;
    let (x, y, log_scale) = propagate_scaled(potential.values(), bv.v_in.x, bv.v_in.y);
    let (t1, t2) = (bv.v_out_adjoint.x * x, bv.v_out_adjoint.y * y);
    let p0 = t1 + t2;
    if p0.abs() <= ZERO_TOL * (t1.abs() + t2.abs()) {
        return Ok(LogDet::vanishing());
    }
    let value = if degree % 2 == 0 { p0 / lead } else { -p0 / lead };
    Ok(LogDet::from_parts(if value > 0.0 { 1 } else { -1 }, value.abs().ln() + log_scale))
}

fn circle_det(potential: &Potential, tau: f64) -> Result<LogDet> {
    if potential.nu() == 0 {
        return Err(Error::InvalidLattice("a circle needs at least one vertex".into()));
    }
    let (a, _, scale_a) = propagate_scaled(potential.values(), 1.0, 0.0);
    let (_, d, scale_d) = propagate_scaled(potential.values(), 0.0, 1.0);
    let log_scale = scale_a.max(scale_d);
    let (a, d) = (a * (scale_a - log_scale).exp(), d * (scale_d - log_scale).exp());
    let c = if log_scale < 700.0 { two_cos_twist(tau) * (-log_scale).exp() } else { 0.0 };
    let f0 = a + d - c;
    if f0.abs() <= ZERO_TOL * (a.abs() + d.abs() + c.abs()) {
        return Ok(LogDet::vanishing());
    }
    Ok(LogDet::from_parts(if f0 > 0.0 { 1 } else { -1 }, f0.abs().ln() + log_scale))
}

/// Relative threshold below which an eigenvalue counts as a zero mode.
pub const ZERO_MODE_TOL: f64 = 1e-10;

fn primed_det(potential: &Potential, bc: &BoundaryCondition) -> Result<(LogDet, usize)> {
    let spectrum = spectrum::oracle_spectrum(potential, bc)?;
    Ok(primed_product(&spectrum))
}

/// Product of the eigenvalues above the zero-mode threshold, with the
/// number of factors kept.
pub fn primed_product(spectrum: &Spectrum) -> (LogDet, usize) {
    let max = spectrum.lambdas.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let mut det = LogDet::one();
    let (mut removed, mut kept) = (0, 0);
    for &l in &spectrum.lambdas {
        if l.abs() < ZERO_MODE_TOL * max {
            removed += 1;
        } else {
            det = det.mul(&LogDet::from_value(l));
            kept += 1;
        }
    }
    (det.with_zero_modes(removed), kept)
}

/// Number of eigenvalue factors in the unprimed determinant.
pub fn mode_count(potential: &Potential, bc: &BoundaryCondition) -> Result<usize> {
    let nu = potential.nu();
    if bc.topology() == Topology::Circle || nu == 0 {
        return Ok(nu);
    }
    let bv = BoundaryVectors::<f64>::for_bc(bc)?;
    leading_structure(&bv.v_in, &bv.v_out_adjoint, nu)
        .map(|(d, _)| d)
        .ok_or_else(|| Error::InvalidBoundary("boundary element vanishes identically".into()))
}

/// Dimensionless determinant `Π λ_n`, returned with the number of factors.
///
/// On the circle the product runs over the ν modes of the twisted operator.
pub fn determinant_dimensionless(
    potential: &Potential,
    bc: &BoundaryCondition,
    prime: bool,
) -> Result<(LogDet, usize)> {
    bc.validate()?;
    if prime {
        if potential.nu() == 0 {
            return Ok((LogDet::one(), 0));
        }
        return primed_det(potential, bc);
    }
    let det = match bc.twist() {
        Some(tau) => circle_det(potential, tau)?,
        None => interval_det(potential, bc)?,
    };
    Ok((det, mode_count(potential, bc)?))
}

/// Physical determinant `Π λ̄_n = h^{−2d} Π λ_n`.
pub fn determinant(potential: &Potential, bc: &BoundaryCondition, spec: &LatticeSpec, prime: bool) -> Result<LogDet> {
    potential.check_len(spec.nu())?;
    bc.require(spec.topology())?;
    let (det, factors) = determinant_dimensionless(potential, bc, prime)?;
    Ok(det.times_h_power(spec.h(), -2 * factors as i64))
}

/// Unit-normalised eigenfunctions `y_n(j)`, `j = 1..=ν`, one row per
/// eigenvalue, obtained by propagating the boundary seed.
pub fn eigenfunctions(potential: &Potential, bc: &BoundaryCondition, spectrum: &Spectrum) -> Result<Vec<Vec<f64>>> {
    let bv = BoundaryVectors::<f64>::for_bc(bc)?;
    let nu = potential.nu();
    Ok(spectrum
        .lambdas
        .iter()
        .map(|&lambda| {
            let path = propagate(potential, lambda, &bv.v_in);
            let y: Vec<f64> = path[..nu].iter().map(|p| p.y).collect();
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.into_iter().map(|v| v / norm).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::{cheb_u, cheb_u_poly, cheb_v};
    use proptest::prelude::*;

    fn dirichlet() -> BoundaryCondition {
        BoundaryCondition::Dirichlet
    }

    #[test]
    fn step_matrix_examples() {
        assert_eq!(step_matrix(&0.0, &0.0).unwrap(), Mat2::new(0.0, 1.0, -1.0, 2.0));
        let lam = Poly::<i128>::lambda();
        let m = step_matrix(&Poly::constant(1), &lam).unwrap();
        assert_eq!(m.d.coeffs(), &[3, -1]);
        assert_eq!(m.det().unwrap(), Poly::constant(1));
    }

    #[test]
    fn split_relations_exact() {
        for v in -3i128..=3 {
            let (b, a) = step_split(&v).unwrap();
            let j = Mat2::<i128>::j();
            assert_eq!(b.symplectic(&b).unwrap(), j);
            assert_eq!(a.symplectic(&a).unwrap(), Mat2::zero());
            assert_eq!(a.symplectic(&b).unwrap(), a.scale(&-1).unwrap());
            assert_eq!(b.symplectic(&a).unwrap(), a);
        }
    }

    #[test]
    fn propagate_free_examples() {
        let free = Potential::zeros(6);
        let path = propagate(&free, 0.0, &Vec2::new(0.0, 1.0));
        for (j, p) in path.iter().enumerate() {
            assert_eq!((p.x, p.y), (j as f64, j as f64 + 1.0));
        }
        let lam = 0.37;
        let x = 1.0 - lam / 2.0;
        let d = propagate(&free, lam, &Vec2::new(0.0, 1.0));
        let n = propagate(&free, lam, &Vec2::new(1.0, 1.0));
        for j in 0..=6usize {
            assert!((d[j].y - cheb_u(j as i64, x)).abs() < 1e-13);
            assert!((n[j].x - cheb_v(j as i64 - 1, x)).abs() < 1e-13);
        }
    }

    #[test]
    fn char_poly_examples() {
        let p = char_poly_exact(&Potential::zeros(2), &dirichlet()).unwrap();
        assert_eq!(p.coeffs(), &[3, -4, 1]);
        let r = char_poly_exact(&Potential::zeros(1), &BoundaryCondition::Robin { alpha: 1.0, beta: 0.0 }).unwrap();
        assert_eq!(r.coeffs(), &[1, -2]);
        let r2 = char_poly_exact(&Potential::zeros(2), &BoundaryCondition::Robin { alpha: 1.0, beta: 0.0 }).unwrap();
        assert_eq!(r2.coeffs(), &[1, -5, 2]);
        for nu in 0..12 {
            let p = char_poly_exact(&Potential::zeros(nu), &dirichlet()).unwrap();
            assert_eq!(p, cheb_u_poly(nu).unwrap());
        }
        assert_eq!(char_poly_exact(&Potential::zeros(0), &dirichlet()).unwrap().coeffs(), &[1]);
    }

    #[test]
    fn char_poly_cubic_closed_form() {
        let (v1, v2, v3) = (2i128, -1, 3);
        let p = char_poly_exact(&Potential::new(vec![2.0, -1.0, 3.0]), &dirichlet()).unwrap();
        let s1 = v1 + v2 + v3;
        let s2 = v1 * v2 + v2 * v3 + v1 * v3;
        let s3 = v1 * v2 * v3;
        assert_eq!(p.coeffs(), &[4 + v2 + 3 * s1 + 2 * s2 + s3, -(10 + 4 * s1 + s2), 6 + s1, -1]);
    }

    #[test]
    fn exact_rejects_fractional_input() {
        let r = char_poly_exact(&Potential::new(vec![0.5]), &dirichlet());
        assert_eq!(r, Err(Error::NotInteger(0.5)));
    }

    #[test]
    fn periodic_char_fn_examples() {
        assert_eq!(periodic_char_fn(&Potential::zeros(5), 1.0, 0.0).unwrap(), 0.0);
        assert!(periodic_char_fn(&Potential::zeros(2), 0.5, 2.0).unwrap().abs() < 1e-14);
        let (lam, tau, nu): (f64, f64, usize) = (-0.3, 0.3, 7);
        let x = 1.0 - lam / 2.0;
        let gamma2 = x.acosh();
        let want = 2.0 * ((gamma2 * nu as f64).cosh() - (2.0 * std::f64::consts::PI * tau).cos());
        assert!((periodic_char_fn(&Potential::zeros(nu), tau, lam).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn determinant_examples() {
        let spec = LatticeSpec::interval(3, 1.0).unwrap();
        let d = determinant(&Potential::zeros(3), &dirichlet(), &spec, false).unwrap();
        assert!((d.value() - 4.0).abs() < 1e-12);
        let spec4 = LatticeSpec::interval(4, 1.0).unwrap();
        let n = determinant(&Potential::zeros(4), &BoundaryCondition::Neumann, &spec4, false).unwrap();
        assert!(n.is_zero());
        let np = determinant(&Potential::zeros(4), &BoundaryCondition::Neumann, &spec4, true).unwrap();
        assert!((np.value() - 4.0).abs() < 1e-9);
        assert_eq!(np.zero_modes_removed, 1);
        let half = LatticeSpec::interval(4, 0.5).unwrap();
        let nph = determinant(&Potential::zeros(4), &BoundaryCondition::Neumann, &half, true).unwrap();
        assert!((nph.value() - 4.0 * 0.5f64.powi(-6)).abs() < 1e-6);
        let empty = LatticeSpec::interval(0, 1.0).unwrap();
        assert_eq!(determinant(&Potential::zeros(0), &dirichlet(), &empty, false).unwrap(), LogDet::one());
    }

    #[test]
    fn determinant_checks_inputs() {
        let spec = LatticeSpec::interval(3, 1.0).unwrap();
        assert!(matches!(
            determinant(&Potential::zeros(2), &dirichlet(), &spec, false),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            determinant(&Potential::zeros(3), &BoundaryCondition::Periodic, &spec, false),
            Err(Error::TopologyMismatch { .. })
        ));
    }

    #[test]
    fn large_lattice_determinant_does_not_overflow() {
        let spec = LatticeSpec::interval(20_000, 1.0).unwrap();
        let d = determinant(&Potential::constant(20_000, 0.01), &dirichlet(), &spec, false).unwrap();
        assert_eq!(d.sign, 1);
        let want = crate::chebyshev::cheb_u_log(20_000, 1.005).1;
        assert!((d.log_abs - want).abs() < 1e-9 * want);
    }

    #[test]
    fn robin_degenerate_degrees() {
        let pot = Potential::new(vec![0.3, -0.2, 0.5, 0.1]);
        for (alpha, beta, degree) in [(-1.0, 0.5, 3), (0.5, -1.0, 3), (-1.0, -1.0, 2)] {
            let bc = BoundaryCondition::Robin { alpha, beta };
            let p = char_poly(&pot, &bc).unwrap();
            assert_eq!(p.degree(), Some(degree));
            let bv = BoundaryVectors::<f64>::for_bc(&bc).unwrap();
            let (d, lead) = leading_structure(&bv.v_in, &bv.v_out_adjoint, 4).unwrap();
            assert_eq!(d, degree);
            assert!((p.leading().unwrap() - lead).abs() < 1e-12);
        }
    }

    #[test]
    fn acausal_request_rejected() {
        let k = propagator(&Potential::zeros(4), 0.1);
        assert_eq!(k.k(1, 3).unwrap_err(), Error::Acausal { j: 1, j_prime: 3 });
        assert_eq!(k.k(2, 2).unwrap(), Mat2::identity());
    }

    #[test]
    fn theta_is_inverse_difference_of_delta() {
        let theta = |j: i64, jp: i64| i64::from(j >= jp);
        for j in 0..10 {
            for jp in 0..10 {
                assert_eq!(theta(j, jp) - theta(j - 1, jp), i64::from(j == jp));
            }
        }
    }

    #[test]
    fn eigenfunction_examples() {
        let free3 = Potential::zeros(3);
        let spec = spectrum::oracle_spectrum(&free3, &dirichlet()).unwrap();
        let y = eigenfunctions(&free3, &dirichlet(), &spec).unwrap();
        let pi = std::f64::consts::PI;
        let want: Vec<f64> = (1..=3).map(|j| (j as f64 * pi / 4.0).sin()).collect();
        let norm = want.iter().map(|v| v * v).sum::<f64>().sqrt();
        for j in 0..3 {
            assert!((y[0][j] - want[j] / norm).abs() < 1e-12);
        }
        let ns = spectrum::oracle_spectrum(&free3, &BoundaryCondition::Neumann).unwrap();
        let yn = eigenfunctions(&free3, &BoundaryCondition::Neumann, &ns).unwrap();
        for j in 0..3 {
            assert!((yn[0][j] - yn[0][0]).abs() < 1e-12);
            let c: Vec<f64> = (1..=3).map(|k| (pi * (2 * k - 1) as f64 / 6.0).cos()).collect();
            let cn = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((yn[1][j] - c[j] / cn).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn semigroup(values in proptest::collection::vec(-1.0f64..1.0, 1..12), lam in -1.0f64..5.0,
                     a in 0usize..12, b in 0usize..12, c in 0usize..12) {
            let nu = values.len();
            let mut idx = [a % (nu + 1), b % (nu + 1), c % (nu + 1)];
            idx.sort();
            let k = propagator(&Potential::new(values), lam);
            let lhs = k.k(idx[2], idx[1]).unwrap().try_mul(&k.k(idx[1], idx[0]).unwrap()).unwrap();
            let rhs = k.k(idx[2], idx[0]).unwrap();
            prop_assert!(lhs.try_sub(&rhs).unwrap().max_abs() <= 1e-12 * (1.0 + rhs.max_abs()));
        }

        #[test]
        fn unit_determinant(v in -3.0f64..3.0, lam in -5.0f64..5.0) {
            let m = step_matrix(&v, &lam).unwrap();
            prop_assert!((m.det().unwrap() - 1.0).abs() <= 1e-14);
        }

        #[test]
        fn casoratian_is_conserved(values in proptest::collection::vec(-1.0f64..1.0, 1..30), lam in 0.0f64..4.0,
                                   a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let pot = Potential::new(values);
            let s1 = propagate(&pot, lam, &Vec2::new(0.0, 1.0));
            let s2 = propagate(&pot, lam, &Vec2::new(a, b));
            let c0 = casoratian(&s1[0], &s2[0]).unwrap();
            for (p, q) in s1.iter().zip(&s2) {
                let scale = 1.0 + p.x.abs().max(p.y.abs()) * q.x.abs().max(q.y.abs());
                prop_assert!((casoratian(p, q).unwrap() - c0).abs() <= 1e-11 * scale);
            }
        }

        #[test]
        fn equation_of_motion_exact(values in proptest::collection::vec(-3i128..3, 1..8), lam in -3i128..3) {
            let k = Propagator::new(&values, &lam).unwrap();
            let nu = values.len();
            for jp in 0..=nu {
                for j in jp + 1..=nu {
                    let rhs = k.step(j).try_mul(&k.k(j - 1, jp).unwrap()).unwrap();
                    prop_assert_eq!(k.k(j, jp).unwrap(), rhs);
                }
                prop_assert_eq!(k.k(jp, jp).unwrap(), Mat2::identity());
            }
        }

        #[test]
        fn scalar_and_polynomial_paths_agree(values in proptest::collection::vec(-1.0f64..1.0, 0..10), lam in -1.0f64..5.0) {
            let pot = Potential::new(values);
            let p = char_poly(&pot, &dirichlet()).unwrap();
            let path = propagate(&pot, lam, &Vec2::new(0.0, 1.0));
            let direct = path.last().unwrap().y;
            prop_assert!((p.eval(lam) - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
        }
    }
}
