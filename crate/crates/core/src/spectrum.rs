//! Brute-force eigenvalue oracle, polynomial root finding and
//! Euler–Rayleigh inverse-power sums.
//!
//! The oracle never touches transfer matrices: it builds the finite
//! difference operator as an explicit matrix and counts eigenvalues with
//! Sturm sequences.

use std::f64::consts::PI;

use crate::domain::{BoundaryCondition, Potential, Spectrum};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest ν handled by the tridiagonal oracle.
pub const ORACLE_TRIDIAGONAL_LIMIT: usize = 4000;
/// Largest ν handled by the dense cyclic oracle.
pub const ORACLE_CYCLIC_LIMIT: usize = 400;

/// The lattice operator written as an explicit matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorMatrix {
    /// Symmetric tridiagonal with off-diagonal `−1`.
    Tridiagonal { diag: Vec<f64> },
    /// Hermitian cyclic matrix with corner phase `e^{2πiτ}`.
    Cyclic { diag: Vec<f64>, tau: f64 },
}

fn is_minus_one(p: f64) -> bool {
    (1.0 + p).abs() <= 1e-12
}

/// Builds the explicit operator matrix for a potential and boundary condition.
///
/// A Robin parameter equal to `−1` pins the adjacent site to zero; that site
/// is removed from the matrix.
pub fn operator_matrix(potential: &Potential, bc: &BoundaryCondition) -> Result<OperatorMatrix> {
    bc.validate()?;
    let mut diag: Vec<f64> = potential.values().iter().map(|v| 2.0 + v).collect();
    if let Some(tau) = bc.twist() {
        if diag.is_empty() {
            return Err(Error::InvalidLattice("a circle needs at least one vertex".into()));
        }
        return Ok(OperatorMatrix::Cyclic { diag, tau });
    }
    let (alpha, beta) = match *bc {
        BoundaryCondition::Dirichlet => return Ok(OperatorMatrix::Tridiagonal { diag }),
        BoundaryCondition::Neumann => (0.0, 0.0),
        BoundaryCondition::Robin { alpha, beta } => (alpha, beta),
        _ => unreachable!("circle handled above"),
    };
    let nu = diag.len();
    if nu == 0 {
        return Ok(OperatorMatrix::Tridiagonal { diag });
    }
    if !is_minus_one(alpha) {
        diag[0] -= 1.0 / (1.0 + alpha);
    }
    if !is_minus_one(beta) {
        diag[nu - 1] -= 1.0 / (1.0 + beta);
    }
    let start = usize::from(is_minus_one(alpha));
    let end = if is_minus_one(beta) { nu - 1 } else { nu };
    let diag = if start < end { diag[start..end].to_vec() } else { Vec::new() };
    Ok(OperatorMatrix::Tridiagonal { diag })
}

/// Number of eigenvalues strictly below `x` of the symmetric tridiagonal
/// matrix with diagonal `diag` and squared off-diagonals `off_sq`.
pub fn sturm_count(diag: &[f64], off_sq: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for (k, &d) in diag.iter().enumerate() {
        let coupling = if k == 0 { 0.0 } else { off_sq[k - 1] / q };
        q = d - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (d.abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of a symmetric tridiagonal matrix by Sturm bisection,
/// refined to the resolution of double precision.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return Vec::new();
    }
    let off_sq: Vec<f64> = off.iter().map(|e| e * e).collect();
    let radius = |k: usize| {
        let left = if k > 0 { off[k - 1].abs() } else { 0.0 };
        let right = if k + 1 < n { off[k].abs() } else { 0.0 };
        left + right
    };
    let lo0 = (0..n).map(|k| diag[k] - radius(k)).fold(f64::INFINITY, f64::min);
    let hi0 = (0..n).map(|k| diag[k] + radius(k)).fold(f64::NEG_INFINITY, f64::max);
    let pad = 1e-12 * (lo0.abs().max(hi0.abs()) + 1.0);
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (lo0 - pad, hi0 + pad);
            for _ in 0..300 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(diag, &off_sq, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Householder reduction of a dense symmetric matrix (row-major, `n × n`)
/// to tridiagonal form, returning `(diag, off)`.
pub fn householder_tridiagonal(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let idx = |i: usize, j: usize| i * n + j;
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[idx(i, k)].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[idx(k + 1, k)];
        let alpha = if x0 > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[idx(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= vnorm);
        let m = n - k - 1;
        let p: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|j| a[idx(k + 1 + i, k + 1 + j)] * v[j]).sum())
            .collect();
        let c: f64 = v.iter().zip(&p).map(|(x, y)| x * y).sum();
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - c * vi).collect();
        for i in 0..m {
            for j in 0..m {
                a[idx(k + 1 + i, k + 1 + j)] -= 2.0 * (v[i] * w[j] + w[i] * v[j]);
            }
        }
        a[idx(k + 1, k)] = alpha;
        a[idx(k, k + 1)] = alpha;
        for i in k + 2..n {
            a[idx(i, k)] = 0.0;
            a[idx(k, i)] = 0.0;
        }
    }
    let diag = (0..n).map(|i| a[idx(i, i)]).collect();
    let off = (0..n.saturating_sub(1)).map(|i| a[idx(i + 1, i)]).collect();
    (diag, off)
}

fn cyclic_eigenvalues(diag: &[f64], tau: f64) -> Vec<f64> {
    let n = diag.len();
    let theta = 2.0 * PI * tau;
    let (c, s) = if tau == 1.0 {
        (1.0, 0.0)
    } else if tau == 0.5 {
        (-1.0, 0.0)
    } else {
        (theta.cos(), theta.sin())
    };
    let mut re = vec![0.0; n * n];
    let mut im = vec![0.0; n * n];
    for j in 0..n {
        re[j * n + j] += diag[j];
        let k = (j + 1) % n;
        let (pr, pi) = if k == 0 { (c, s) } else { (1.0, 0.0) };
        re[j * n + k] -= pr;
        im[j * n + k] -= pi;
        re[k * n + j] -= pr;
        im[k * n + j] += pi;
    }
    if im.iter().all(|&x| x == 0.0) {
        let (d, e) = householder_tridiagonal(re, n);
        return tridiagonal_eigenvalues(&d, &e);
    }
    let m = 2 * n;
    let mut big = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let (r, q) = (re[i * n + j], im[i * n + j]);
            big[i * m + j] = r;
            big[(i + n) * m + (j + n)] = r;
            big[i * m + (j + n)] = -q;
            big[(i + n) * m + j] = q;
        }
    }
    let (d, e) = householder_tridiagonal(big, m);
    let mut doubled = tridiagonal_eigenvalues(&d, &e);
    doubled.sort_by(f64::total_cmp);
    doubled.into_iter().step_by(2).collect()
}

/// All eigenvalues of the explicit operator matrix, ascending.
pub fn oracle_spectrum(potential: &Potential, bc: &BoundaryCondition) -> Result<Spectrum> {
    let nu = potential.nu();
    match operator_matrix(potential, bc)? {
        OperatorMatrix::Tridiagonal { diag } => {
            if nu > ORACLE_TRIDIAGONAL_LIMIT {
                return Err(Error::OracleUnavailable { nu, limit: ORACLE_TRIDIAGONAL_LIMIT });
            }
            let off = vec![-1.0; diag.len().saturating_sub(1)];
            Ok(Spectrum::new(tridiagonal_eigenvalues(&diag, &off)))
        }
        OperatorMatrix::Cyclic { diag, tau } => {
            if nu > ORACLE_CYCLIC_LIMIT {
                return Err(Error::OracleUnavailable { nu, limit: ORACLE_CYCLIC_LIMIT });
            }
            Ok(Spectrum::new(cyclic_eigenvalues(&diag, tau)))
        }
    }
}

fn abs_eval(p: &Poly<f64>, x: f64) -> f64 {
    p.coeffs().iter().rev().fold(0.0, |acc, c| acc * x.abs() + c.abs())
}

fn bisect_root(p: &Poly<f64>, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = p.eval(lo);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = p.eval(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn real_roots(p: &Poly<f64>) -> Result<Vec<f64>> {
    let p = p.trimmed();
    let degree = p.degree().ok_or_else(|| Error::InvalidArgument("zero polynomial has no roots".into()))?;
    match degree {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-p.coeff(0) / p.coeff(1)]),
        _ => {}
    }
    let lead = p.coeff(degree);
    let bound = 1.0 + (0..degree).map(|k| (p.coeff(k) / lead).abs()).fold(0.0, f64::max);
    let crit = real_roots(&p.derivative()?)?;

    // Group critical points that coincide into clusters with multiplicity.
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for c in crit {
        match clusters.last_mut() {
            Some((x, m)) if (c - *x).abs() <= 1e-9 * (1.0 + x.abs()) => *m += 1,
            _ => clusters.push((c, 1)),
        }
    }
    let mut points = vec![(-bound, 0usize, p.eval(-bound))];
    let mut roots = Vec::with_capacity(degree);
    for &(c, m) in &clusters {
        let value = p.eval(c);
        if value.abs() <= 1e-10 * abs_eval(&p, c) {
            roots.extend(std::iter::repeat(c).take(m + 1));
            points.push((c, m, 0.0));
        } else {
            points.push((c, m, value));
        }
    }
    points.push((bound, 0, p.eval(bound)));
    for w in points.windows(2) {
        let ((a, _, fa), (b, _, fb)) = (w[0], w[1]);
        if fa != 0.0 && fb != 0.0 && (fa > 0.0) != (fb > 0.0) {
            roots.push(bisect_root(&p, a, b));
        }
    }
    if roots.len() != degree {
        return Err(Error::RootCount { degree, found: roots.len() });
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// All real roots of a polynomial whose roots are known to be real,
/// bracketed by the critical points of the derivative cascade.
pub fn poly_roots(p: &Poly<f64>) -> Result<Spectrum> {
    real_roots(p).map(Spectrum::new)
}

/// `Σ_n λ_n^{−m}` for `m = 1..=kmax` from Newton's identities on the
/// reversed polynomial.
pub fn inverse_power_sums(p: &Poly<f64>, kmax: usize) -> Result<Vec<f64>> {
    let c0 = p.coeff(0);
    if c0 == 0.0 {
        return Err(Error::ZeroMode);
    }
    let a: Vec<f64> = (0..=kmax).map(|k| p.coeff(k) / c0).collect();
    let mut sums: Vec<f64> = Vec::with_capacity(kmax);
    for m in 1..=kmax {
        // p_m + a_1 p_{m−1} + … + a_{m−1} p_1 + m a_m = 0
        let mut acc = m as f64 * a[m];
        for i in 1..m {
            acc += a[i] * sums[m - i - 1];
        }
        sums.push(-acc);
    }
    Ok(sums)
}

/// `Σ_{n=1}^{p−1} cosec^{2m}(πn/2p)` for `m ∈ {1, 2}`.
pub fn cosecant_sum(p: usize, m: u32) -> Result<f64> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!("cosecant sum needs p ≥ 2, got {p}")));
    }
    if !(1..=2).contains(&m) {
        return Err(Error::InvalidArgument(format!("cosecant power m must be 1 or 2, got {m}")));
    }
    let total = (1..p)
        .map(|n| {
            let s = (PI * n as f64 / (2.0 * p as f64)).sin();
            s.powi(-2 * m as i32)
        })
        .sum();
    Ok(total)
}

/// Closed form of `Σ_n 4/λ_n` for the free Robin lattice.
pub fn robin_cosec_sum(nu: usize, alpha: f64, beta: f64) -> Result<f64> {
    let n = nu as f64;
    let ab = alpha * beta;
    let den = 3.0 * ((1.0 + n) * ab + alpha + beta);
    if den.abs() <= 1e-12 * 3.0 * ((1.0 + n) * ab.abs() + alpha.abs() + beta.abs() + 1e-300) || den == 0.0 {
        return Err(Error::ZeroModeLocus);
    }
    let num = 2.0 * (3.0 * n * n * (ab + alpha + beta) + n * (n * n - 1.0) * ab + 3.0 * n * (ab + alpha + beta + 2.0));
    Ok(num / den)
}

/// `Σ_n 1/λ_n = ν(ν+2)/6` for the free Dirichlet lattice.
pub fn dirichlet_free_inverse_sum(nu: usize) -> f64 {
    let n = nu as f64;
    n * (n + 2.0) / 6.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn oracle_examples() {
        let d = oracle_spectrum(&Potential::zeros(2), &BoundaryCondition::Dirichlet).unwrap();
        assert!(close(&d.lambdas, &[1.0, 3.0], 1e-14));
        let r = oracle_spectrum(&Potential::zeros(1), &BoundaryCondition::Robin { alpha: 1.0, beta: 0.0 }).unwrap();
        assert!(close(&r.lambdas, &[0.5], 1e-15));
        let (a, b) = (0.3, -0.7);
        let n = oracle_spectrum(&Potential::new(vec![a, b]), &BoundaryCondition::Neumann).unwrap();
        let (tr, det) = (2.0 + a + b, (1.0 + a) * (1.0 + b) - 1.0);
        let disc = (tr * tr - 4.0 * det).sqrt();
        assert!(close(&n.lambdas, &[(tr - disc) / 2.0, (tr + disc) / 2.0], 1e-14));
        assert!((n.lambdas[0] * n.lambdas[1] - (a + b + a * b)).abs() < 1e-14);
    }

    #[test]
    fn cyclic_oracle_small_cases() {
        let one = oracle_spectrum(&Potential::new(vec![0.5]), &BoundaryCondition::TwistedPeriodic { tau: 0.25 }).unwrap();
        assert!(close(&one.lambdas, &[2.5], 1e-14));
        let two = oracle_spectrum(&Potential::zeros(2), &BoundaryCondition::TwistedPeriodic { tau: 0.5 }).unwrap();
        assert!(close(&two.lambdas, &[2.0, 2.0], 1e-14));
        let p = oracle_spectrum(&Potential::zeros(2), &BoundaryCondition::Periodic).unwrap();
        assert!(close(&p.lambdas, &[0.0, 4.0], 1e-14));
        let nu = 7;
        let tau = 0.3;
        let t = oracle_spectrum(&Potential::zeros(nu), &BoundaryCondition::TwistedPeriodic { tau }).unwrap();
        let mut want: Vec<f64> = (0..nu).map(|n| 4.0 * (PI * (n as f64 + tau) / nu as f64).sin().powi(2)).collect();
        want.sort_by(f64::total_cmp);
        assert!(close(&t.lambdas, &want, 1e-12));
    }

    #[test]
    fn robin_degenerate_end_is_dropped() {
        let pot = Potential::new(vec![0.2, 0.4, -0.1]);
        let s = oracle_spectrum(&pot, &BoundaryCondition::Robin { alpha: -1.0, beta: 0.5 }).unwrap();
        assert_eq!(s.len(), 2);
        let p = transfer::char_poly(&pot, &BoundaryCondition::Robin { alpha: -1.0, beta: 0.5 }).unwrap();
        assert!(close(&poly_roots(&p).unwrap().lambdas, &s.lambdas, 1e-10));
    }

    #[test]
    fn root_examples() {
        let r = poly_roots(&Poly::new(vec![3.0, -4.0, 1.0])).unwrap();
        assert!(close(&r.lambdas, &[1.0, 3.0], 1e-14));
        let s17 = 17f64.sqrt();
        let r = poly_roots(&Poly::new(vec![1.0, -5.0, 2.0])).unwrap();
        assert!(close(&r.lambdas, &[(5.0 - s17) / 4.0, (5.0 + s17) / 4.0], 1e-14));
        let r = poly_roots(&Poly::new(vec![1.0, -2.0])).unwrap();
        assert!(close(&r.lambdas, &[0.5], 1e-15));
    }

    #[test]
    fn roots_with_double_roots() {
        let p = transfer::periodic_char_poly(&Potential::zeros(6), 1.0).unwrap();
        let r = poly_roots(&p).unwrap();
        let o = oracle_spectrum(&Potential::zeros(6), &BoundaryCondition::Periodic).unwrap();
        assert!(close(&r.lambdas, &o.lambdas, 1e-7), "{:?} vs {:?}", r.lambdas, o.lambdas);
    }

    #[test]
    fn complex_roots_are_reported() {
        let err = poly_roots(&Poly::new(vec![1.0, 0.0, 1.0])).unwrap_err();
        assert_eq!(err, Error::RootCount { degree: 2, found: 0 });
    }

    #[test]
    fn inverse_sum_examples() {
        let d3 = transfer::char_poly(&Potential::zeros(3), &BoundaryCondition::Dirichlet).unwrap();
        assert!((inverse_power_sums(&d3, 1).unwrap()[0] - 2.5).abs() < 1e-14);
        let r = Poly::new(vec![1.0, -5.0, 2.0]);
        assert!((inverse_power_sums(&r, 1).unwrap()[0] - 5.0).abs() < 1e-14);
        let delta = transfer::char_poly(&Potential::new(vec![0.0, 1.0, 0.0]), &BoundaryCondition::Dirichlet).unwrap();
        assert!((inverse_power_sums(&delta, 1).unwrap()[0] - 1.75).abs() < 1e-14);
        let n = transfer::char_poly(&Potential::zeros(3), &BoundaryCondition::Neumann).unwrap();
        assert_eq!(inverse_power_sums(&n, 2), Err(Error::ZeroMode));
        assert!((dirichlet_free_inverse_sum(9) - 16.5).abs() < 1e-14);
    }

    #[test]
    fn higher_inverse_sums_match_roots() {
        let pot = Potential::new(vec![0.3, -0.2, 0.9, 0.1, -0.5]);
        let p = transfer::char_poly(&pot, &BoundaryCondition::Dirichlet).unwrap();
        let roots = oracle_spectrum(&pot, &BoundaryCondition::Dirichlet).unwrap();
        let sums = inverse_power_sums(&p, 4).unwrap();
        for (m, s) in sums.iter().enumerate() {
            let want: f64 = roots.lambdas.iter().map(|l| l.powi(-(m as i32 + 1))).sum();
            assert!((s - want).abs() <= 1e-10 * want.abs());
        }
    }

    #[test]
    fn cosecant_examples() {
        assert!((cosecant_sum(2, 1).unwrap() - 2.0).abs() < 1e-14);
        assert!((cosecant_sum(10, 1).unwrap() - 66.0).abs() < 1e-11);
        let p = 10_000usize;
        let scaled = (PI / (2.0 * p as f64)).powi(2) * cosecant_sum(p, 1).unwrap();
        assert!((scaled - PI * PI / 6.0).abs() < 1e-4);
        assert!(cosecant_sum(1, 1).is_err());
        assert!(cosecant_sum(4, 3).is_err());
        assert!(cosecant_sum(5, 2).unwrap() > cosecant_sum(5, 1).unwrap());
    }

    #[test]
    fn robin_cosec_examples() {
        assert!((robin_cosec_sum(1, 1.0, 0.0).unwrap() - 8.0).abs() < 1e-14);
        assert!((robin_cosec_sum(2, 1.0, 0.0).unwrap() - 20.0).abs() < 1e-13);
        assert_eq!(robin_cosec_sum(5, 0.0, 0.0), Err(Error::ZeroModeLocus));
    }

    proptest! {
        #[test]
        fn interlacing_under_potential_increase(
            values in proptest::collection::vec(-1.0f64..1.0, 1..10),
            site in 0usize..10,
            bump in 0.0f64..2.0,
        ) {
            let nu = values.len();
            let base = Potential::new(values.clone());
            let mut raised = values;
            raised[site % nu] += bump;
            let raised = Potential::new(raised);
            for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann, BoundaryCondition::Periodic] {
                let a = oracle_spectrum(&base, &bc).unwrap();
                let b = oracle_spectrum(&raised, &bc).unwrap();
                for (x, y) in a.lambdas.iter().zip(&b.lambdas) {
                    prop_assert!(y >= &(x - 1e-12));
                }
            }
        }

        #[test]
        fn sturm_count_brackets_eigenvalue(values in proptest::collection::vec(-1.0f64..1.0, 1..20)) {
            let pot = Potential::new(values);
            let s = oracle_spectrum(&pot, &BoundaryCondition::Dirichlet).unwrap();
            let diag: Vec<f64> = pot.values().iter().map(|v| 2.0 + v).collect();
            let off_sq = vec![1.0; diag.len().saturating_sub(1)];
            prop_assert_eq!(sturm_count(&diag, &off_sq, s.lambdas[0] - 1e-6), 0);
            prop_assert_eq!(sturm_count(&diag, &off_sq, s.lambdas[s.len() - 1] + 1e-6), s.len());
        }
    }
}
