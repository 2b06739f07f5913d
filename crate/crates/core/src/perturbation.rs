//! Expansion of the characteristic polynomial in powers of the potential.
//!
//! Writing each step matrix as `M(j) = C + v_j A` with the free Chebyshev
//! matrix `C` and `A = [[0, 0], [0, 1]]`, the product over sites expands
//! into terms with `k` insertions at `j₁ > … > j_k`:
//!
//! ```text
//! out(j₁) v_{j₁} U_{j₁−j₂−1} v_{j₂} ⋯ U_{j_{k−1}−j_k−1} v_{j_k} in(j_k)
//! ```
//!
//! with Dirichlet ends `out(j) = U_{ν−j}`, `in(j) = U_{j−1}` and Neumann ends
//! `V_{ν−j}`, `V_{j−1}`. The sum is accumulated one insertion at a time.

use crate::chebyshev::ChebTable;
use crate::domain::{BoundaryCondition, Potential};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Coeff, Ring};
use crate::transfer::{self, BoundaryVectors};

/// Truncation of the insertion series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOrder {
    Full,
    /// Keep terms with at most this many insertions.
    Upto(usize),
}

impl SeriesOrder {
    fn max(self, nu: usize) -> usize {
        match self {
            SeriesOrder::Full => nu,
            SeriesOrder::Upto(k) => k.min(nu),
        }
    }
}

/// One vertex tuple of the expansion, strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTerm {
    pub order: usize,
    pub vertices: Vec<usize>,
}

struct Ends<R> {
    table: ChebTable<R>,
    o: [R; 2],
    i: [R; 2],
    nu: i64,
}

impl<R: Ring> Ends<R> {
    fn input(&self, j: usize) -> Result<R> {
        let j = j as i64;
        self.table.u(j - 1).try_mul(&self.i[1])?.try_sub(&self.table.u(j - 2).try_mul(&self.i[0])?)
    }

    fn output(&self, j: usize) -> Result<R> {
        let j = j as i64;
        self.o[0].try_mul(self.table.u(self.nu - j - 1))?.try_add(&self.o[1].try_mul(self.table.u(self.nu - j))?)
    }

    fn free(&self) -> Result<R> {
        let n = self.nu;
        let u = |k| self.table.u(k);
        let first = u(n - 1).try_mul(&self.i[1])?.try_sub(&u(n - 2).try_mul(&self.i[0])?)?;
        let second = u(n).try_mul(&self.i[1])?.try_sub(&u(n - 1).try_mul(&self.i[0])?)?;
        self.o[0].try_mul(&first)?.try_add(&self.o[1].try_mul(&second)?)
    }

    fn internal(&self, j: usize, jp: usize) -> &R {
        self.table.u(j as i64 - jp as i64 - 1)
    }
}

/// Per-order contributions `[free, 1 insertion, 2 insertions, …]`.
fn series_terms_by_order<R: Ring>(values: &[R], ends: &Ends<R>, max_order: usize) -> Result<Vec<R>> {
    let nu = values.len();
    let mut out = vec![ends.free()?];
    if max_order == 0 || nu == 0 {
        return Ok(out);
    }
    let mut f: Vec<R> = (1..=nu)
        .map(|j| if values[j - 1].is_zero() { Ok(R::zero()) } else { values[j - 1].try_mul(&ends.input(j)?) })
        .collect::<Result<_>>()?;
    for k in 1..=max_order {
        let mut term = R::zero();
        for j in 1..=nu {
            if !f[j - 1].is_zero() {
                term = term.try_add(&ends.output(j)?.try_mul(&f[j - 1])?)?;
            }
        }
        out.push(term);
        if k == max_order {
            break;
        }
        let mut next = vec![R::zero(); nu];
        for j in 1..=nu {
            if values[j - 1].is_zero() {
                continue;
            }
            let mut acc = R::zero();
            for jp in 1..j {
                if !f[jp - 1].is_zero() {
                    acc = acc.try_add(&ends.internal(j, jp).try_mul(&f[jp - 1])?)?;
                }
            }
            next[j - 1] = values[j - 1].try_mul(&acc)?;
        }
        f = next;
    }
    Ok(out)
}

fn poly_ends<C: Coeff>(nu: usize, bc: &BoundaryCondition) -> Result<Ends<Poly<C>>> {
    let bv = BoundaryVectors::<C>::for_bc(bc)?;
    let two_x = Poly::new(vec![C::from_int(2), C::from_int(-1)]);
    Ok(Ends {
        table: ChebTable::new(nu, &two_x)?,
        o: [Poly::constant(bv.v_out_adjoint.x), Poly::constant(bv.v_out_adjoint.y)],
        i: [Poly::constant(bv.v_in.x), Poly::constant(bv.v_in.y)],
        nu: nu as i64,
    })
}

fn scalar_ends<C: Coeff>(nu: usize, bc: &BoundaryCondition) -> Result<Ends<C>> {
    let bv = BoundaryVectors::<C>::for_bc(bc)?;
    Ok(Ends {
        table: ChebTable::new(nu, &C::from_int(2))?,
        o: [bv.v_out_adjoint.x, bv.v_out_adjoint.y],
        i: [bv.v_in.x, bv.v_in.y],
        nu: nu as i64,
    })
}

fn sum<R: Ring>(terms: &[R]) -> Result<R> {
    crate::scalar::try_sum(terms)
}

/// Characteristic polynomial from the insertion series, any interval
/// condition and either backend.
pub fn trace_series<C: Coeff>(values: &[C], bc: &BoundaryCondition, order: SeriesOrder) -> Result<Poly<C>> {
    let values_p: Vec<Poly<C>> = values.iter().map(|&v| Poly::constant(v)).collect();
    let ends = poly_ends::<C>(values.len(), bc)?;
    sum(&series_terms_by_order(&values_p, &ends, order.max(values.len()))?)
}

/// The series evaluated at `λ = 0`, i.e. `P(0)`.
pub fn det_series<C: Coeff>(values: &[C], bc: &BoundaryCondition, order: SeriesOrder) -> Result<C> {
    let ends = scalar_ends::<C>(values.len(), bc)?;
    sum(&series_terms_by_order(values, &ends, order.max(values.len()))?)
}

/// Contributions to `P(0)` grouped by number of insertions.
pub fn det_series_terms<C: Coeff>(values: &[C], bc: &BoundaryCondition, order: SeriesOrder) -> Result<Vec<C>> {
    let ends = scalar_ends::<C>(values.len(), bc)?;
    series_terms_by_order(values, &ends, order.max(values.len()))
}

/// Integral potential values for the exact backend.
pub fn exact_values(potential: &Potential) -> Result<Vec<i128>> {
    potential.values().iter().map(|&v| <i128 as Coeff>::from_real(v)).collect()
}

pub fn dirichlet_trace_series(potential: &Potential, order: SeriesOrder) -> Result<Poly<f64>> {
    trace_series(potential.values(), &BoundaryCondition::Dirichlet, order)
}

pub fn neumann_trace_series(potential: &Potential, order: SeriesOrder) -> Result<Poly<f64>> {
    trace_series(potential.values(), &BoundaryCondition::Neumann, order)
}

/// Dimensionless Dirichlet determinant from the series.
pub fn dirichlet_det_series(potential: &Potential, order: SeriesOrder) -> Result<f64> {
    det_series(potential.values(), &BoundaryCondition::Dirichlet, order)
}

/// Dimensionless Neumann determinant from the series.
pub fn neumann_det_series(potential: &Potential, order: SeriesOrder) -> Result<f64> {
    det_series(potential.values(), &BoundaryCondition::Neumann, order)
}

/// All strictly decreasing vertex tuples with `1..=max_order` entries.
pub fn series_tuples(nu: usize, max_order: usize) -> Vec<SeriesTerm> {
    fn extend(prefix: &mut Vec<usize>, upper: usize, remaining: usize, out: &mut Vec<SeriesTerm>) {
        if remaining == 0 {
            out.push(SeriesTerm { order: prefix.len(), vertices: prefix.clone() });
            return;
        }
        for j in (1..upper).rev() {
            prefix.push(j);
            extend(prefix, j, remaining - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for k in 1..=max_order.min(nu) {
        extend(&mut Vec::new(), nu + 1, k, &mut out);
    }
    out
}

/// The same series by explicit tuple enumeration; exponential in ν.
pub fn trace_series_enumerated<C: Coeff>(values: &[C], bc: &BoundaryCondition, order: SeriesOrder) -> Result<Poly<C>> {
    let nu = values.len();
    let ends = poly_ends::<C>(nu, bc)?;
    let mut total = ends.free()?;
    for term in series_tuples(nu, order.max(nu)) {
        let vs = &term.vertices;
        let mut w = ends.output(vs[0])?;
        for pair in vs.windows(2) {
            w = w.try_mul(&Poly::constant(values[pair[0] - 1]))?.try_mul(ends.internal(pair[0], pair[1]))?;
        }
        let last = *vs.last().expect("non-empty tuple");
        w = w.try_mul(&Poly::constant(values[last - 1]))?.try_mul(&ends.input(last)?)?;
        total = total.try_add(&w)?;
    }
    Ok(total)
}

/// Closed-form results for a single-site potential.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaPotential {
    /// `U_ν + v·U_{ν−k}·U_{k−1}` in λ.
    pub char_poly: Poly<f64>,
    /// `ν + 1 + v·k(ν − k + 1)`.
    pub det: f64,
    /// Coupling at which the determinant vanishes.
    pub zero_mode_v: f64,
}

fn check_site(nu: usize, site: usize) -> Result<()> {
    if site == 0 || site > nu {
        Err(Error::SiteOutOfRange { site, nu })
    } else {
        Ok(())
    }
}

/// Dirichlet lattice with a single nonzero value `v` at `site`.
pub fn delta_potential(nu: usize, site: usize, v: f64) -> Result<DeltaPotential> {
    check_site(nu, site)?;
    let table = ChebTable::new(nu, &Poly::new(vec![2.0, -1.0]))?;
    let pair = table.u((nu - site) as i64).try_mul(table.u(site as i64 - 1))?;
    let char_poly = table.u(nu as i64).try_add(&pair.scale(v)?)?;
    let weight = (site * (nu - site + 1)) as f64;
    Ok(DeltaPotential { char_poly, det: nu as f64 + 1.0 + v * weight, zero_mode_v: -(nu as f64 + 1.0) / weight })
}

/// `Σ1/λ` for the single-site Dirichlet lattice, from the λ-derivative of
/// `U_n(1 − λ/2)` at zero, `−n(n+1)(n+2)/6`.
pub fn delta_inverse_sum(nu: usize, site: usize, v: f64) -> Result<f64> {
    check_site(nu, site)?;
    let d = |n: usize| {
        let n = n as f64;
        n * (n + 1.0) * (n + 2.0) / 6.0
    };
    let (a, b) = (nu - site, site - 1);
    let weight = (site * (nu - site + 1)) as f64;
    let slope = d(nu) + v * (d(a) * (b as f64 + 1.0) + d(b) * (a as f64 + 1.0));
    let det = nu as f64 + 1.0 + v * weight;
    if det == 0.0 {
        return Err(Error::ZeroMode);
    }
    Ok(slope / det)
}

/// Locates the zero-mode coupling by a secant solve on the transfer
/// determinant, independently of the closed form.
pub fn zero_mode_coupling_by_root(nu: usize, site: usize) -> Result<f64> {
    check_site(nu, site)?;
    let f = |v: f64| -> Result<f64> {
        let pot = Potential::delta(nu, site, v)?;
        let bv = BoundaryVectors::<f64>::for_bc(&BoundaryCondition::Dirichlet)?;
        let path = transfer::propagate(&pot, 0.0, &bv.v_in);
        Ok(path.last().expect("non-empty").y)
    };
    let (mut a, mut b) = (0.0, -1.0);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    for _ in 0..100 {
        if fb == 0.0 || fa == fb {
            break;
        }
        let c = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = c;
        fb = f(b)?;
        if (b - a).abs() <= 1e-15 * b.abs() {
            break;
        }
    }
    Ok(b)
}

/// Whether `λ − v₁ − 2` divides the exact ν = 3 Dirichlet polynomial of
/// the potential `(v₁, v₂, v₃)`.
pub fn linear_factor_check(v: [f64; 3]) -> Result<bool> {
    let exact = exact_values(&Potential::new(v.to_vec()))?;
    let p = transfer::char_poly_exact(&Potential::new(v.to_vec()), &BoundaryCondition::Dirichlet)?;
    let (_, remainder) = p.div_linear(exact[0].try_add(&2)?)?;
    Ok(remainder == 0)
}

/// [`linear_factor_check`] for the symmetric potential `(v₁, v₂, v₁)`.
pub fn symmetric_factor_check(v1: f64, v2: f64) -> Result<bool> {
    linear_factor_check([v1, v2, v1])
}
