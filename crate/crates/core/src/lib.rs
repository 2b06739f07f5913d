//! Functional determinants, spectra, inverse-power eigenvalue sums and
//! vacuum energies of one-dimensional lattice Schrödinger operators.
//!
//! The operator acts on `ν` lattice sites with spacing `h` as
//! `−y(j+1) + (2 + v_j) y(j) − y(j−1) = λ y(j)`, with dimensionless
//! `λ = h²λ̄` and `v_j = h²V̄_j`. Determinants are computed as a
//! product of 2×2 transfer matrices and checked
//! against an explicit matrix eigenvalue oracle and free-field closed forms.
//!
//! ```
//! use gylat::{transfer, BoundaryCondition, LatticeSpec, Potential};
//!
//! let spec = LatticeSpec::interval(3, 1.0)?;
//! let det = transfer::determinant(&Potential::zeros(3), &BoundaryCondition::Dirichlet, &spec, false)?;
//! assert!((det.value() - 4.0).abs() < 1e-12);
//! # Ok::<(), gylat::Error>(())
//! ```

pub mod chebyshev;
pub mod closedform;
pub mod domain;
pub mod error;
pub mod mat2;
pub mod perturbation;
pub mod poly;
pub mod scalar;
pub mod spectrum;
pub mod transfer;
pub mod vacuum;

pub use domain::{reduce_twist, to_physical, BoundaryCondition, LatticeSpec, LogDet, Potential, Spectrum, Topology};
pub use error::{Error, Result};
pub use mat2::{Mat2, Vec2};
pub use poly::{CharPoly, Poly};
