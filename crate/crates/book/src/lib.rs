//! Compiles the guide listings as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/lattice.md")]
pub mod lattice {}
#[doc = include_str!("../../../book/src/transfer.md")]
pub mod transfer {}
#[doc = include_str!("../../../book/src/chebyshev.md")]
pub mod chebyshev {}
#[doc = include_str!("../../../book/src/spectra.md")]
pub mod spectra {}
#[doc = include_str!("../../../book/src/perturbation.md")]
pub mod perturbation {}
#[doc = include_str!("../../../book/src/continuum.md")]
pub mod continuum {}
#[doc = include_str!("../../../book/src/vacuum.md")]
pub mod vacuum {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
