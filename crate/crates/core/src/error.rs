use thiserror::Error;

/// Errors raised by the lattice operator routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("potential has {found} sites but the lattice has {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid boundary condition: {0}")]
    InvalidBoundary(String),

    #[error("boundary condition {bc} needs {needed} topology")]
    TopologyMismatch { bc: String, needed: &'static str },

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("value {0} is not an integer; exact arithmetic needs integral input")]
    NotInteger(f64),

    #[error("zero mode present (P(0) = 0); use the primed variant")]
    ZeroMode,

    #[error("brute-force oracle unavailable for nu = {nu} (limit {limit})")]
    OracleUnavailable { nu: usize, limit: usize },

    #[error("found {found} real roots for a polynomial of degree {degree}")]
    RootCount { degree: usize, found: usize },

    #[error("site {site} outside 1..={nu}")]
    SiteOutOfRange { site: usize, nu: usize },

    #[error("negative eigenvalue {0} has no real square root")]
    NegativeEigenvalue(f64),

    #[error("least-squares fit is ill-conditioned (condition estimate {0:.3e}); widen the h window")]
    IllConditioned(f64),

    #[error("parameters sit on the zero-mode locus")]
    ZeroModeLocus,

    #[error("causal propagator requested with j = {j} < j' = {j_prime}")]
    Acausal { j: usize, j_prime: usize },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("potential file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
