//! Lattice geometry, potentials, boundary conditions and result containers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// `ν` interior vertices between two boundary vertices, `L = h(ν+1)`.
    Interval,
    /// `ν` vertices on a cycle, `L = hν`.
    Circle,
}

/// Lattice geometry: vertex count, spacing and topology.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    nu: usize,
    h: f64,
    topology: Topology,
}

impl LatticeSpec {
    pub fn with_spacing(nu: usize, h: f64, topology: Topology) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidLattice(format!("spacing must be positive, got {h}")));
        }
        if topology == Topology::Circle && nu == 0 {
            return Err(Error::InvalidLattice("a circle needs at least one vertex".into()));
        }
        Ok(LatticeSpec { nu, h, topology })
    }

    pub fn with_length(nu: usize, length: f64, topology: Topology) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidLattice(format!("length must be positive, got {length}")));
        }
        let cells = match topology {
            Topology::Interval => nu + 1,
            Topology::Circle => nu,
        };
        if cells == 0 {
            return Err(Error::InvalidLattice("a circle needs at least one vertex".into()));
        }
        Self::with_spacing(nu, length / cells as f64, topology)
    }

    pub fn interval(nu: usize, h: f64) -> Result<Self> {
        Self::with_spacing(nu, h, Topology::Interval)
    }

    pub fn circle(nu: usize, h: f64) -> Result<Self> {
        Self::with_spacing(nu, h, Topology::Circle)
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Number of lattice cells spanning the length.
    pub fn cells(&self) -> usize {
        match self.topology {
            Topology::Interval => self.nu + 1,
            Topology::Circle => self.nu,
        }
    }

    pub fn length(&self) -> f64 {
        self.h * self.cells() as f64
    }
}

/// Converts a dimensionless eigenvalue to physical units, `λ̄ = λ/h²`.
pub fn to_physical(lambda: f64, spec: &LatticeSpec) -> f64 {
    lambda / (spec.h * spec.h)
}

/// Site values `v_j = h²·V̄_j`, stored for `j = 1..=ν`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    values: Vec<f64>,
}

impl Potential {
    pub fn new(values: Vec<f64>) -> Self {
        Potential { values }
    }

    pub fn zeros(nu: usize) -> Self {
        Potential { values: vec![0.0; nu] }
    }

    pub fn constant(nu: usize, v: f64) -> Self {
        Potential { values: vec![v; nu] }
    }

    /// A single nonzero value `v` at `site` (1-based).
    pub fn delta(nu: usize, site: usize, v: f64) -> Result<Self> {
        if site == 0 || site > nu {
            return Err(Error::SiteOutOfRange { site, nu });
        }
        let mut values = vec![0.0; nu];
        values[site - 1] = v;
        Ok(Potential { values })
    }

    pub fn from_physical(vbar: &[f64], h: f64) -> Self {
        Potential { values: vbar.iter().map(|v| v * h * h).collect() }
    }

    pub fn to_physical(&self, h: f64) -> Vec<f64> {
        self.values.iter().map(|v| v / (h * h)).collect()
    }

    /// Parses either a JSON array of dimensionless values or an object
    /// `{"physical": [...], "h": x}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Source {
            Plain(Vec<f64>),
            Physical { physical: Vec<f64>, h: f64 },
        }
        let source: Source = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let pot = match source {
            Source::Plain(values) => Potential::new(values),
            Source::Physical { physical, h } => {
                if !(h.is_finite() && h > 0.0) {
                    return Err(Error::Parse(format!("h must be positive, got {h}")));
                }
                Potential::from_physical(&physical, h)
            }
        };
        if let Some(bad) = pot.values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("non-finite potential value {bad}")));
        }
        Ok(pot)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nu(&self) -> usize {
        self.values.len()
    }

    /// `v_j` for `j = 1..=ν`.
    pub fn get(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    pub fn is_free(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn check_len(&self, nu: usize) -> Result<()> {
        if self.values.len() == nu {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: nu, found: self.values.len() })
        }
    }
}

/// Boundary conditions; Robin parameters are dimensionless.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    /// `Δy(0) = α y(0)`, `Δy(ν) = −β y(ν+1)`.
    Robin { alpha: f64, beta: f64 },
    Periodic,
    /// `y(j+ν) = e^{2πiτ} y(j)`.
    #[serde(rename = "twisted")]
    TwistedPeriodic { tau: f64 },
}

impl BoundaryCondition {
    pub fn topology(&self) -> Topology {
        match self {
            BoundaryCondition::Periodic | BoundaryCondition::TwistedPeriodic { .. } => Topology::Circle,
            _ => Topology::Interval,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
            BoundaryCondition::Robin { .. } => "robin",
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::TwistedPeriodic { .. } => "twisted",
        }
    }

    /// Twist reduced to `(0, 1]`; `None` on the interval.
    pub fn twist(&self) -> Option<f64> {
        match *self {
            BoundaryCondition::Periodic => Some(1.0),
            BoundaryCondition::TwistedPeriodic { tau } => Some(reduce_twist(tau)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BoundaryCondition::Robin { alpha, beta } if !(alpha.is_finite() && beta.is_finite()) => {
                Err(Error::InvalidBoundary("Robin parameters must be finite".into()))
            }
            BoundaryCondition::TwistedPeriodic { tau } if !tau.is_finite() => {
                Err(Error::InvalidBoundary("twist must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn require(&self, topology: Topology) -> Result<()> {
        self.validate()?;
        if self.topology() == topology {
            Ok(())
        } else {
            Err(Error::TopologyMismatch {
                bc: self.name().into(),
                needed: match topology {
                    Topology::Interval => "interval",
                    Topology::Circle => "circle",
                },
            })
        }
    }
}

/// Maps any real twist into `(0, 1]`.
pub fn reduce_twist(tau: f64) -> f64 {
    let r = tau - tau.floor();
    if r == 0.0 {
        1.0
    } else {
        r
    }
}

/// Ascending dimensionless eigenvalues with multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub lambdas: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut lambdas: Vec<f64>) -> Self {
        lambdas.sort_by(f64::total_cmp);
        Spectrum { lambdas }
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn physical(&self, spec: &LatticeSpec) -> Vec<f64> {
        self.lambdas.iter().map(|&l| to_physical(l, spec)).collect()
    }

    /// Returns the same spectrum shifted by a constant.
    pub fn shifted(&self, delta: f64) -> Self {
        Spectrum { lambdas: self.lambdas.iter().map(|l| l + delta).collect() }
    }
}

/// A determinant held as sign and natural-log magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogDet {
    pub sign: i8,
    /// `ln|Det|`; `-inf` when `sign == 0`.
    pub log_abs: f64,
    pub zero_modes_removed: usize,
}

impl LogDet {
    pub fn one() -> Self {
        LogDet { sign: 1, log_abs: 0.0, zero_modes_removed: 0 }
    }

    pub fn vanishing() -> Self {
        LogDet { sign: 0, log_abs: f64::NEG_INFINITY, zero_modes_removed: 0 }
    }

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::vanishing()
        } else {
            LogDet { sign: if x > 0.0 { 1 } else { -1 }, log_abs: x.abs().ln(), zero_modes_removed: 0 }
        }
    }

    pub fn from_parts(sign: i8, log_abs: f64) -> Self {
        if sign == 0 {
            Self::vanishing()
        } else {
            LogDet { sign, log_abs, zero_modes_removed: 0 }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The determinant as a float; may overflow to infinity.
    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_abs.exp()
        }
    }

    pub fn log10_abs(&self) -> f64 {
        self.log_abs / std::f64::consts::LN_10
    }

    pub fn mul(&self, other: &LogDet) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return LogDet { zero_modes_removed: self.zero_modes_removed, ..Self::vanishing() };
        }
        LogDet {
            sign: self.sign * other.sign,
            log_abs: self.log_abs + other.log_abs,
            zero_modes_removed: self.zero_modes_removed + other.zero_modes_removed,
        }
    }

    /// Multiplies by `h^power`.
    pub fn times_h_power(&self, h: f64, power: i64) -> Self {
        LogDet { log_abs: self.log_abs + power as f64 * h.ln(), ..*self }
    }

    pub fn squared(&self) -> Self {
        LogDet { sign: self.sign.abs(), log_abs: 2.0 * self.log_abs, ..*self }
    }

    pub fn with_zero_modes(self, count: usize) -> Self {
        LogDet { zero_modes_removed: count, ..self }
    }

    /// `|self/other − 1|`, or infinity when the signs differ.
    pub fn relative_diff(&self, other: &LogDet) -> f64 {
        match (self.sign, other.sign) {
            (0, 0) => 0.0,
            (a, b) if a != b => f64::INFINITY,
            _ => (self.log_abs - other.log_abs).exp_m1().abs(),
        }
    }
}
