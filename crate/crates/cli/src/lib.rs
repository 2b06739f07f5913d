//! Command-line front end for `gylat`.
//!
//! Every subcommand builds a JSON report (field order fixed, floats printed
//! with 17 significant digits) that is written either as JSON or as a
//! flattened two-column CSV. The field layout is documented in `SCHEMA.md`.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gylat::closedform::{continuum_problem, free_determinant, observed_order, MassParam};
use gylat::perturbation::{delta_inverse_sum, det_series, SeriesOrder};
use gylat::spectrum::{cosecant_sum, dirichlet_free_inverse_sum, inverse_power_sums, oracle_spectrum, robin_cosec_sum};
use gylat::transfer::{self, char_poly_exact, eigenfunctions, periodic_char_poly_exact, spectral_poly};
use gylat::vacuum::{extract_constant, free_energy_closed, geometric_sweep, universal_constant, vacuum_energy};
use gylat::{BoundaryCondition, LatticeSpec, LogDet, Potential, Topology};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

pub mod output;

/// Version of the report layout described in `SCHEMA.md`.
pub const SCHEMA_VERSION: u32 = 1;

/// Closed form and transfer results must agree to this relative tolerance.
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// Largest ν for which Newton sums from the characteristic polynomial are
/// reported next to the oracle sums.
const NEWTON_SUM_LIMIT: usize = 40;

#[derive(Parser, Debug)]
#[command(name = "gylat", version, about = "Lattice functional determinants, spectra and vacuum energies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Functional determinant by the transfer-matrix method.
    Det(CommonArgs),
    /// Eigenvalues from the matrix oracle.
    Spectrum(CommonArgs),
    /// Inverse-power eigenvalue sums.
    Sums(CommonArgs),
    /// Vacuum energy; with `--sweep h:lo:hi:n` the small-h expansion.
    Casimir(CommonArgs),
    /// Approach of the scaled determinant to its continuum value.
    Limit(CommonArgs),
    /// Chebyshev identity self-test.
    Chebyshev(FormatArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FormatArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub bc: BcKind,
    /// Robin parameter at the left end (physical for `limit`).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Robin parameter at the right end (physical for `limit`).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long)]
    pub nu: usize,
    /// Lattice spacing; defaults to 1 on the interval.
    #[arg(long)]
    pub h: Option<f64>,
    /// Domain length; defaults to 2π on the circle.
    #[arg(long = "L")]
    pub length: Option<f64>,
    /// Physical mass μ̄, added to the potential as `h²μ̄²`.
    #[arg(long, default_value_t = 0.0)]
    pub mass: f64,
    /// JSON file, or inline JSON, holding the potential.
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long)]
    pub delta_site: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_v: Option<f64>,
    /// Remove zero modes from the determinant.
    #[arg(long)]
    pub prime: bool,
    /// Series order for `det`, highest power for `sums`, extra positive
    /// powers for the `casimir` fit.
    #[arg(long)]
    pub order: Option<usize>,
    /// `param:lo:hi:n`, a geometric range.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Exact integer characteristic polynomial.
    #[arg(long)]
    pub exact: bool,
    /// Include the eigenfunction table in `spectrum`.
    #[arg(long)]
    pub eigenfunctions: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcKind {
    Dirichlet,
    Neumann,
    Robin,
    Periodic,
    Twisted,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or a library error; exit code 2.
    Config(String),
    /// The report was produced but an internal cross-check failed; exit code 3.
    Consistency { report: Value, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Consistency { .. } => 3,
        }
    }
}

impl From<gylat::Error> for CliError {
    fn from(e: gylat::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn config<T>(message: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(message.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Nu,
    H,
    L,
    Mass,
    Alpha,
    Beta,
    Tau,
    DeltaV,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Sweep {
    pub fn parse(text: &str) -> CliResult<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 4 {
            return config(format!("sweep must be param:lo:hi:n, got {text:?}"));
        }
        let param = match parts[0] {
            "nu" => SweepParam::Nu,
            "h" => SweepParam::H,
            "L" => SweepParam::L,
            "mass" => SweepParam::Mass,
            "alpha" => SweepParam::Alpha,
            "beta" => SweepParam::Beta,
            "tau" => SweepParam::Tau,
            "delta-v" => SweepParam::DeltaV,
            other => return config(format!("unknown sweep parameter {other:?}")),
        };
        let num = |s: &str| s.parse::<f64>().map_err(|_| CliError::Config(format!("bad sweep bound {s:?}")));
        let (lo, hi) = (num(parts[1])?, num(parts[2])?);
        let n: usize = parts[3].parse().map_err(|_| CliError::Config(format!("bad sweep count {:?}", parts[3])))?;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) || n == 0 {
            return config("geometric sweep needs 0 < lo ≤ hi and n ≥ 1");
        }
        Ok(Sweep { param, lo, hi, n })
    }

    pub fn values(&self) -> Vec<f64> {
        let raw = geometric_sweep(self.lo, self.hi, self.n);
        match self.param {
            SweepParam::Nu => raw.into_iter().map(f64::round).collect(),
            _ => raw,
        }
    }

    fn name(&self) -> &'static str {
        match self.param {
            SweepParam::Nu => "nu",
            SweepParam::H => "h",
            SweepParam::L => "L",
            SweepParam::Mass => "mass",
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
            SweepParam::Tau => "tau",
            SweepParam::DeltaV => "delta-v",
        }
    }
}

/// A validated configuration for one evaluation point.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub kind: BcKind,
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    pub nu: usize,
    pub h: Option<f64>,
    pub length: Option<f64>,
    pub mass: f64,
    pub potential: Option<Potential>,
    pub delta: Option<(usize, f64)>,
    pub prime: bool,
    pub order: Option<usize>,
    pub exact: bool,
    pub eigenfunctions: bool,
    pub sweep: Option<Sweep>,
}

fn load_potential(source: &str) -> CliResult<Potential> {
    let trimmed = source.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        source.to_string()
    } else {
        std::fs::read_to_string(PathBuf::from(source))
            .map_err(|e| CliError::Config(format!("cannot read potential file {source:?}: {e}")))?
    };
    Ok(Potential::from_json(&text)?)
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> CliResult<Self> {
        if args.h.is_some() && args.length.is_some() {
            return config("supply at most one of --h and --L");
        }
        let delta = match (args.delta_site, args.delta_v) {
            (Some(site), Some(v)) => Some((site, v)),
            (None, None) => None,
            _ => return config("--delta-site and --delta-v go together"),
        };
        if delta.is_some() && args.potential.is_some() {
            return config("--potential and --delta-site are mutually exclusive");
        }
        if !(args.mass.is_finite() && args.mass >= 0.0) {
            return config("--mass must be finite and non-negative");
        }
        let potential = args.potential.as_deref().map(load_potential).transpose()?;
        let sweep = args.sweep.as_deref().map(Sweep::parse).transpose()?;
        let cfg = RunConfig {
            kind: args.bc,
            alpha: args.alpha,
            beta: args.beta,
            tau: args.tau,
            nu: args.nu,
            h: args.h,
            length: args.length,
            mass: args.mass,
            potential,
            delta,
            prime: args.prime,
            order: args.order,
            exact: args.exact,
            eigenfunctions: args.eigenfunctions,
            sweep,
        };
        cfg.bc().validate()?;
        Ok(cfg)
    }

    pub fn bc(&self) -> BoundaryCondition {
        match self.kind {
            BcKind::Dirichlet => BoundaryCondition::Dirichlet,
            BcKind::Neumann => BoundaryCondition::Neumann,
            BcKind::Robin => BoundaryCondition::Robin { alpha: self.alpha, beta: self.beta },
            BcKind::Periodic => BoundaryCondition::Periodic,
            BcKind::Twisted => BoundaryCondition::TwistedPeriodic { tau: self.tau },
        }
    }

    pub fn spec(&self) -> CliResult<LatticeSpec> {
        let topology = self.bc().topology();
        let spec = match (self.h, self.length, topology) {
            (Some(h), None, _) => LatticeSpec::with_spacing(self.nu, h, topology)?,
            (None, Some(l), _) => LatticeSpec::with_length(self.nu, l, topology)?,
            (None, None, Topology::Interval) => LatticeSpec::with_spacing(self.nu, 1.0, topology)?,
            (None, None, Topology::Circle) => LatticeSpec::with_length(self.nu, 2.0 * PI, topology)?,
            (Some(_), Some(_), _) => return config("supply at most one of --h and --L"),
        };
        Ok(spec)
    }

    /// Whether the operator is the free (possibly massive) one.
    pub fn is_free(&self) -> bool {
        self.delta.is_none() && self.potential.as_ref().is_none_or(|p| p.is_free())
    }

    /// Dimensionless potential including the mass term.
    pub fn potential(&self, spec: &LatticeSpec) -> CliResult<Potential> {
        let base = match (&self.potential, self.delta) {
            (Some(p), _) => {
                p.check_len(self.nu)?;
                p.clone()
            }
            (None, Some((site, v))) => Potential::delta(self.nu, site, v)?,
            (None, None) => Potential::zeros(self.nu),
        };
        let m2 = (spec.h() * self.mass).powi(2);
        Ok(Potential::new(base.values().iter().map(|v| v + m2).collect()))
    }

    fn mass_param(&self, spec: &LatticeSpec) -> CliResult<MassParam> {
        Ok(MassParam::new(self.mass, spec.h())?)
    }

    fn with_param(&self, param: SweepParam, value: f64) -> CliResult<Self> {
        let mut cfg = self.clone();
        cfg.sweep = None;
        match param {
            SweepParam::Nu => cfg.nu = value as usize,
            SweepParam::H => {
                cfg.h = Some(value);
                cfg.length = None;
            }
            SweepParam::L => {
                cfg.length = Some(value);
                cfg.h = None;
            }
            SweepParam::Mass => cfg.mass = value,
            SweepParam::Alpha => cfg.alpha = value,
            SweepParam::Beta => cfg.beta = value,
            SweepParam::Tau => cfg.tau = value,
            SweepParam::DeltaV => match cfg.delta {
                Some((site, _)) => cfg.delta = Some((site, value)),
                None => return config("sweeping delta-v needs --delta-site"),
            },
        }
        cfg.bc().validate()?;
        Ok(cfg)
    }
}

fn header(command: &str, cfg: &RunConfig, spec: &LatticeSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("bc".into(), json!(cfg.bc()));
    m.insert("nu".into(), json!(spec.nu()));
    m.insert("h".into(), json!(spec.h()));
    m.insert("length".into(), json!(spec.length()));
    m.insert("mass".into(), json!(cfg.mass));
    m
}

fn logdet_json(d: &LogDet) -> Value {
    json!({
        "sign": d.sign,
        "log10_abs": if d.is_zero() { Value::Null } else { json!(d.log10_abs()) },
        "value": d.value(),
    })
}

/// Outcome of one point: the report and any consistency failure.
struct Point {
    report: Map<String, Value>,
    inconsistency: Option<String>,
}

fn det_point(cfg: &RunConfig) -> CliResult<Point> {
    let spec = cfg.spec()?;
    let bc = cfg.bc();
    let potential = cfg.potential(&spec)?;
    let (dimless, factors) = transfer::determinant_dimensionless(&potential, &bc, cfg.prime)?;
    let physical = dimless.times_h_power(spec.h(), -2 * factors as i64);
    let mut m = header("det", cfg, &spec);
    m.insert("prime".into(), json!(cfg.prime));
    m.insert("sign".into(), json!(physical.sign));
    m.insert("log10_abs".into(), if physical.is_zero() { Value::Null } else { json!(physical.log10_abs()) });
    m.insert("value".into(), json!(physical.value()));
    m.insert("dimensionless_det".into(), logdet_json(&dimless));
    m.insert("factors".into(), json!(factors));
    m.insert("zero_modes".into(), json!(dimless.zero_modes_removed));
    let mut inconsistency = None;
    if cfg.is_free() {
        let closed = free_determinant(&bc, &spec, &cfg.mass_param(&spec)?, cfg.prime);
        match closed {
            Ok(closed) => {
                let diff = closed.relative_diff(&physical);
                let agrees = diff <= CONSISTENCY_TOL;
                m.insert(
                    "closed_form".into(),
                    json!({ "det": logdet_json(&closed), "relative_diff": diff, "agrees": agrees }),
                );
                if !agrees {
                    inconsistency = Some(format!("closed form and transfer determinant differ by {diff:.3e}"));
                }
            }
            Err(gylat::Error::Unsupported(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(k) = cfg.order {
        if !matches!(bc, BoundaryCondition::Dirichlet | BoundaryCondition::Neumann) {
            return config("--order series is defined for dirichlet and neumann");
        }
        let series = det_series(potential.values(), &bc, SeriesOrder::Upto(k))?;
        m.insert("series".into(), json!({ "order": k, "dimensionless_det": series }));
    }
    if cfg.exact {
        let poly = match bc.twist() {
            Some(tau) => periodic_char_poly_exact(&potential, tau)?,
            None => char_poly_exact(&potential, &bc)?,
        };
        let coeffs: Vec<String> = poly.coeffs().iter().map(|c| c.to_string()).collect();
        m.insert("char_poly".into(), json!(coeffs));
    }
    if physical.is_zero() && !cfg.prime {
        m.insert("hint".into(), json!("the determinant vanishes (zero mode); rerun with --prime"));
    }
    Ok(Point { report: m, inconsistency })
}

fn spectrum_point(cfg: &RunConfig) -> CliResult<Point> {
    let spec = cfg.spec()?;
    let bc = cfg.bc();
    let potential = cfg.potential(&spec)?;
    let spectrum = oracle_spectrum(&potential, &bc)?;
    let mut m = header("spectrum", cfg, &spec);
    m.insert("count".into(), json!(spectrum.len()));
    m.insert("eigenvalues".into(), json!(spectrum.lambdas));
    m.insert("physical".into(), json!(spectrum.physical(&spec)));
    let mut inconsistency = None;
    if cfg.is_free() && !matches!(bc, BoundaryCondition::Robin { .. }) {
        let closed = gylat::closedform::free_eigenvalues(&bc, &spec, &cfg.mass_param(&spec)?)?;
        let diff = closed
            .lambdas
            .iter()
            .zip(&spectrum.lambdas)
            .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
            .fold(0.0, f64::max);
        m.insert("closed_form".into(), json!({ "max_diff": diff, "agrees": diff <= CONSISTENCY_TOL }));
        if diff > CONSISTENCY_TOL {
            inconsistency = Some(format!("closed-form eigenvalues differ by {diff:.3e}"));
        }
    }
    if cfg.eigenfunctions {
        if bc.topology() == Topology::Circle {
            return config("--eigenfunctions is available on the interval only");
        }
        m.insert("eigenfunctions".into(), json!(eigenfunctions(&potential, &bc, &spectrum)?));
    }
    Ok(Point { report: m, inconsistency })
}

/// Closed forms (dimensionless) for `Σλ^{−m}` where they exist.
fn closed_sums(cfg: &RunConfig, spec: &LatticeSpec, kmax: usize) -> CliResult<Vec<Option<f64>>> {
    let mut out = vec![None; kmax];
    if cfg.mass != 0.0 || cfg.potential.as_ref().is_some_and(|p| !p.is_free()) {
        return Ok(out);
    }
    let nu = spec.nu();
    match (cfg.bc(), cfg.delta) {
        (BoundaryCondition::Dirichlet, None) => {
            out[0] = Some(dirichlet_free_inverse_sum(nu));
            if kmax >= 2 && nu >= 1 {
                out[1] = Some(cosecant_sum(nu + 1, 2)? / 16.0);
            }
        }
        (BoundaryCondition::Dirichlet, Some((site, v))) => out[0] = Some(delta_inverse_sum(nu, site, v)?),
        (BoundaryCondition::Robin { alpha, beta }, None) => out[0] = Some(robin_cosec_sum(nu, alpha, beta)? / 4.0),
        _ => {}
    }
    Ok(out)
}

fn sums_point(cfg: &RunConfig) -> CliResult<Point> {
    let spec = cfg.spec()?;
    let bc = cfg.bc();
    let kmax = cfg.order.unwrap_or(4);
    if !(1..=4).contains(&kmax) {
        return config("--order for sums must lie in 1..=4");
    }
    let potential = cfg.potential(&spec)?;
    let spectrum = oracle_spectrum(&potential, &bc)?;
    let scale = spectrum.lambdas.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    if spectrum.lambdas.iter().any(|l| l.abs() < transfer::ZERO_MODE_TOL * scale) {
        return config("the spectrum contains a zero mode; inverse sums diverge");
    }
    let direct: Vec<f64> =
        (1..=kmax).map(|m| spectrum.lambdas.iter().map(|l| l.powi(-(m as i32))).sum::<f64>()).collect();
    let h2 = spec.h() * spec.h();
    let mut m = header("sums", cfg, &spec);
    let mut rows = Vec::new();
    let mut inconsistency = None;
    let newton = if spec.nu() <= NEWTON_SUM_LIMIT {
        Some(inverse_power_sums(&spectral_poly(&potential, &bc)?, kmax)?)
    } else {
        None
    };
    let closed = closed_sums(cfg, &spec, kmax)?;
    for k in 0..kmax {
        let mut row = Map::new();
        row.insert("m".into(), json!(k + 1));
        row.insert("sum".into(), json!(direct[k]));
        row.insert("physical".into(), json!(direct[k] * h2.powi(k as i32 + 1)));
        if let Some(n) = &newton {
            row.insert("newton".into(), json!(n[k]));
            let diff = (n[k] - direct[k]).abs() / direct[k].abs();
            if diff > CONSISTENCY_TOL {
                inconsistency.get_or_insert(format!("Newton sum m={} differs by {diff:.3e}", k + 1));
            }
        }
        if let Some(c) = closed[k] {
            let diff = (c - direct[k]).abs() / direct[k].abs();
            row.insert("closed_form".into(), json!(c));
            row.insert("closed_form_agrees".into(), json!(diff <= CONSISTENCY_TOL));
            if diff > CONSISTENCY_TOL {
                inconsistency.get_or_insert(format!("closed-form sum m={} differs by {diff:.3e}", k + 1));
            }
        }
        rows.push(Value::Object(row));
    }
    m.insert("sums".into(), Value::Array(rows));
    Ok(Point { report: m, inconsistency })
}

fn casimir_point(cfg: &RunConfig) -> CliResult<Point> {
    let spec = cfg.spec()?;
    let bc = cfg.bc();
    let potential = cfg.potential(&spec)?;
    let energy = vacuum_energy(&potential, &bc, &spec)?;
    let mut m = header("casimir", cfg, &spec);
    m.insert("energy".into(), json!(energy));
    let mut inconsistency = None;
    if potential.is_free() && !matches!(bc, BoundaryCondition::Robin { .. }) {
        let closed = free_energy_closed(&bc, &spec)?;
        let diff = (closed - energy).abs() / closed.abs().max(energy.abs()).max(1.0 / spec.h());
        m.insert("closed_form".into(), json!({ "energy": closed, "relative_diff": diff, "agrees": diff <= CONSISTENCY_TOL }));
        if diff > CONSISTENCY_TOL {
            inconsistency = Some(format!("closed-form energy differs by {diff:.3e}"));
        }
    }
    Ok(Point { report: m, inconsistency })
}

fn casimir_expansion(cfg: &RunConfig, sweep: &Sweep) -> CliResult<Value> {
    if sweep.param != SweepParam::H {
        return point_sweep(cfg, sweep, casimir_point);
    }
    if !cfg.is_free() || cfg.mass != 0.0 {
        return config("the h-sweep expansion is defined for the free massless field");
    }
    let bc = cfg.bc();
    let length = match (cfg.length, bc.topology()) {
        (Some(l), _) => l,
        (None, Topology::Interval) => 1.0,
        (None, Topology::Circle) => 2.0 * PI,
    };
    let fit = extract_constant(&bc, length, &sweep.values(), cfg.order.unwrap_or(2))?;
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!("casimir"));
    m.insert("bc".into(), json!(bc));
    m.insert("length".into(), json!(length));
    m.insert("sweep".into(), json!({ "param": "h", "lo": sweep.lo, "hi": sweep.hi, "n": sweep.n }));
    m.insert(
        "expansion".into(),
        json!({
            "powers": fit.powers,
            "coefficients": fit.coefficients,
            "constant": fit.constant(),
            "residual_norm": fit.residual_norm,
            "condition": fit.condition,
            "h_values": fit.h_values,
        }),
    );
    if let Ok(target) = universal_constant(&bc, length) {
        m.insert("universal_constant".into(), json!(target));
        m.insert("constant_error".into(), json!((fit.constant() - target).abs()));
    }
    Ok(Value::Object(m))
}

fn limit_point(cfg: &RunConfig) -> CliResult<Point> {
    let bc = cfg.bc();
    let length = match (cfg.length, cfg.h) {
        (Some(l), _) => l,
        (None, _) => cfg.spec()?.length(),
    };
    let problem = continuum_problem(&bc, cfg.mass, cfg.alpha, cfg.beta, length);
    let target = problem.target()?;
    if cfg.nu < 4 {
        return config("limit needs ν ≥ 4");
    }
    let fine = problem.point(cfg.nu)?;
    let coarse = problem.point(cfg.nu / 2)?;
    let spec = LatticeSpec::with_length(cfg.nu, length, bc.topology())?;
    let mut m = header("limit", cfg, &spec);
    m.insert("bc".into(), json!(problem.bc));
    m.insert("h_power".into(), json!(2 * cfg.nu as i64 + target.h_power_offset));
    m.insert("primed".into(), json!(target.primed));
    m.insert("scaled".into(), json!(fine.scaled));
    m.insert("target".into(), json!(target.value));
    m.insert("rel_error".into(), json!(fine.rel_error));
    m.insert("coarse".into(), json!(coarse));
    m.insert("observed_order".into(), json!(observed_order(&coarse, &fine)));
    Ok(Point { report: m, inconsistency: None })
}

/// Thread count for sweeps from `GYLAT_THREADS`; 0 or absent lets rayon decide.
pub fn sweep_threads() -> usize {
    std::env::var("GYLAT_THREADS").ok().and_then(|s| s.parse().ok()).unwrap_or(0)
}

fn point_sweep(cfg: &RunConfig, sweep: &Sweep, f: fn(&RunConfig) -> CliResult<Point>) -> CliResult<Value> {
    let configs: Vec<RunConfig> =
        sweep.values().into_iter().map(|v| cfg.with_param(sweep.param, v)).collect::<CliResult<_>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep_threads())
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let points: Vec<CliResult<Point>> = pool.install(|| configs.par_iter().map(f).collect());
    let mut reports = Vec::with_capacity(points.len());
    let mut inconsistency = None;
    for p in points {
        let p = p?;
        if inconsistency.is_none() {
            inconsistency = p.inconsistency;
        }
        reports.push(Value::Object(p.report));
    }
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "sweep": { "param": sweep.name(), "lo": sweep.lo, "hi": sweep.hi, "n": sweep.n },
        "points": reports,
    });
    match inconsistency {
        Some(message) => Err(CliError::Consistency { report, message }),
        None => Ok(report),
    }
}

fn single(cfg: &RunConfig, f: fn(&RunConfig) -> CliResult<Point>) -> CliResult<Value> {
    if let Some(sweep) = &cfg.sweep {
        return point_sweep(cfg, sweep, f);
    }
    let p = f(cfg)?;
    let report = Value::Object(p.report);
    match p.inconsistency {
        Some(message) => Err(CliError::Consistency { report, message }),
        None => Ok(report),
    }
}

fn chebyshev_report() -> CliResult<Value> {
    let reports = gylat::chebyshev::identity_self_test()?;
    let passed = reports.iter().all(|r| r.passed());
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "chebyshev",
        "identities": reports,
        "passed": passed,
    });
    if passed {
        Ok(report)
    } else {
        Err(CliError::Consistency { report, message: "a Chebyshev identity failed".into() })
    }
}

/// Runs a parsed command and returns the report with its output format.
pub fn run(command: &Command) -> (Format, CliResult<Value>) {
    match command {
        Command::Chebyshev(f) => (f.format, chebyshev_report()),
        Command::Det(a) | Command::Spectrum(a) | Command::Sums(a) | Command::Casimir(a) | Command::Limit(a) => {
            let result = RunConfig::from_args(a).and_then(|cfg| match command {
                Command::Det(_) => single(&cfg, det_point),
                Command::Spectrum(_) => single(&cfg, spectrum_point),
                Command::Sums(_) => single(&cfg, sums_point),
                Command::Casimir(_) => match &cfg.sweep {
                    Some(sweep) => casimir_expansion(&cfg, sweep),
                    None => single(&cfg, casimir_point),
                },
                Command::Limit(_) => single(&cfg, limit_point),
                Command::Chebyshev(_) => unreachable!("handled above"),
            });
            (a.format, result)
        }
    }
}
