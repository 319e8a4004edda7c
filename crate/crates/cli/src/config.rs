//! JSON run configurations and the flags that override them.

use std::path::Path;

use clap::Args;
use koranyi_core::capacity::default_scale_grid;
use koranyi_core::evolve::{DtPolicy, RadialGrid};
use koranyi_core::spectrum::{hardy_threshold, ProblemParams};
use koranyi_core::witness::VerifyGrid;
use koranyi_core::GroupContext;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::UsageError;

/// Reads a config file, or the defaults when no path is given.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, UsageError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))
}

fn one() -> u32 {
    1
}

/// Group and problem parameters as written in a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub lambda_critical: bool,
    pub a: f64,
    pub p: f64,
    #[serde(default = "one")]
    pub k: u32,
}

impl Default for ParamSpec {
    fn default() -> Self {
        Self { n: None, q: Some(4), lambda: Some(0.0), lambda_critical: false, a: 0.0, p: 2.0, k: 1 }
    }
}

impl ParamSpec {
    pub fn context(&self) -> Result<GroupContext, UsageError> {
        let ctx = match (self.n, self.q) {
            (Some(n), None) => GroupContext::new(n),
            (None, Some(q)) => GroupContext::from_q(q),
            (None, None) => GroupContext::from_q(4),
            (Some(n), Some(q)) => {
                let ctx = GroupContext::new(n).map_err(|e| UsageError(e.to_string()))?;
                if ctx.q() != q {
                    return Err(UsageError(format!("N = {n} and Q = {q} disagree")));
                }
                Ok(ctx)
            }
        };
        ctx.map_err(|e| UsageError(e.to_string()))
    }

    pub fn resolve(&self) -> Result<ProblemParams, UsageError> {
        let ctx = self.context()?;
        let lambda = match (self.lambda_critical, self.lambda) {
            (true, Some(l)) if l != hardy_threshold(ctx) => {
                return Err(UsageError("give either a lambda value or lambda_critical, not both".into()))
            }
            (true, _) => hardy_threshold(ctx),
            (false, Some(l)) => l,
            (false, None) => 0.0,
        };
        ProblemParams::new(ctx, lambda, self.a, self.p, self.k).map_err(|e| UsageError(e.to_string()))
    }
}

/// Parameter flags shared by the problem-level commands.
#[derive(Args, Clone, Debug, Default)]
pub struct ParamFlags {
    /// Heisenberg dimension N
    #[arg(long = "N", value_name = "N")]
    pub n: Option<usize>,
    /// Homogeneous dimension Q = 2N + 2
    #[arg(long = "Q", value_name = "Q")]
    pub q: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Set lambda to the Hardy threshold -((Q-2)/2)^2
    #[arg(long)]
    pub lambda_critical: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    /// Time order of the problem
    #[arg(long)]
    pub k: Option<u32>,
}

impl ParamFlags {
    pub fn apply(&self, spec: &mut ParamSpec) {
        if self.n.is_some() || self.q.is_some() {
            spec.n = self.n;
            spec.q = self.q;
        }
        if self.lambda_critical {
            spec.lambda_critical = true;
            spec.lambda = None;
        } else if let Some(l) = self.lambda {
            spec.lambda = Some(l);
            spec.lambda_critical = false;
        }
        if let Some(a) = self.a {
            spec.a = a;
        }
        if let Some(p) = self.p {
            spec.p = p;
        }
        if let Some(k) = self.k {
            spec.k = k;
        }
    }
}

/// Tolerances of the identity suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentityTolerances {
    pub group: f64,
    pub gradient: f64,
    pub radial: f64,
    pub divergence_form: f64,
    /// Allowed deviation in combined standard errors.
    pub monte_carlo_sigmas: f64,
    pub ball_volume: f64,
    pub harmonic: f64,
    pub flux: f64,
}

impl Default for IdentityTolerances {
    fn default() -> Self {
        Self {
            group: 1e-12,
            gradient: 1e-10,
            radial: 1e-10,
            divergence_form: 1e-5,
            monte_carlo_sigmas: 3.0,
            ball_volume: 1e-10,
            harmonic: 1e-8,
            flux: 1e-6,
        }
    }
}

impl IdentityTolerances {
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            group: self.group * factor,
            gradient: self.gradient * factor,
            radial: self.radial * factor,
            divergence_form: self.divergence_form * factor,
            monte_carlo_sigmas: self.monte_carlo_sigmas * factor,
            ball_volume: self.ball_volume * factor,
            harmonic: self.harmonic * factor,
            flux: self.flux * factor,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub n: usize,
    pub seed: u64,
    pub triples: usize,
    pub points: usize,
    pub mc_samples: usize,
    pub harmonic_points: usize,
    pub flux_nodes: usize,
    /// Values of lambda for the barrier checks, at `Q` of `n`; the critical
    /// value is always added.
    pub lambdas: Vec<f64>,
    pub tolerances: IdentityTolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n: 1,
            seed: 1,
            triples: 10_000,
            points: 10_000,
            mc_samples: 1_000_000,
            harmonic_points: 2000,
            flux_nodes: 1000,
            lambdas: vec![-0.5, 0.0, 3.0],
            tolerances: IdentityTolerances::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyConfig {
    pub params: ParamSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WitnessConfig {
    pub params: ParamSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub grid: VerifyGrid,
    pub tol: f64,
    /// Multiple of the admissible bound at which `ε` must break the inequality.
    pub sharpness_factor: f64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self {
            params: ParamSpec::default(),
            tau: None,
            eps: None,
            beta: None,
            grid: VerifyGrid::default(),
            tol: 1e-10,
            sharpness_factor: 4.0,
        }
    }
}

/// The scaling laws of the capacity functionals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Time factor of J1 against T
    TimeFactor,
    /// Integral of the time cutoff against T
    TimeMass,
    /// eta(R) against R
    Eta,
    /// J2 over T for the gamma family against R
    GammaSpace,
    /// J2 over T for the mu family against ln R at the critical line
    MuLog,
    /// Transition-annulus bound for the gamma family against R
    GammaBound,
    /// Transition-annulus bound for the mu family against ln R
    MuBound,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::TimeFactor => "time-factor",
            Quantity::TimeMass => "time-mass",
            Quantity::Eta => "eta",
            Quantity::GammaSpace => "gamma-space",
            Quantity::MuLog => "mu-log",
            Quantity::GammaBound => "gamma-bound",
            Quantity::MuBound => "mu-bound",
        }
    }

    /// Whether the fit runs against `ln R` rather than `R`.
    pub fn logarithmic(self) -> bool {
        matches!(self, Quantity::MuLog | Quantity::MuBound)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingConfig {
    pub quantity: Quantity,
    pub params: ParamSpec,
    /// `T` for the space laws.
    pub big_t: f64,
    /// Scales `T` or `R`; empty means the default grid of the quantity.
    pub scales: Vec<f64>,
    /// Allowed slope deviation; `None` uses 0.05 for time laws and 0.1 otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_tol: Option<f64>,
    pub min_r_squared: f64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            quantity: Quantity::TimeFactor,
            params: ParamSpec::default(),
            big_t: 10.0,
            scales: Vec::new(),
            slope_tol: None,
            min_r_squared: 0.95,
        }
    }
}

impl ScalingConfig {
    pub fn scale_grid(&self) -> Vec<f64> {
        if !self.scales.is_empty() {
            return self.scales.clone();
        }
        if self.quantity.logarithmic() {
            [30.0, 45.0, 64.0, 90.0, 128.0, 181.0, 256.0, 300.0].iter().map(|e| 10f64.powf(*e)).collect()
        } else {
            default_scale_grid()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegrateConfig {
    pub n: usize,
    /// Exponent `s` in the integrand `ψ ρ^s`.
    pub s: f64,
    pub r_inner: f64,
    pub r_outer: f64,
    pub mc_samples: usize,
    pub seed: u64,
    pub sigmas: f64,
}

impl Default for IntegrateConfig {
    fn default() -> Self {
        Self { n: 1, s: 0.0, r_inner: 0.0, r_outer: 1.0, mc_samples: 200_000, seed: 1, sigmas: 3.0 }
    }
}

/// Initial layer 0 of a simulation; higher layers start at zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// `0.1 (1−ρ)² ρ²`.
    Canonical,
    Zero,
    /// `coef · ρ^exponent`.
    Power { coef: f64, exponent: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub params: ParamSpec,
    pub grid: RadialGrid,
    pub eps: f64,
    pub t_end: f64,
    pub dt: DtPolicy,
    pub nonlinear: bool,
    pub initial: InitialData,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            params: ParamSpec::default(),
            grid: RadialGrid::default(),
            eps: 0.1,
            t_end: 1.0,
            dt: DtPolicy::default(),
            nonlinear: true,
            initial: InitialData::Canonical,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepCliConfig {
    pub q: usize,
    pub k: u32,
    pub lambdas: Vec<f64>,
    pub a_list: Vec<f64>,
    pub p_list: Vec<f64>,
    pub grid: RadialGrid,
    pub t_end: f64,
    pub eps: f64,
    pub dt: DtPolicy,
}

impl Default for SweepCliConfig {
    fn default() -> Self {
        Self {
            q: 4,
            k: 1,
            lambdas: vec![-0.75, 0.0, 3.0],
            a_list: vec![-2.0, 0.0, 2.0],
            p_list: vec![2.0],
            grid: RadialGrid { n_cells: 64, ..RadialGrid::default() },
            t_end: 2.0,
            eps: 0.1,
            dt: DtPolicy::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    /// Report files to merge, relative to the config file; empty means every
    /// `*.json` report in the output directory.
    pub inputs: Vec<String>,
}
