//! Radial method-of-lines simulator for
//! `∂_t^k u = u″ + (Q−1)u′/ρ − (λ/ρ²)u + ρ^a |u|^p` on `(ρ_min, 1)`,
//! with homogeneous Neumann data at `ρ_min` and `u = ε` at `ρ = 1`.
//!
//! The radial operator is discretized in flux form
//! `ρ^{1−Q}(ρ^{Q−1}u′)′` on node-centered control volumes, which is second
//! order and keeps nonnegative off-diagonal couplings.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hgroup::GroupContext;
use crate::hquad::gauss_legendre;
use crate::spectrum::{classify, ProblemParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Uniform,
    Log,
}

/// Nodes `ρ_min = ρ_0 < … < ρ_n = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub rho_min: f64,
    pub n_cells: usize,
    pub spacing: Spacing,
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self { rho_min: 1e-3, n_cells: 128, spacing: Spacing::Uniform }
    }
}

impl RadialGrid {
    pub const MIN_CELLS: usize = 32;

    pub fn new(rho_min: f64, n_cells: usize, spacing: Spacing) -> Result<Self> {
        let g = Self { rho_min, n_cells, spacing };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho_min > 0.0 && self.rho_min < 1.0) {
            return Err(Error::InvalidParameter(format!("rho_min must lie in (0, 1), got {}", self.rho_min)));
        }
        if self.n_cells < Self::MIN_CELLS {
            return Err(Error::InvalidParameter(format!(
                "n_cells must be at least {}, got {}",
                Self::MIN_CELLS,
                self.n_cells
            )));
        }
        Ok(())
    }

    pub fn nodes(&self) -> Vec<f64> {
        let n = self.n_cells;
        let mut v: Vec<f64> = (0..=n)
            .map(|i| {
                let s = i as f64 / n as f64;
                match self.spacing {
                    Spacing::Uniform => self.rho_min + (1.0 - self.rho_min) * s,
                    Spacing::Log => self.rho_min.powf(1.0 - s),
                }
            })
            .collect();
        v[n] = 1.0;
        v
    }

    pub fn min_spacing(&self) -> f64 {
        self.nodes().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for RadialGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.spacing {
            Spacing::Uniform => "uniform",
            Spacing::Log => "log",
        };
        write!(f, "{s}:{}:{:e}", self.n_cells, self.rho_min)
    }
}

/// Explicit RK4 step selection and stopping rules.
///
/// The step is `min(c Δρ^k, Gershgorin cap, reaction cap)`, where the
/// Gershgorin cap is `1/G` for `k = 1` and `1/√G` for `k = 2` with `G` the
/// largest absolute row sum of the linear operator, and the reaction cap is
/// `reaction_c / r` (or `/√r`) with `r = max p ρ^a |u|^{p−1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DtPolicy {
    pub c: f64,
    pub reaction_c: f64,
    pub dt_min: f64,
    pub blowup_threshold: f64,
    pub max_steps: u64,
    pub history_points: usize,
}

impl Default for DtPolicy {
    fn default() -> Self {
        Self { c: 0.2, reaction_c: 0.1, dt_min: 1e-12, blowup_threshold: 1e8, max_steps: 100_000_000, history_points: 200 }
    }
}

impl fmt::Display for DtPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rk4 c={} reaction_c={} dt_min={:e}", self.c, self.reaction_c, self.dt_min)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimStatus {
    Running,
    BlownUp,
    Completed,
}

impl fmt::Display for SimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimStatus::Running => "running",
            SimStatus::BlownUp => "blown_up",
            SimStatus::Completed => "completed",
        })
    }
}

/// `k` layers `(u, ∂_t u, …)` on the grid nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub t: f64,
    pub layers: Vec<Vec<f64>>,
    pub status: SimStatus,
}

impl SimState {
    pub fn new(layers: Vec<Vec<f64>>, grid: &RadialGrid) -> Result<Self> {
        let m = grid.n_cells + 1;
        if layers.is_empty() || layers.iter().any(|l| l.len() != m) {
            return Err(Error::InvalidParameter(format!("every layer must have {m} nodes")));
        }
        if layers.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("initial data must be finite".into()));
        }
        Ok(Self { t: 0.0, layers, status: SimStatus::Running })
    }

    pub fn k(&self) -> usize {
        self.layers.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub status: SimStatus,
    pub t_final: f64,
    pub sup_norm_history: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blow_up_time: Option<f64>,
    pub steps: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    pub final_profile: Vec<f64>,
}

impl SimResult {
    pub fn max_sup(&self) -> f64 {
        self.sup_norm_history.iter().map(|h| h.1).fold(0.0, f64::max)
    }
}

/// Everything that defines one run apart from the initial data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: ProblemParams,
    #[serde(default)]
    pub grid: RadialGrid,
    pub eps: f64,
    pub t_end: f64,
    #[serde(default)]
    pub dt: DtPolicy,
    #[serde(default = "yes")]
    pub nonlinear: bool,
}

fn yes() -> bool {
    true
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.grid.validate()?;
        if !(1..=2).contains(&self.params.k) {
            return Err(Error::InvalidParameter(format!("k must be 1 or 2, got {}", self.params.k)));
        }
        if !self.eps.is_finite() {
            return Err(Error::InvalidParameter("boundary value must be finite".into()));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be positive, got {}", self.t_end)));
        }
        let d = self.dt;
        if !(d.c > 0.0 && d.reaction_c > 0.0 && d.dt_min > 0.0 && d.blowup_threshold > 0.0) {
            return Err(Error::InvalidParameter("dt policy constants must be positive".into()));
        }
        Ok(())
    }
}

/// `∫_l^r ρ^{e−1} dρ`.
fn moment(e: f64, l: f64, r: f64) -> f64 {
    if e.abs() < 1e-12 {
        (r / l).ln()
    } else {
        (r.powf(e) - l.powf(e)) / e
    }
}

/// Coefficients are control-volume averages against `ρ^{Q−1} dρ`, so the
/// potential and the weight `ρ^a` stay bounded on the inner half cell.
struct Operator {
    rho: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    pot: Vec<f64>,
    rho_a: Vec<f64>,
    inner_flux: f64,
    p: f64,
    gershgorin: f64,
    /// Quadrature nodes and weights averaging a source over each volume.
    cells: Vec<Vec<(f64, f64)>>,
}

const SOURCE_NODES: usize = 6;

impl Operator {
    fn new(params: &ProblemParams, grid: &RadialGrid) -> Self {
        let q = params.q();
        let rho = grid.nodes();
        let n = rho.len() - 1;
        let mut lower = vec![0.0; n + 1];
        let mut upper = vec![0.0; n + 1];
        let mut pot = vec![0.0; n + 1];
        let mut rho_a = vec![0.0; n + 1];
        let mut inner_flux = 0.0;
        let (gx, gw) = gauss_legendre(SOURCE_NODES);
        let mut cells = Vec::with_capacity(n);
        for i in 0..n {
            let left = if i == 0 { rho[0] } else { 0.5 * (rho[i - 1] + rho[i]) };
            let right = 0.5 * (rho[i] + rho[i + 1]);
            let vol = (right.powf(q) - left.powf(q)) / q;
            upper[i] = right.powf(q - 1.0) / ((rho[i + 1] - rho[i]) * vol);
            if i == 0 {
                inner_flux = -rho[0].powf(q - 1.0) / vol;
            } else {
                lower[i] = left.powf(q - 1.0) / ((rho[i] - rho[i - 1]) * vol);
            }
            pot[i] = params.lambda * moment(q - 2.0, left, right) / vol;
            rho_a[i] = moment(q + params.a, left, right) / vol;
            cells.push(
                gx.iter()
                    .zip(&gw)
                    .map(|(x, w)| {
                        let r = 0.5 * (left + right) + 0.5 * (right - left) * x;
                        (r, 0.5 * (right - left) * w * r.powf(q - 1.0) / vol)
                    })
                    .collect(),
            );
        }
        let gershgorin =
            (0..n).map(|i| (lower[i] + upper[i] + pot[i]).abs() + lower[i] + upper[i]).fold(0.0, f64::max);
        Self { rho, lower, upper, pot, rho_a, inner_flux, p: params.p, gershgorin, cells }
    }

    fn m(&self) -> usize {
        self.rho.len()
    }

    /// Spatial operator on `u` with inner flux datum `g = u′(ρ_min)`;
    /// the Dirichlet node gets zero.
    fn apply(&self, u: &[f64], g: f64, nonlinear: bool, out: &mut [f64]) {
        let n = self.m() - 1;
        for i in 0..n {
            let mut v = self.upper[i] * (u[i + 1] - u[i]) - self.pot[i] * u[i];
            if i > 0 {
                v += self.lower[i] * (u[i - 1] - u[i]);
            } else {
                v += self.inner_flux * g;
            }
            if nonlinear {
                v += self.rho_a[i] * u[i].abs().powf(self.p);
            }
            out[i] = v;
        }
        out[n] = 0.0;
    }

    fn reaction_rate(&self, u: &[f64]) -> f64 {
        let n = self.m() - 1;
        (0..n).map(|i| self.p * self.rho_a[i] * u[i].abs().powf(self.p - 1.0)).fold(0.0, f64::max)
    }
}

/// Spatial right-hand side `u″ + (Q−1)u′/ρ − (λ/ρ²)u + ρ^a|u|^p` applied to
/// the first layer of `state`, with `u(1) = eps` and zero flux at `ρ_min`.
pub fn radial_rhs(state: &SimState, params: &ProblemParams, grid: &RadialGrid, eps: f64) -> Result<Vec<f64>> {
    grid.validate()?;
    let op = Operator::new(params, grid);
    let mut u = state.layers.first().cloned().unwrap_or_default();
    if u.len() != op.m() {
        return Err(Error::InvalidParameter(format!("layer has {} nodes, grid has {}", u.len(), op.m())));
    }
    let n = op.m() - 1;
    u[n] = eps;
    let mut out = vec![0.0; op.m()];
    op.apply(&u, 0.0, true, &mut out);
    Ok(out)
}

/// Source terms for manufactured-solution runs.
pub struct Forcing<'a> {
    pub source: &'a (dyn Fn(f64, f64) -> f64 + Sync),
    pub inner_flux: &'a (dyn Fn(f64) -> f64 + Sync),
}

struct System<'a> {
    op: Operator,
    k: usize,
    nonlinear: bool,
    forcing: Option<&'a Forcing<'a>>,
}

impl System<'_> {
    fn eval(&self, t: f64, y: &[f64], out: &mut [f64]) {
        let m = self.op.m();
        for j in 0..self.k - 1 {
            out[j * m..(j + 1) * m].copy_from_slice(&y[(j + 1) * m..(j + 2) * m]);
            out[j * m + m - 1] = 0.0;
        }
        let g = self.forcing.map_or(0.0, |f| (f.inner_flux)(t));
        let last = &mut out[(self.k - 1) * m..];
        self.op.apply(&y[..m], g, self.nonlinear, last);
        if let Some(f) = self.forcing {
            for (v, cell) in last.iter_mut().zip(&self.op.cells) {
                *v += cell.iter().map(|&(r, w)| w * (f.source)(t, r)).sum::<f64>();
            }
        }
    }
}

fn sup(u: &[f64]) -> f64 {
    u.iter().fold(0.0, |acc: f64, v| if v.is_nan() { f64::NAN } else { acc.max(v.abs()) })
}

fn run(cfg: &SimConfig, ic: Vec<Vec<f64>>, forcing: Option<&Forcing>) -> Result<SimResult> {
    cfg.validate()?;
    let k = cfg.params.k as usize;
    if ic.len() != k {
        return Err(Error::InvalidParameter(format!("expected {k} initial layers, got {}", ic.len())));
    }
    let state = SimState::new(ic, &cfg.grid)?;
    let sys = System { op: Operator::new(&cfg.params, &cfg.grid), k, nonlinear: cfg.nonlinear, forcing };
    let m = sys.op.m();
    let mut y: Vec<f64> = state.layers.concat();
    y[m - 1] = cfg.eps;
    for j in 1..k {
        y[j * m + m - 1] = 0.0;
    }
    let h = cfg.grid.min_spacing();
    let pol = cfg.dt;
    let (base, cap) = if k == 1 {
        (pol.c * h * h, 1.0 / sys.op.gershgorin)
    } else {
        (pol.c * h, 1.0 / sys.op.gershgorin.sqrt())
    };
    let dt_lin = base.min(cap);

    let every = cfg.t_end / pol.history_points.max(1) as f64;
    let mut next_sample = every;
    let mut t = 0.0;
    let mut steps = 0u64;
    let mut history = vec![(0.0, sup(&y[..m]))];
    let len = y.len();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    let finish = |status, t: f64, y: &[f64], history: Vec<(f64, f64)>, steps, diagnostic: Option<String>| SimResult {
        status,
        t_final: t,
        sup_norm_history: history,
        blow_up_time: (status == SimStatus::BlownUp).then_some(t),
        steps,
        diagnostic,
        final_profile: y[..m].to_vec(),
    };

    while t < cfg.t_end {
        if steps >= pol.max_steps {
            history.push((t, sup(&y[..m])));
            return Ok(finish(SimStatus::Running, t, &y, history, steps, Some("step budget exhausted".into())));
        }
        let mut dt = dt_lin;
        if cfg.nonlinear {
            let r = sys.op.reaction_rate(&y[..m]);
            if r > 0.0 {
                dt = dt.min(if k == 1 { pol.reaction_c / r } else { pol.reaction_c / r.sqrt() });
            }
        }
        if dt < pol.dt_min {
            history.push((t, sup(&y[..m])));
            return Ok(finish(SimStatus::BlownUp, t, &y, history, steps, Some(format!("time step underflow: dt = {dt:e}"))));
        }
        let dt = dt.min(cfg.t_end - t);
        sys.eval(t, &y, &mut k1);
        for i in 0..len {
            tmp[i] = y[i] + 0.5 * dt * k1[i];
        }
        sys.eval(t + 0.5 * dt, &tmp, &mut k2);
        for i in 0..len {
            tmp[i] = y[i] + 0.5 * dt * k2[i];
        }
        sys.eval(t + 0.5 * dt, &tmp, &mut k3);
        for i in 0..len {
            tmp[i] = y[i] + dt * k3[i];
        }
        sys.eval(t + dt, &tmp, &mut k4);
        for i in 0..len {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t = if cfg.t_end - t <= dt { cfg.t_end } else { t + dt };
        steps += 1;
        let s = sup(&y[..m]);
        if !s.is_finite() || y.iter().any(|v| !v.is_finite()) {
            history.push((t, s));
            return Ok(finish(SimStatus::BlownUp, t, &y, history, steps, Some("non-finite value detected".into())));
        }
        if s > pol.blowup_threshold {
            history.push((t, s));
            return Ok(finish(SimStatus::BlownUp, t, &y, history, steps, Some(format!("sup norm {s:e} exceeded threshold"))));
        }
        if t >= next_sample || t >= cfg.t_end {
            history.push((t, s));
            while next_sample <= t {
                next_sample += every;
            }
        }
    }
    Ok(finish(SimStatus::Completed, t, &y, history, steps, None))
}

/// Integrates from the initial layers `ic` (`k` of them) to `cfg.t_end`.
pub fn integrate(cfg: &SimConfig, ic: Vec<Vec<f64>>) -> Result<SimResult> {
    run(cfg, ic, None)
}

/// Integrates with an added source term, averaged over each control volume,
/// and an inner flux datum.
pub fn integrate_forced(cfg: &SimConfig, ic: Vec<Vec<f64>>, forcing: &Forcing) -> Result<SimResult> {
    run(cfg, ic, Some(forcing))
}

/// `0.1 (1−ρ)² ρ²` in the first layer and zeros above it.
pub fn canonical_data(grid: &RadialGrid, k: usize) -> Vec<Vec<f64>> {
    let nodes = grid.nodes();
    let mut layers = vec![nodes.iter().map(|r| 0.1 * (1.0 - r).powi(2) * r * r).collect::<Vec<_>>()];
    layers.extend((1..k).map(|_| vec![0.0; nodes.len()]));
    layers
}

/// `f` sampled on the grid in the first layer and zeros above it.
pub fn profile_data(grid: &RadialGrid, k: usize, f: impl Fn(f64) -> f64) -> Vec<Vec<f64>> {
    let nodes = grid.nodes();
    let mut layers = vec![nodes.iter().map(|&r| f(r)).collect::<Vec<_>>()];
    layers.extend((1..k).map(|_| vec![0.0; nodes.len()]));
    layers
}

/// `u*(t, ρ) = e^{−t} cos(πρ/2)`.
pub fn manufactured_solution(t: f64, rho: f64) -> f64 {
    (-t).exp() * (std::f64::consts::FRAC_PI_2 * rho).cos()
}

/// Max-norm error at `cfg.t_end` of the forced run whose exact solution is
/// [`manufactured_solution`]; `cfg.eps` is ignored.
pub fn mms_error(cfg: &SimConfig) -> Result<f64> {
    use std::f64::consts::FRAC_PI_2;
    let params = cfg.params;
    let k = params.k as i32;
    let q = params.q();
    let source = move |t: f64, r: f64| {
        let u = manufactured_solution(t, r);
        let du = -FRAC_PI_2 * (-t).exp() * (FRAC_PI_2 * r).sin();
        let d2u = -FRAC_PI_2 * FRAC_PI_2 * u;
        let space = d2u + (q - 1.0) * du / r - params.lambda * u / (r * r)
            + if cfg.nonlinear { r.powf(params.a) * u.abs().powf(params.p) } else { 0.0 };
        (-1f64).powi(k) * u - space
    };
    let rho_min = cfg.grid.rho_min;
    let inner = move |t: f64| -FRAC_PI_2 * (-t).exp() * (FRAC_PI_2 * rho_min).sin();
    let forcing = Forcing { source: &source, inner_flux: &inner };
    let nodes = cfg.grid.nodes();
    let mut ic = vec![nodes.iter().map(|&r| manufactured_solution(0.0, r)).collect::<Vec<_>>()];
    if k == 2 {
        ic.push(ic[0].iter().map(|v| -v).collect());
    }
    let run_cfg = SimConfig { eps: 0.0, ..cfg.clone() };
    let res = integrate_forced(&run_cfg, ic, &forcing)?;
    if res.status != SimStatus::Completed {
        return Err(Error::Verification(format!("manufactured run ended as {}", res.status)));
    }
    Ok(nodes
        .iter()
        .zip(&res.final_profile)
        .map(|(&r, v)| (v - manufactured_solution(res.t_final, r)).abs())
        .fold(0.0, f64::max))
}

/// Errors on `n_cells`, `2 n_cells`, … and the observed orders between
/// consecutive refinements.
pub fn mms_convergence(cfg: &SimConfig, refinements: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let errors = (0..refinements)
        .map(|j| {
            let grid = RadialGrid { n_cells: cfg.grid.n_cells << j, ..cfg.grid };
            mms_error(&SimConfig { grid, ..cfg.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    let orders = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok((errors, orders))
}

/// Shared settings of a phase sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub ctx: GroupContext,
    #[serde(default = "one")]
    pub k: u32,
    #[serde(default = "sweep_grid")]
    pub grid: RadialGrid,
    #[serde(default = "sweep_t_end")]
    pub t_end: f64,
    #[serde(default = "sweep_eps")]
    pub eps: f64,
    #[serde(default)]
    pub dt: DtPolicy,
}

fn one() -> u32 {
    1
}
fn sweep_grid() -> RadialGrid {
    RadialGrid { n_cells: 64, ..RadialGrid::default() }
}
fn sweep_t_end() -> f64 {
    2.0
}
fn sweep_eps() -> f64 {
    0.1
}

impl SweepConfig {
    pub fn new(ctx: GroupContext) -> Self {
        Self { ctx, k: 1, grid: sweep_grid(), t_end: sweep_t_end(), eps: sweep_eps(), dt: DtPolicy::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Running,
    BlownUp,
    Completed,
    Failed,
}

impl From<SimStatus> for CellStatus {
    fn from(s: SimStatus) -> Self {
        match s {
            SimStatus::Running => CellStatus::Running,
            SimStatus::BlownUp => CellStatus::BlownUp,
            SimStatus::Completed => CellStatus::Completed,
        }
    }
}

/// One cell of a sweep; the simulation is illustrative, the verdict is the
/// classifier's.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub a: f64,
    pub p: f64,
    pub k: u32,
    pub status: CellStatus,
    pub blow_up_time: Option<f64>,
    pub classifier_verdict: String,
    pub grid: String,
    pub dt_policy: String,
    pub max_sup: Option<f64>,
    pub note: String,
}

/// Runs every `(λ, a, p)` cell from canonical data.
pub fn phase_sweep(lambdas: &[f64], a_list: &[f64], p_list: &[f64], cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if lambdas.is_empty() || a_list.is_empty() || p_list.is_empty() {
        return Err(Error::InvalidParameter("phase sweep needs nonempty lambda, a and p lists".into()));
    }
    if lambdas.iter().chain(a_list).chain(p_list).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("phase sweep grids must be finite".into()));
    }
    cfg.grid.validate()?;
    let cells: Vec<(f64, f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| a_list.iter().flat_map(move |&a| p_list.iter().map(move |&p| (l, a, p))))
        .collect();
    Ok(cells.into_par_iter().map(|(lambda, a, p)| sweep_cell(lambda, a, p, cfg)).collect())
}

fn sweep_cell(lambda: f64, a: f64, p: f64, cfg: &SweepConfig) -> SweepRow {
    let mut row = SweepRow {
        lambda,
        a,
        p,
        k: cfg.k,
        status: CellStatus::Failed,
        blow_up_time: None,
        classifier_verdict: String::new(),
        grid: cfg.grid.to_string(),
        dt_policy: cfg.dt.to_string(),
        max_sup: None,
        note: String::new(),
    };
    let outcome = ProblemParams::new(cfg.ctx, lambda, a, p, cfg.k).and_then(|params| {
        row.classifier_verdict = classify(&params)?.verdict.to_string();
        let sim = SimConfig { params, grid: cfg.grid, eps: cfg.eps, t_end: cfg.t_end, dt: cfg.dt, nonlinear: true };
        integrate(&sim, canonical_data(&cfg.grid, cfg.k as usize))
    });
    match outcome {
        Ok(res) => {
            row.status = res.status.into();
            row.blow_up_time = res.blow_up_time;
            row.max_sup = Some(res.max_sup());
            row.note = res.diagnostic.unwrap_or_else(|| "illustrative".into());
        }
        Err(e) => row.note = e.to_string(),
    }
    row
}
