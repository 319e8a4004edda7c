//! Explicit stationary supersolutions in the existence regime: the power
//! witness `u = ε ρ^{−τ}` and, at critical `λ`, the log-corrected witness
//! `u = ε ρ^{(2−Q)/2} (1 − ln ρ)^β`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{worst_of, CheckOutcome};
use crate::error::{Error, Result};
use crate::hcalc::{hlap, radial_lap, RadialLift, RadialProfile, Scalar};
use crate::hgroup::HPoint;
use crate::spectrum::{alphas, ProblemParams};

/// `P(τ) = −τ² + (Q−2)τ + λ`.
pub fn p_poly(tau: f64, params: &ProblemParams) -> f64 {
    -tau * tau + (params.q() - 2.0) * tau + params.lambda
}

/// Roots `τ₁ = Q−2+α⁻ ≤ τ₂ = Q−2+α⁺` of `P`.
pub fn tau_roots(params: &ProblemParams) -> Result<(f64, f64)> {
    let al = alphas(params)?;
    Ok((params.q() - 2.0 + al.alpha_minus, params.q() - 2.0 + al.alpha_plus))
}

/// `(τ₁, min{(a+2)/(p−1), τ₂})` when nonempty.
pub fn tau_window(params: &ProblemParams) -> Result<Option<(f64, f64)>> {
    params.validate()?;
    if params.is_critical() {
        return Err(Error::InvalidParameter(
            "lambda is critical: the power window is empty; use the critical constructor".into(),
        ));
    }
    let (t1, t2) = tau_roots(params)?;
    let hi = ((params.a + 2.0) / (params.p - 1.0)).min(t2);
    let tol = 1e-12 * params.rhs()?.abs().max(1.0) / (params.p - 1.0);
    Ok((hi - t1 > tol).then_some((t1, hi)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Subcritical,
    Critical,
}

/// The radial profile of a witness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WitnessProfile {
    Power { eps: f64, tau: f64 },
    Log { eps: f64, beta: f64, q: f64 },
}

impl RadialProfile for WitnessProfile {
    fn eval<S: Scalar>(&self, rho: S) -> S {
        match *self {
            WitnessProfile::Power { eps, tau } => rho.powf(-tau) * eps,
            WitnessProfile::Log { eps, beta, q } => rho.powf((2.0 - q) / 2.0) * (-rho.ln() + 1.0).powf(beta) * eps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub eps: f64,
    pub params: ProblemParams,
    pub boundary_value: f64,
    pub bounds: WitnessBounds,
}

/// The admissible ranges a witness was built against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessBounds {
    /// Supremum of admissible `ε`.
    pub eps_bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_window: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_min: Option<f64>,
}

impl Witness {
    pub fn profile(&self) -> WitnessProfile {
        match self.kind {
            WitnessKind::Subcritical => WitnessProfile::Power { eps: self.eps, tau: self.tau.unwrap_or(0.0) },
            WitnessKind::Critical => WitnessProfile::Log { eps: self.eps, beta: self.beta.unwrap_or(0.5), q: self.params.q() },
        }
    }

    pub fn value(&self, rho: f64) -> f64 {
        self.profile().eval(rho)
    }

    /// `−(1/ψ)Δ_H u + (λ/ρ²) u` predicted in closed form.
    pub fn identity_value(&self, rho: f64) -> f64 {
        match self.kind {
            WitnessKind::Subcritical => {
                let tau = self.tau.unwrap_or(0.0);
                self.eps * p_poly(tau, &self.params) * rho.powf(-tau - 2.0)
            }
            WitnessKind::Critical => {
                let beta = self.beta.unwrap_or(0.5);
                let q = self.params.q();
                self.eps * beta * (1.0 - beta) * rho.powf(-q / 2.0 - 1.0) * (1.0 - rho.ln()).powf(beta - 2.0)
            }
        }
    }

    /// The same witness with `ε` multiplied by `factor` and no window check,
    /// for probing how sharp the `ε` bound is.
    pub fn scaled_eps(&self, factor: f64) -> Witness {
        Witness { eps: self.eps * factor, boundary_value: self.eps * factor, ..self.clone() }
    }
}

/// `u = ε ρ^{−τ}` with defaults `τ` = window midpoint, `ε = ½ P(τ)^{1/(p−1)}`.
pub fn build_subcritical(params: &ProblemParams, tau: Option<f64>, eps: Option<f64>) -> Result<Witness> {
    let (lo, hi) = tau_window(params)?.ok_or_else(|| {
        Error::InvalidParameter("the tau window is empty: no power witness for these parameters".into())
    })?;
    let tau = tau.unwrap_or(0.5 * (lo + hi));
    if !(tau > lo && tau < hi) {
        return Err(Error::InvalidParameter(format!("tau = {tau} lies outside the window ({lo}, {hi})")));
    }
    let eps_bound = p_poly(tau, params).powf(1.0 / (params.p - 1.0));
    let eps = eps.unwrap_or(0.5 * eps_bound);
    if !(eps > 0.0 && eps < eps_bound) {
        return Err(Error::InvalidParameter(format!("eps = {eps} lies outside (0, {eps_bound})")));
    }
    Ok(Witness {
        kind: WitnessKind::Subcritical,
        tau: Some(tau),
        beta: None,
        eps,
        params: *params,
        boundary_value: eps,
        bounds: WitnessBounds { eps_bound, tau_window: Some((lo, hi)), s0: None, h_min: None },
    })
}

fn h_exponent(params: &ProblemParams) -> f64 {
    (params.p - 1.0) * (params.q() - 2.0) / 2.0 - (params.a + 2.0)
}

/// `h_β(s) = s^{(p−1)(Q−2)/2 − (a+2)} (1 − ln s)^{−β(p−1) − 2}`.
pub fn h_beta(s: f64, beta: f64, params: &ProblemParams) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Domain(format!("h_beta needs s in (0, 1], got {s}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter(format!("beta must lie in (0, 1), got {beta}")));
    }
    Ok(s.powf(h_exponent(params)) * (1.0 - s.ln()).powf(-beta * (params.p - 1.0) - 2.0))
}

/// Lower end of the search interval for [`s0_minimize`].
pub const S0_FLOOR: f64 = 1e-12;

/// Minimizer of `h_β` over `(S0_FLOOR, 1]`: a log-spaced pre-scan of 10³
/// points followed by golden-section refinement in `ln s`.
pub fn s0_minimize(beta: f64, params: &ProblemParams, tol: f64) -> Result<(f64, f64)> {
    if h_exponent(params) >= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "h_beta exponent {} is not negative: the log witness needs (p-1)(Q-2)/2 < a+2",
            h_exponent(params)
        )));
    }
    h_beta(1.0, beta, params)?;
    let x_lo = S0_FLOOR.ln();
    let lnh = |x: f64| h_beta(x.exp(), beta, params).map(f64::ln).unwrap_or(f64::INFINITY);
    let n = 1000;
    let grid: Vec<f64> = (0..=n).map(|i| x_lo * (1.0 - i as f64 / n as f64)).collect();
    let best = (0..=n).min_by(|&i, &j| lnh(grid[i]).total_cmp(&lnh(grid[j]))).expect("grid is nonempty");
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(n)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    while (b - a).abs() > tol.max(1e-15) {
        if lnh(c) <= lnh(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let mut x = 0.5 * (a + b);
    // keep an endpoint minimum exactly on the boundary
    if lnh(0.0) <= lnh(x) {
        x = 0.0;
    }
    let s0 = x.exp();
    Ok((s0, h_beta(s0, beta, params)?))
}

/// `u = ε ρ^{(2−Q)/2} (1 − ln ρ)^β` with defaults `β = ½`,
/// `ε = ½ [β(1−β) h_β(s₀)]^{1/(p−1)}`.
pub fn build_critical(params: &ProblemParams, beta: Option<f64>, eps: Option<f64>) -> Result<Witness> {
    params.validate()?;
    if !params.is_critical() {
        return Err(Error::InvalidParameter(format!(
            "the log witness needs critical lambda, got {}",
            params.lambda
        )));
    }
    let beta = beta.unwrap_or(0.5);
    let (s0, h_min) = s0_minimize(beta, params, 1e-12)?;
    let eps_bound = (beta * (1.0 - beta) * h_min).powf(1.0 / (params.p - 1.0));
    let eps = eps.unwrap_or(0.5 * eps_bound);
    if !(eps > 0.0 && eps < eps_bound) {
        return Err(Error::InvalidParameter(format!("eps = {eps} lies outside (0, {eps_bound})")));
    }
    Ok(Witness {
        kind: WitnessKind::Critical,
        tau: None,
        beta: Some(beta),
        eps,
        params: *params,
        boundary_value: eps,
        bounds: WitnessBounds { eps_bound, tau_window: None, s0: Some(s0), h_min: Some(h_min) },
    })
}

/// Radii on which a witness is verified.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyGrid {
    pub points: usize,
    pub rho_min: f64,
}

impl Default for VerifyGrid {
    fn default() -> Self {
        Self { points: 200, rho_min: 1e-4 }
    }
}

impl VerifyGrid {
    pub fn radii(&self) -> Vec<f64> {
        let n = self.points.max(2);
        (0..n).map(|i| self.rho_min.powf(1.0 - i as f64 / (n - 1) as f64)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessVerification {
    pub identity: CheckOutcome,
    pub inequality: CheckOutcome,
    /// Largest relative gap between the hyper-dual Kohn-Laplacian on the full
    /// lift and the one-dimensional radial formula.
    pub radial_coherence: f64,
    pub max_identity_error: f64,
    pub min_slack: f64,
    pub rho_of_min_slack: f64,
    pub passed: bool,
}

/// Checks the closed-form identity for `−(1/ψ)Δ_H u + (λ/ρ²)u` and the
/// supersolution inequality `−(1/ψ)Δ_H u + (λ/ρ²)u ≥ ρ^a u^p` on `grid`.
///
/// The operator is evaluated on the lift to `ℝ^{2N+1}` at a point of each
/// radius whose angle varies along the grid.
pub fn verify_witness(w: &Witness, grid: &VerifyGrid, tol: f64) -> Result<WitnessVerification> {
    if !(grid.rho_min > 0.0 && grid.rho_min < 1.0) {
        return Err(Error::InvalidParameter(format!("grid rho_min must lie in (0, 1), got {}", grid.rho_min)));
    }
    let params = w.params;
    let profile = w.profile();
    let lift = RadialLift(profile);
    let n = params.ctx.n();
    let radii = grid.radii();
    let rows: Vec<(f64, f64, f64, Vec<f64>)> = radii
        .par_iter()
        .enumerate()
        .map(|(i, &rho)| {
            let theta = 0.2 + 2.7 * ((i as f64 * 0.618_033_988_75) % 1.0);
            let mut omega = vec![0.0; 2 * n];
            omega[i % (2 * n)] = 1.0;
            let xi = HPoint::from_polar(rho, theta, &omega)?;
            let psi = xi.psi()?;
            let rho = xi.knorm();
            let u = profile.eval(rho);
            let op = -hlap(&lift, &xi) / psi + params.lambda * u / (rho * rho);
            let op_radial = -radial_lap(&profile, rho, params.ctx)? + params.lambda * u / (rho * rho);
            let expected = w.identity_value(rho);
            let rel = (op - expected).abs() / expected.abs();
            let coherence = (op - op_radial).abs() / op_radial.abs().max(f64::MIN_POSITIVE);
            let slack = op - rho.powf(params.a) * u.powf(params.p);
            Ok((rel, coherence, slack, xi.coords()))
        })
        .collect::<Result<_>>()?;
    let rel: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let neg_slack: Vec<f64> = rows.iter().map(|r| -r.2).collect();
    let radial_coherence = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let (wi, max_identity_error) = worst_of(&rel).expect("grid has points");
    let (si, neg_min) = worst_of(&neg_slack).expect("grid has points");
    let min_slack = -neg_min;
    let cite_identity = match w.kind {
        WitnessKind::Subcritical => "power witness identity: -(1/psi) Lap_H u + (lambda/rho^2) u = eps P(tau) rho^(-tau-2)",
        WitnessKind::Critical => {
            "log witness identity: -(1/psi) Lap_H u + (lambda/rho^2) u = eps beta(1-beta) rho^(-Q/2-1) (1-ln rho)^(beta-2)"
        }
    };
    let identity = CheckOutcome::at_most("witness identity (relative error)", max_identity_error, tol, cite_identity)
        .with_worst(rows[wi].3.clone())
        .with_samples(rows.len());
    let inequality = CheckOutcome::at_least(
        "supersolution slack",
        min_slack,
        0.0,
        "stationary solutions exist: the witness satisfies the inequality with V = rho^a",
    )
    .with_worst(rows[si].3.clone())
    .with_samples(rows.len())
    .with_detail(format!(
        "grid excludes rho < {:e}; in the admissible window the slack exponent only strengthens the inequality toward the origin",
        grid.rho_min
    ));
    let passed = identity.passed && inequality.passed;
    Ok(WitnessVerification {
        identity,
        inequality,
        radial_coherence,
        max_identity_error,
        min_slack,
        rho_of_min_slack: radii[si],
        passed,
    })
}
