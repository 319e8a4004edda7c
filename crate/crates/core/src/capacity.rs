//! Test functions of the nonlinear capacity method and the functionals
//! `J₁`, `J₂`, `η` built from them, with log-log scaling fits.
//!
//! All test functions factor as `φ(t, ξ) = β_T(t) · Γ_R(|ξ|_H)`, so every
//! functional splits into a one-dimensional time integral times a radial
//! space integral evaluated with the polar formula.

use serde::{Deserialize, Serialize};

use crate::check::CheckOutcome;
use crate::error::{Error, Result};
use crate::hcalc::{HyperDual, Jet, RadialProfile, Scalar};
use crate::hgroup::HPoint;
use crate::hquad::{adaptive, c_n, radial_integral_with, Annulus, QuadMethod, QuadOptions, QuadResult};
use crate::spectrum::{ProblemParams, SigmaProfile};

/// Values at this scale are always resolved relative to themselves.
fn opts() -> QuadOptions {
    QuadOptions::with_tol(0.0, 1e-10)
}

/// Smooth bump `θ(s) = exp(4 − 1/(s(1−s)))` on `(0, 1)`, zero elsewhere;
/// `θ(1/2) = 1`.
pub fn theta<S: Scalar>(s: S) -> S {
    let v = s.value();
    if v <= 0.0 || v >= 1.0 {
        return S::cst(0.0);
    }
    ((s * (-s + 1.0)).recip() * -1.0 + 4.0).exp()
}

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`,
/// `e^{−1/t} / (e^{−1/t} + e^{−1/(1−t)})` in between.
pub fn smooth_step<S: Scalar>(t: S) -> S {
    let v = t.value();
    if v <= 0.0 {
        S::cst(0.0)
    } else if v >= 1.0 {
        S::cst(1.0)
    } else {
        (-step_exponent(t).softplus()).exp()
    }
}

fn step_exponent<S: Scalar>(t: S) -> S {
    t.recip() - (-t + 1.0).recip()
}

/// `ζ(s) = q(2s − 1)`: 0 on `[0, 1/2]`, 1 on `[1, ∞)`.
pub fn zeta<S: Scalar>(s: S) -> S {
    smooth_step(s * 2.0 - 1.0)
}

/// `ℓ(s) = q(2s)`: 0 for `s ≤ 0`, 1 for `s ≥ 1/2`.
pub fn ell<S: Scalar>(s: S) -> S {
    smooth_step(s * 2.0)
}

/// The cutoff exponent `ι`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutoffFamily {
    iota: u32,
}

impl CutoffFamily {
    /// `⌈max(k, 2) p/(p−1)⌉ + 2`.
    pub fn min_iota(k: u32, p: f64) -> u32 {
        (k.max(2) as f64 * p / (p - 1.0)).ceil() as u32 + 2
    }

    pub fn new(k: u32, p: f64) -> Self {
        Self { iota: Self::min_iota(k, p) }
    }

    pub fn for_params(params: &ProblemParams) -> Self {
        Self::new(params.k, params.p)
    }

    pub fn with_iota(k: u32, p: f64, iota: u32) -> Result<Self> {
        let min = Self::min_iota(k, p);
        if iota < min {
            return Err(Error::InvalidParameter(format!("iota = {iota} is below the admissible minimum {min}")));
        }
        Ok(Self { iota })
    }

    pub fn iota(&self) -> u32 {
        self.iota
    }
}

/// `β_T(t) = θ^ι(t/T)`.
pub fn beta_t(t: f64, big_t: f64, fam: CutoffFamily) -> f64 {
    theta(t / big_t).powi(fam.iota as i32)
}

/// `β_T^{(k)}(t) / β_T(t)`, exact via a Taylor jet of `ln β_T`.
pub fn beta_log_derivative_ratio(t: f64, big_t: f64, k: usize, fam: CutoffFamily) -> f64 {
    let u = Jet::variable(t, k) / big_t;
    let log_beta = ((u * (-u + 1.0)).recip() * -1.0 + 4.0) * fam.iota as f64;
    (log_beta - log_beta.value()).exp().derivative(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestFamily {
    /// `γ_R = K ζ^ι(Rρ)`, switching on across `(1/(2R), 1/R)`.
    Gamma,
    /// `μ_R = K ℓ^ι(1 + ln ρ / ln R)`, switching on across `(1/R, R^{−1/2})`.
    Mu,
}

impl TestFamily {
    /// The transition annulus where the radial cutoff is neither 0 nor 1.
    pub fn transition(self, r: f64) -> (f64, f64) {
        match self {
            TestFamily::Gamma => (0.5 / r, 1.0 / r),
            TestFamily::Mu => (1.0 / r, r.powf(-0.5)),
        }
    }

    /// Argument of the smooth step `q` as a function of `ρ`.
    fn step_arg<S: Scalar>(self, rho: S, r: f64) -> S {
        match self {
            TestFamily::Gamma => rho * (2.0 * r) - 1.0,
            TestFamily::Mu => rho.ln() * (2.0 / r.ln()) + 2.0,
        }
    }

    /// The radial cutoff `Z(ρ)` (`ζ^ι(Rρ)` or `ℓ^ι(1 + ln ρ/ln R)`).
    pub fn cutoff(self, rho: f64, r: f64, fam: CutoffFamily) -> f64 {
        smooth_step(self.step_arg(rho, r)).powi(fam.iota as i32)
    }
}

fn check_scale(r: f64) -> Result<()> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale R must exceed 1, got {r}")));
    }
    Ok(())
}

fn check_time_scale(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("time scale T must be positive, got {t}")));
    }
    Ok(())
}

fn radial_test_value(family: TestFamily, xi: &HPoint, r: f64, params: &ProblemParams, fam: CutoffFamily) -> Result<f64> {
    check_scale(r)?;
    let rho = xi.knorm();
    if !(rho > 0.0 && rho <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!("test functions live on 0 < |xi|_H <= 1, got {rho}")));
    }
    let rho = rho.min(1.0);
    Ok(SigmaProfile::new(params)?.eval(rho) * family.cutoff(rho, r, fam))
}

/// `γ_R(ξ) = K(ξ) ζ^ι(R|ξ|_H)`.
pub fn gamma_r(xi: &HPoint, r: f64, params: &ProblemParams, fam: CutoffFamily) -> Result<f64> {
    radial_test_value(TestFamily::Gamma, xi, r, params, fam)
}

/// `μ_R(ξ) = K(ξ) ℓ^ι(1 + ln|ξ|_H / ln R)`.
pub fn mu_r(xi: &HPoint, r: f64, params: &ProblemParams, fam: CutoffFamily) -> Result<f64> {
    radial_test_value(TestFamily::Mu, xi, r, params, fam)
}

fn nonfinite(what: &str, at: f64) -> Error {
    Error::Quadrature(format!("non-finite {what} integrand at {at:e}"))
}

/// `∫_0^∞ β_T^{−1/(p−1)} |β_T^{(k)}|^{p/(p−1)} dt`, evaluated as
/// `∫ β_T |β_T^{(k)}/β_T|^{p/(p−1)} dt` so no power of `β_T` underflows.
pub fn j1_time_factor(big_t: f64, k: u32, p: f64, fam: CutoffFamily) -> Result<QuadResult> {
    check_time_scale(big_t)?;
    if k == 0 || k as usize > crate::autodiff::JET_MAX_ORDER {
        return Err(Error::InvalidParameter(format!("time order k = {k} is out of range")));
    }
    let e = p / (p - 1.0);
    let integrand = |t: f64| {
        let b = beta_t(t, big_t, fam);
        if b == 0.0 {
            return 0.0;
        }
        let v = b * beta_log_derivative_ratio(t, big_t, k as usize, fam).abs().powf(e);
        if v.is_finite() {
            v
        } else {
            f64::NAN
        }
    };
    adaptive(integrand, 0.0, big_t, opts())
}

/// `∫_0^∞ β_T dt`.
pub fn beta_integral(big_t: f64, fam: CutoffFamily) -> Result<QuadResult> {
    check_time_scale(big_t)?;
    adaptive(|t| beta_t(t, big_t, fam), 0.0, big_t, opts())
}

/// `ln Z` as a function of `s = ln ρ`, or `None` where `Z` underflows.
fn log_cutoff<S: Scalar>(family: TestFamily, s: S, r: f64, fam: CutoffFamily) -> Option<S> {
    let t = match family {
        TestFamily::Gamma => s.exp() * (2.0 * r) - 1.0,
        TestFamily::Mu => s * (2.0 / r.ln()) + 2.0,
    };
    if t.value() <= 0.0 {
        return None;
    }
    if t.value() >= 1.0 {
        return Some(S::cst(0.0));
    }
    let x = step_exponent(t);
    if x.value() > 700.0 {
        return None;
    }
    if x.value() < -700.0 {
        return Some(S::cst(0.0));
    }
    Some(-x.softplus() * fam.iota as f64)
}

/// `ln(ρ^Q F(ρ))` at `s = ln ρ`, where `F` is the `J₂` space integrand, or
/// `None` where it vanishes.
///
/// With `u = ln σ`, `l = ln Z` as functions of `s`, the operator applied to
/// `Γ = σZ` is `(σZ/ρ²) m̂` where
/// `m̂ = λ − (u'' + u'² + (Q−2)u') − (l'' + l'² + (Q−2)l' + 2u'l')`.
/// Working with these log-derivatives keeps every factor in range for
/// scales far beyond `ρ^{α}` overflow.
fn j2_log_density(family: TestFamily, s: f64, r: f64, params: &ProblemParams, sigma: &SigmaProfile, fam: CutoffFamily) -> Option<f64> {
    let sd = HyperDual::seeded(s, 1.0);
    let l = log_cutoff(family, sd, r, fam)?;
    let u = sigma.log_eval(sd);
    let q = params.q();
    // vanishes identically by harmonicity of σ; kept as computed
    let residual = params.lambda - (u.d12 + u.d1 * u.d1 + (q - 2.0) * u.d1);
    let m_hat = residual - (l.d12 + l.d1 * l.d1 + (q - 2.0) * l.d1 + 2.0 * u.d1 * l.d1);
    if m_hat == 0.0 {
        return None;
    }
    let inv = 1.0 / (params.p - 1.0);
    Some(l.value + u.value + params.p * inv * (m_hat.abs().ln() - 2.0 * s) - params.a * inv * s + q * s)
}

/// Space integrand of `J₂` (without `ψ`) at radius `ρ`:
/// `Γ^{−1/(p−1)} |M|^{p/(p−1)} ρ^{−a/(p−1)}` with `Γ = σ Z` and
/// `ψ M = −Δ_H Γ + (λ/ρ²) ψ Γ`. Identically zero outside the transition
/// annulus.
pub fn j2_space_integrand(family: TestFamily, rho: f64, r: f64, params: &ProblemParams, fam: CutoffFamily) -> Result<f64> {
    check_scale(r)?;
    let (lo, hi) = family.transition(r);
    if rho <= lo || rho >= hi {
        return Ok(0.0);
    }
    let sigma = SigmaProfile::new(params)?;
    let s = rho.ln();
    let v = j2_log_density(family, s, r, params, &sigma, fam).map_or(0.0, |ld| (ld - params.q() * s).exp());
    if v.is_finite() {
        Ok(v)
    } else {
        Err(nonfinite("J2 space", rho))
    }
}

/// `∫ Γ_R V^{−1/(p−1)} ψ dξ` with `V = ρ^a`.
pub fn j1_space_factor(family: TestFamily, r: f64, params: &ProblemParams, fam: CutoffFamily) -> Result<QuadResult> {
    check_scale(r)?;
    let sigma = SigmaProfile::new(params)?;
    let inv = 1.0 / (params.p - 1.0);
    let (lo, hi) = family.transition(r);
    let f = |rho: f64| rho.powf(-params.a * inv) * sigma.eval(rho) * family.cutoff(rho, r, fam);
    let inner = radial_integral_with(f, Annulus::new(lo, hi)?, params.ctx, opts())?;
    let outer = radial_integral_with(f, Annulus::new(hi, 1.0)?, params.ctx, opts())?;
    Ok(combine_sum(inner, outer))
}

/// `∫ ψ × [J₂ space integrand] dξ = C_N ∫ ρ^Q F d(ln ρ)` over the
/// transition annulus.
pub fn j2_space_factor(family: TestFamily, r: f64, params: &ProblemParams, fam: CutoffFamily) -> Result<QuadResult> {
    check_scale(r)?;
    let sigma = SigmaProfile::new(params)?;
    let (lo, hi) = family.transition(r);
    let f = |s: f64| {
        let v = j2_log_density(family, s, r, params, &sigma, fam).map_or(0.0, f64::exp);
        if v.is_finite() {
            v
        } else {
            f64::NAN
        }
    };
    let q = adaptive(f, lo.ln(), hi.ln(), opts())?;
    let c = c_n(params.ctx);
    Ok(QuadResult {
        value: c * q.value,
        error_estimate: c * q.error_estimate,
        evaluations: q.evaluations,
        method: QuadMethod::Radial,
    })
}

fn combine_sum(a: QuadResult, b: QuadResult) -> QuadResult {
    QuadResult {
        value: a.value + b.value,
        error_estimate: a.error_estimate + b.error_estimate,
        evaluations: a.evaluations + b.evaluations,
        method: QuadMethod::Radial,
    }
}

fn combine_product(a: QuadResult, b: QuadResult) -> QuadResult {
    QuadResult {
        value: a.value * b.value,
        error_estimate: a.value.abs() * b.error_estimate + b.value.abs() * a.error_estimate,
        evaluations: a.evaluations + b.evaluations,
        method: QuadMethod::Radial,
    }
}

/// Time and space factors of a separable functional.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub time: QuadResult,
    pub space: QuadResult,
    pub total: QuadResult,
}

pub fn j1_split(family: TestFamily, big_t: f64, r: f64, params: &ProblemParams, fam: CutoffFamily) -> Result<Split> {
    let time = j1_time_factor(big_t, params.k, params.p, fam)?;
    let space = j1_space_factor(family, r, params, fam)?;
    Ok(Split { time, space, total: combine_product(time, space) })
}

pub fn j2_split(family: TestFamily, big_t: f64, r: f64, params: &ProblemParams, fam: CutoffFamily) -> Result<Split> {
    let time = beta_integral(big_t, fam)?;
    let space = j2_space_factor(family, r, params, fam)?;
    Ok(Split { time, space, total: combine_product(time, space) })
}

/// `J₁(φ) = ∫ φ^{−1/(p−1)} |∂_t^k φ|^{p/(p−1)} V^{−1/(p−1)} ψ dξ dt`.
pub fn j1(family: TestFamily, big_t: f64, r: f64, params: &ProblemParams, fam: CutoffFamily) -> Result<QuadResult> {
    Ok(j1_split(family, big_t, r, params, fam)?.total)
}

/// `J₂(φ) = ∫ φ^{−1/(p−1)} |−Δ_H φ + (λ/ρ²)ψφ|^{p/(p−1)} V^{−1/(p−1)} ψ^{−1/(p−1)} dξ dt`.
pub fn j2(family: TestFamily, big_t: f64, r: f64, params: &ProblemParams, fam: CutoffFamily) -> Result<QuadResult> {
    Ok(j2_split(family, big_t, r, params, fam)?.total)
}

/// `∫_{lo < ρ < hi} V^{−1/(p−1)} K ψ dξ` for a radial `V`.
pub fn weighted_k_integral<V: Fn(f64) -> f64>(lo: f64, hi: f64, params: &ProblemParams, v: V) -> Result<QuadResult> {
    let sigma = SigmaProfile::new(params)?;
    let e = -1.0 / (params.p - 1.0);
    radial_integral_with(|rho: f64| v(rho).powf(e) * sigma.eval(rho), Annulus::new(lo, hi)?, params.ctx, opts())
}

/// `η(R) = ∫_{B_H \ B̄(0, 1/(2R))} V^{−1/(p−1)} K ψ dξ`.
pub fn eta<V: Fn(f64) -> f64>(r: f64, params: &ProblemParams, v: V) -> Result<f64> {
    if !(r > 0.5 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("eta needs R > 1/2, got {r}")));
    }
    let q = weighted_k_integral(0.5 / r, 1.0, params, v).map_err(|e| {
        Error::Quadrature(format!("eta({r:e}) diverges or is unresolved: {e}"))
    })?;
    Ok(q.value)
}

/// `e^{log_scale} ∫_{lo < ρ < hi} ρ^{−e/(p−1)} K ψ dξ`, integrated in `ln ρ`
/// with the scale folded into the exponent so that no factor overflows.
fn scaled_power_k_integral(lo: f64, hi: f64, e: f64, log_scale: f64, params: &ProblemParams) -> Result<f64> {
    let sigma = SigmaProfile::new(params)?;
    let w = params.q() - e / (params.p - 1.0);
    let f = |s: f64| (w * s + sigma.log_eval(s) + log_scale).exp();
    Ok(c_n(params.ctx) * adaptive(f, lo.ln(), hi.ln(), opts())?.value)
}

/// `R^{2p/(p−1)} ∫_{1/(2R) < ρ < 1/R} V^{−1/(p−1)} K ψ dξ`, the bound for the
/// `γ_R` part of `J₂`.
pub fn gamma_transition_bound(r: f64, params: &ProblemParams) -> Result<f64> {
    check_scale(r)?;
    let (lo, hi) = TestFamily::Gamma.transition(r);
    let log_scale = 2.0 * params.p / (params.p - 1.0) * r.ln();
    scaled_power_k_integral(lo, hi, params.a, log_scale, params)
}

/// `(ln R)^{−p/(p−1)} ∫_{1/R < ρ < R^{−1/2}} V^{−1/(p−1)} K ψ ρ^{−2p/(p−1)} dξ`,
/// the bound for the `μ_R` part of `J₂`.
pub fn mu_transition_bound(r: f64, params: &ProblemParams) -> Result<f64> {
    check_scale(r)?;
    let (lo, hi) = TestFamily::Mu.transition(r);
    let log_scale = -params.p / (params.p - 1.0) * r.ln().ln();
    scaled_power_k_integral(lo, hi, params.a + 2.0 * params.p, log_scale, params)
}

/// `1 − kp/(p−1)`, the exponent of `T` in the `J₁` time factor.
pub fn time_exponent(k: u32, p: f64) -> f64 {
    1.0 - k as f64 * p / (p - 1.0)
}

/// Checks `φ = β_T Γ_R ≥ 0`, and `φ = 0` at `t ∈ {0} ∪ [T, ∞)`, on the unit
/// sphere and inside the inner cutoff radius, on dense grids.
pub fn check_admissibility(family: TestFamily, big_t: f64, r: f64, params: &ProblemParams, fam: CutoffFamily) -> Result<CheckOutcome> {
    check_scale(r)?;
    check_time_scale(big_t)?;
    let sigma = SigmaProfile::new(params)?;
    let (lo, _) = family.transition(r);
    let phi = |t: f64, rho: f64| beta_t(t, big_t, fam) * sigma.eval(rho) * family.cutoff(rho, r, fam);
    let mut worst = 0.0f64;
    let mut samples = 0;
    let n = 200;
    for i in 0..=n {
        let t = 2.0 * big_t * i as f64 / n as f64;
        for j in 1..=n {
            let rho = (lo * 1e-3).powf(1.0 - j as f64 / n as f64);
            let v = phi(t, rho);
            samples += 1;
            if !v.is_finite() {
                worst = f64::INFINITY;
                continue;
            }
            worst = worst.max(-v);
            let must_vanish = t == 0.0 || t >= big_t || rho <= lo || j == n;
            if must_vanish {
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(CheckOutcome::at_most(
        format!("admissibility of beta_T x {family:?} (T = {big_t:e}, R = {r:e})"),
        worst,
        0.0,
        "admissible test functions: nonnegative, vanishing on the sphere, near t = 0, for t >= T and near the origin",
    )
    .with_samples(samples))
}

/// Least-squares line through `(ln scale, ln value)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn scaling_fit(values: &[(f64, f64)]) -> Result<ScalingFit> {
    if values.len() < 4 {
        return Err(Error::InvalidParameter(format!("scaling fit needs at least 4 points, got {}", values.len())));
    }
    if let Some(&(s, v)) = values.iter().find(|(s, v)| !(*s > 0.0 && *v > 0.0 && s.is_finite() && v.is_finite())) {
        return Err(Error::InvalidParameter(format!("scaling fit needs positive finite data, got ({s}, {v})")));
    }
    let (min, max) = values.iter().fold((f64::INFINITY, 0.0f64), |(a, b), (s, _)| (a.min(*s), b.max(*s)));
    if max / min < 10.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter(format!("scales must span a decade, got [{min}, {max}]")));
    }
    let points: Vec<(f64, f64)> = values.iter().map(|(s, v)| (s.ln(), v.ln())).collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy <= f64::EPSILON * n * my.abs().max(1.0) { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Ok(ScalingFit { slope, intercept, r_squared, points })
}

/// `{10, 10^{1.5}, …, 10⁴}`.
pub fn default_scale_grid() -> Vec<f64> {
    (2..=8).map(|i| 10f64.powf(i as f64 / 2.0)).collect()
}
