//! The Hardy operator `−(1/ψ)Δ_H + λ/ρ²` on radial functions: the exponents
//! `α±`, the barrier `σ_λ` and its lift `K`, the existence/nonexistence
//! classifier for `V = |ξ|_H^a`, and the probes used to test it.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{worst_of, CheckOutcome};
use crate::error::{Error, Result};
use crate::hcalc::{euclid_grad, hlap, Gauge, RadialLift, RadialProfile, Scalar};
use crate::hgroup::{random_unit_vector, sphere_point, GroupContext, HPoint, Hemisphere};
use crate::hquad::{radial_integral, surface_integral, Annulus};

/// `λ` within this distance of `−((Q−2)/2)²` is treated as critical.
pub const CRITICAL_TOL: f64 = 1e-12;

/// Full parameter state of the problem with `V = |ξ|_H^a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    #[serde(flatten)]
    pub ctx: GroupContext,
    pub lambda: f64,
    pub a: f64,
    pub p: f64,
    #[serde(default = "default_k")]
    pub k: u32,
}

fn default_k() -> u32 {
    1
}

impl ProblemParams {
    pub fn new(ctx: GroupContext, lambda: f64, a: f64, p: f64, k: u32) -> Result<Self> {
        let params = Self { ctx, lambda, a, p, k };
        params.validate()?;
        Ok(params)
    }

    /// Parameters with `λ` exactly at the Hardy threshold.
    pub fn critical(ctx: GroupContext, a: f64, p: f64, k: u32) -> Result<Self> {
        Self::new(ctx, hardy_threshold(ctx), a, p, k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.a.is_finite() && self.p.is_finite()) {
            return Err(Error::InvalidParameter("lambda, a and p must be finite".into()));
        }
        if self.lambda < hardy_threshold(self.ctx) - CRITICAL_TOL {
            return Err(Error::InvalidParameter(format!(
                "lambda = {} is below the Hardy threshold {}",
                self.lambda,
                hardy_threshold(self.ctx)
            )));
        }
        if !(self.p > 1.0) {
            return Err(Error::InvalidParameter(format!("p must exceed 1, got {}", self.p)));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(())
    }

    pub fn q(&self) -> f64 {
        self.ctx.q() as f64
    }

    pub fn is_critical(&self) -> bool {
        is_critical_lambda(self.ctx, self.lambda)
    }

    pub fn alphas(&self) -> Result<AlphaPair> {
        alphas(self)
    }

    /// `Q − 2 + α⁻`, the coefficient of `p` in the classifying inequality.
    pub fn l_coef(&self) -> Result<f64> {
        Ok(self.q() - 2.0 + self.alphas()?.alpha_minus)
    }

    /// `Q + a + α⁻`, the right-hand side of the classifying inequality.
    pub fn rhs(&self) -> Result<f64> {
        Ok(self.q() + self.a + self.alphas()?.alpha_minus)
    }

    pub fn with_p(self, p: f64) -> Self {
        Self { p, ..self }
    }
}

/// `−((Q−2)/2)²`, the sharp Hardy constant on `ℍ^N` with a sign.
pub fn hardy_threshold(ctx: GroupContext) -> f64 {
    let h = (ctx.q() as f64 - 2.0) / 2.0;
    -h * h
}

pub fn is_critical_lambda(ctx: GroupContext, lambda: f64) -> bool {
    (lambda - hardy_threshold(ctx)).abs() <= CRITICAL_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaPair {
    pub alpha_minus: f64,
    pub alpha_plus: f64,
}

/// `α± = −(Q−2)/2 ± √(λ + ((Q−2)/2)²)`.
pub fn alphas(params: &ProblemParams) -> Result<AlphaPair> {
    alphas_for(params.ctx, params.lambda)
}

pub fn alphas_for(ctx: GroupContext, lambda: f64) -> Result<AlphaPair> {
    let h = (ctx.q() as f64 - 2.0) / 2.0;
    let disc = lambda + h * h;
    if disc < -CRITICAL_TOL || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda = {lambda} is below the Hardy threshold {}",
            -h * h
        )));
    }
    let root = if is_critical_lambda(ctx, lambda) { 0.0 } else { disc.sqrt() };
    Ok(AlphaPair { alpha_minus: -h - root, alpha_plus: -h + root })
}

/// The radial barrier `σ_λ` as a differentiable profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaProfile {
    pub alphas: AlphaPair,
    pub critical: bool,
}

impl SigmaProfile {
    pub fn new(params: &ProblemParams) -> Result<Self> {
        Ok(Self { alphas: alphas(params)?, critical: params.is_critical() })
    }

    /// `σ_λ'(1)`: `−2√(λ + ((Q−2)/2)²)` off the threshold, `−1` on it.
    pub fn boundary_slope(&self) -> f64 {
        if self.critical {
            -1.0
        } else {
            self.alphas.alpha_minus - self.alphas.alpha_plus
        }
    }

    /// `ln σ_λ(e^s)` for `s < 0`, free of overflow for very negative `s`.
    pub fn log_eval<S: Scalar>(&self, s: S) -> S {
        let lead = s * self.alphas.alpha_minus;
        if self.critical {
            lead + (-s).ln()
        } else {
            let gap = self.alphas.alpha_plus - self.alphas.alpha_minus;
            lead + (-(s * gap).exp() + 1.0).ln()
        }
    }
}

impl RadialProfile for SigmaProfile {
    fn eval<S: Scalar>(&self, s: S) -> S {
        let lead = s.powf(self.alphas.alpha_minus);
        if self.critical {
            -(lead * s.ln())
        } else {
            lead - s.powf(self.alphas.alpha_plus)
        }
    }
}

/// `σ_λ(s)`.
pub fn sigma_lambda(s: f64, params: &ProblemParams) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("sigma_lambda needs s > 0, got {s}")));
    }
    Ok(SigmaProfile::new(params)?.eval(s))
}

/// `K(ξ) = σ_λ(|ξ|_H)` on the punctured closed unit ball.
pub fn k_func(xi: &HPoint, params: &ProblemParams) -> Result<f64> {
    let rho = xi.knorm();
    if !(rho > 0.0 && rho <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!("K is defined for 0 < |xi|_H <= 1, got {rho}")));
    }
    sigma_lambda(rho.min(1.0), params)
}

/// Random interior sample for the harmonicity check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub count: usize,
    pub seed: u64,
    pub rho_min: f64,
    pub psi_min: f64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self { count: 2000, seed: 7, rho_min: 1e-3, psi_min: 0.05 }
    }
}

/// Points with `ρ` log-uniform on `[rho_min, 1]`, `ψ ≥ psi_min` and uniform
/// horizontal direction.
pub fn sample_points(ctx: GroupContext, spec: &SampleSpec) -> Result<Vec<HPoint>> {
    if !(spec.rho_min > 0.0 && spec.rho_min < 1.0) || !(0.0..1.0).contains(&spec.psi_min) {
        return Err(Error::InvalidParameter("need 0 < rho_min < 1 and 0 <= psi_min < 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let t0 = spec.psi_min.asin();
    (0..spec.count)
        .map(|_| {
            let rho = spec.rho_min.powf(rng.random::<f64>());
            let theta = rng.random_range(t0..std::f64::consts::PI - t0);
            let omega = random_unit_vector(&mut rng, 2 * ctx.n());
            HPoint::from_polar(rho, theta, &omega)
        })
        .collect()
}

/// Maximum over `points` of `|−(1/ψ)Δ_H K + (λ/ρ²)K| / (1 + |K|/ρ²)`, with
/// `Δ_H` evaluated on the full lift by hyper-dual differentiation.
pub fn check_k_harmonic(params: &ProblemParams, points: &[HPoint], tol: f64) -> Result<CheckOutcome> {
    let profile = SigmaProfile::new(params)?;
    let lift = RadialLift(profile);
    let residuals: Vec<f64> = points
        .par_iter()
        .map(|xi| {
            let rho = xi.knorm();
            let psi = xi.psi().unwrap_or(f64::NAN);
            let k = profile.eval(rho);
            let r = -hlap(&lift, xi) / psi + params.lambda * k / (rho * rho);
            r.abs() / (1.0 + k.abs() / (rho * rho))
        })
        .collect();
    let name = format!("K harmonicity (lambda = {})", params.lambda);
    let cite = "K harmonicity, proof of the barrier lemma: radial formula for the Kohn-Laplacian";
    Ok(match worst_of(&residuals) {
        Some((i, w)) => CheckOutcome::at_most(name, w, tol, cite)
            .with_worst(points[i].coords())
            .with_samples(points.len()),
        None => CheckOutcome::at_most(name, 0.0, tol, cite),
    })
}

/// Boundary node of the unit Korányi sphere together with the flux data.
#[derive(Clone, Debug, PartialEq)]
pub struct FluxSample {
    pub point: HPoint,
    pub chart_r: f64,
    pub side: Hemisphere,
    pub lhs: f64,
    pub rhs: f64,
}

/// `A(z)∇K · n` and `σ'(1) ψ / |∇ρ|` at a boundary point.
pub fn boundary_flux(params: &ProblemParams, point: &HPoint) -> Result<(f64, f64)> {
    let profile = SigmaProfile::new(params)?;
    let grad_k = euclid_grad(&RadialLift(profile), point);
    let grad_rho = euclid_grad(&Gauge, point);
    let norm = grad_rho.iter().map(|g| g * g).sum::<f64>().sqrt();
    let a = point.a_matrix();
    let d = grad_k.len();
    let lhs: f64 = (0..d)
        .map(|i| (0..d).map(|j| a[(i, j)] * grad_k[j]).sum::<f64>() * grad_rho[i] / norm)
        .sum();
    let rhs = profile.boundary_slope() * point.psi()? / norm;
    Ok((lhs, rhs))
}

/// Deterministic boundary nodes with `ψ ≥ psi_min`: stratified chart radii,
/// pseudo-random directions, both hemispheres, plus the equator point
/// `(1, 0, …, 0)`.
pub fn boundary_nodes(ctx: GroupContext, nodes: usize, psi_min: f64, seed: u64) -> Result<Vec<(HPoint, f64, Hemisphere)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r_min = psi_min.max(0.0).sqrt();
    let mut out = Vec::with_capacity(nodes + 1);
    let mut e1 = vec![0.0; 2 * ctx.n()];
    e1[0] = 1.0;
    let (eq, _) = sphere_point(1.0, &e1, Hemisphere::Upper)?;
    out.push((eq, 1.0, Hemisphere::Upper));
    for i in 0..nodes {
        let r = r_min + (1.0 - r_min) * (i as f64 + 0.5) / nodes as f64;
        let side = if i % 2 == 0 { Hemisphere::Upper } else { Hemisphere::Lower };
        let omega = random_unit_vector(&mut rng, 2 * ctx.n());
        let (p, _) = sphere_point(r, &omega, side)?;
        out.push((p, r, side));
    }
    Ok(out)
}

/// Worst relative error of the boundary-flux identity
/// `A∇K·n = σ'(1) ψ / |∇ρ|` over `nodes` boundary points with `ψ ≥ 0.05`.
pub fn check_k_boundary(params: &ProblemParams, nodes: usize, tol: f64) -> Result<(CheckOutcome, Vec<FluxSample>)> {
    let pts = boundary_nodes(params.ctx, nodes, 0.05, 0x5eed)?;
    let samples: Vec<FluxSample> = pts
        .into_par_iter()
        .map(|(point, chart_r, side)| {
            let (lhs, rhs) = boundary_flux(params, &point)?;
            Ok(FluxSample { point, chart_r, side, lhs, rhs })
        })
        .collect::<Result<_>>()?;
    let rel: Vec<f64> = samples.iter().map(|s| (s.lhs - s.rhs).abs() / s.rhs.abs()).collect();
    let name = format!("boundary flux identity (lambda = {})", params.lambda);
    let cite = "barrier lemma, part (iv): K vanishes on the sphere with normal derivative sigma'(1) psi / |grad rho|";
    let (i, w) = worst_of(&rel).expect("at least the equator node is present");
    Ok((
        CheckOutcome::at_most(name, w, tol, cite)
            .with_worst(samples[i].point.coords())
            .with_samples(samples.len()),
        samples,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// No weak solution for any boundary datum in `L^{1,+}`.
    NonexistenceAllF,
    /// An explicit stationary solution exists for some boundary datum.
    ExistenceWitness,
    /// The borderline case at critical `λ` that the theory leaves open.
    OpenCritical,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NonexistenceAllF => "NonexistenceAllF",
            Verdict::ExistenceWitness => "ExistenceWitness",
            Verdict::OpenCritical => "OpenCritical",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdKind {
    First,
    Second,
    Third,
}

/// A critical exponent: a value of `p` (first/second kind) or of `a` (third).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub kind: ThresholdKind,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub params: ProblemParams,
    pub verdict: Verdict,
    pub citation: String,
    pub threshold: Option<Threshold>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Regime {
    Critical,
    Negative,
    Zero,
    Positive,
}

fn regime(ctx: GroupContext, lambda: f64) -> Regime {
    if is_critical_lambda(ctx, lambda) {
        Regime::Critical
    } else if lambda.abs() <= CRITICAL_TOL {
        Regime::Zero
    } else if lambda < 0.0 {
        Regime::Negative
    } else {
        Regime::Positive
    }
}

/// The critical exponent for `(Q, λ, a)`, if one exists.
///
/// For `λ < 0` with `a > −2` it is `p* = 1 + (a+2)/(Q−2+α⁻)` of the second
/// kind, for `λ > 0` with `a < −2` the same formula gives a threshold of the
/// first kind, and for `λ = 0` the threshold is `a* = −2` of the third kind.
pub fn critical_exponent(ctx: GroupContext, lambda: f64, a: f64) -> Result<Option<Threshold>> {
    let am = alphas_for(ctx, lambda)?.alpha_minus;
    let l = ctx.q() as f64 - 2.0 + am;
    let p_star = 1.0 + (a + 2.0) / l;
    Ok(match regime(ctx, lambda) {
        Regime::Zero => Some(Threshold { kind: ThresholdKind::Third, value: -2.0 }),
        Regime::Critical | Regime::Negative if a > -2.0 => Some(Threshold { kind: ThresholdKind::Second, value: p_star }),
        Regime::Positive if a < -2.0 => Some(Threshold { kind: ThresholdKind::First, value: p_star }),
        _ => None,
    })
}

/// Decides existence/nonexistence from `(Q−2+α⁻)p` versus `Q+a+α⁻`.
pub fn classify(params: &ProblemParams) -> Result<Classification> {
    params.validate()?;
    let lhs = params.l_coef()? * params.p;
    let rhs = params.rhs()?;
    let critical = params.is_critical();
    let eq_tol = 1e-12 * rhs.abs().max(1.0);
    let verdict = if (lhs - rhs).abs() <= eq_tol {
        if critical {
            Verdict::OpenCritical
        } else {
            Verdict::NonexistenceAllF
        }
    } else if lhs > rhs {
        Verdict::NonexistenceAllF
    } else {
        Verdict::ExistenceWitness
    };
    let threshold = critical_exponent(params.ctx, params.lambda, params.a)?;
    let citation = citation_for(regime(params.ctx, params.lambda), params.a, verdict);
    Ok(Classification { params: *params, verdict, citation, threshold, lhs, rhs })
}

fn citation_for(regime: Regime, a: f64, verdict: Verdict) -> String {
    let low_a = a <= -2.0;
    let text = match (regime, verdict) {
        (Regime::Critical, Verdict::OpenCritical) => "critical lambda, p at the threshold: case left open by the theory",
        (Regime::Critical, Verdict::NonexistenceAllF) if low_a => "critical lambda, clause I(i): a <= -2, nonexistence for all p > 1",
        (Regime::Critical, Verdict::NonexistenceAllF) => "critical lambda, clause I(ii): p above 1 + 2(a+2)/(Q-2), nonexistence",
        (Regime::Critical, Verdict::ExistenceWitness) => "critical lambda, clause II: 1 < p < 1 + 2(a+2)/(Q-2), stationary solutions exist",
        (Regime::Negative, Verdict::NonexistenceAllF) if low_a => "negative lambda, clause I(i): a <= -2, nonexistence for all p > 1",
        (Regime::Negative, Verdict::NonexistenceAllF) => "negative lambda, clause I(ii): p >= 1 + (a+2)/(Q-2+alpha-), nonexistence",
        (Regime::Negative, Verdict::ExistenceWitness) => "negative lambda, clause II: 1 < p < 1 + (a+2)/(Q-2+alpha-), stationary solutions exist",
        (Regime::Zero, Verdict::NonexistenceAllF) => "lambda = 0, clause I: a <= -2, nonexistence for all p > 1",
        (Regime::Zero, Verdict::ExistenceWitness) => "lambda = 0, clause II: a > -2, stationary solutions exist for all p > 1",
        (Regime::Positive, Verdict::NonexistenceAllF) => "positive lambda, clause I(ii): a < -2 and 1 < p <= 1 + (a+2)/(Q-2+alpha-), nonexistence",
        (Regime::Positive, Verdict::ExistenceWitness) if a < -2.0 => {
            "positive lambda, clause II: a < -2 and p > 1 + (a+2)/(Q-2+alpha-), stationary solutions exist"
        }
        (Regime::Positive, Verdict::ExistenceWitness) => {
            "positive lambda, a >= -2: the governing inequality gives stationary solutions for all p > 1 \
             (the published corollary's clause I(i) states the opposite)"
        }
        _ => "governing inequality (Q-2+alpha-) p versus Q+a+alpha-",
    };
    text.to_string()
}

/// Classifies every tuple of a parameter grid in parallel; output order is
/// lambda-major, then `a`, then `p`.
pub fn classify_grid(ctx: GroupContext, lambdas: &[f64], a_list: &[f64], p_list: &[f64]) -> Result<Vec<Classification>> {
    let tuples: Vec<(f64, f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| a_list.iter().flat_map(move |&a| p_list.iter().map(move |&p| (l, a, p))))
        .collect();
    tuples
        .par_iter()
        .map(|&(l, a, p)| classify(&ProblemParams::new(ctx, l, a, p, 1)?))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct L1PlusResult {
    pub value: f64,
    pub error_estimate: f64,
    pub member: bool,
}

/// `∫_{∂B_H} f ψ / |∇ρ| dH_{2N}`; `f` belongs to `L^{1,+}` when this is
/// positive beyond the quadrature error.
pub fn l1plus_test<F: Fn(&HPoint) -> f64 + Sync>(f: F, nodes: usize, ctx: GroupContext) -> Result<L1PlusResult> {
    let weight = |p: &HPoint| {
        let g = euclid_grad(&Gauge, p);
        p.z_norm_sq() / g.iter().map(|v| v * v).sum::<f64>().sqrt()
    };
    let signed = surface_integral(|p: &HPoint| f(p) * weight(p), nodes, ctx)?;
    let magnitude = surface_integral(|p: &HPoint| f(p).abs() * weight(p), nodes, ctx)?;
    let noise = signed.error_estimate.max(1e-12 * magnitude.value);
    Ok(L1PlusResult {
        value: signed.value,
        error_estimate: signed.error_estimate,
        member: signed.value > noise,
    })
}

/// `R^{2p/(p−1)} ∫_{1/(2R) < ρ < 1/R} V^{−1/(p−1)} K ψ dξ` for each `R`.
pub fn liminf_probe<V: Fn(f64) -> f64>(v: V, params: &ProblemParams, r_list: &[f64]) -> Result<Vec<(f64, f64)>> {
    params.validate()?;
    if r_list.windows(2).any(|w| w[1] <= w[0]) || r_list.first().is_some_and(|&r| r < 1.0) {
        return Err(Error::InvalidParameter("R values must be increasing and at least 1".into()));
    }
    let sigma = SigmaProfile::new(params)?;
    let e = -1.0 / (params.p - 1.0);
    let scale = 2.0 * params.p / (params.p - 1.0);
    r_list
        .iter()
        .map(|&r| {
            let ann = Annulus::new(0.5 / r, 1.0 / r)?;
            let q = radial_integral(|rho: f64| v(rho).powf(e) * sigma.eval(rho), ann, params.ctx)?;
            Ok((r, r.powf(scale) * q.value))
        })
        .collect()
}

/// The exponent `(a+2p)/(p−1) − Q − α⁻` governing [`liminf_probe`] for
/// `V = ρ^a`.
pub fn probe_exponent(params: &ProblemParams) -> Result<f64> {
    Ok((params.a + 2.0 * params.p) / (params.p - 1.0) - params.q() - params.alphas()?.alpha_minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q4(lambda: f64, a: f64, p: f64) -> ProblemParams {
        ProblemParams::new(GroupContext::from_q(4).unwrap(), lambda, a, p, 1).unwrap()
    }

    #[test]
    fn alpha_examples() {
        let al = q4(0.0, 0.0, 2.0).alphas().unwrap();
        assert_eq!((al.alpha_minus, al.alpha_plus), (-2.0, 0.0));
        let al = q4(-1.0, 0.0, 2.0).alphas().unwrap();
        assert_eq!(al.alpha_minus, al.alpha_plus);
        assert_eq!(al.alpha_minus, -1.0);
        let al = q4(3.0, 0.0, 2.0).alphas().unwrap();
        assert_eq!((al.alpha_minus, al.alpha_plus), (-3.0, 1.0));
        assert!(ProblemParams::new(GroupContext::from_q(4).unwrap(), -1.5, 0.0, 2.0, 1).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_lambda(1.0, &q4(2.0, 0.0, 2.0)).unwrap(), 0.0);
        assert!((sigma_lambda(0.5, &q4(3.0, 0.0, 2.0)).unwrap() - 7.5).abs() < 1e-14);
        let e = std::f64::consts::E;
        assert!((sigma_lambda(1.0 / e, &q4(-1.0, 0.0, 2.0)).unwrap() - e).abs() < 1e-14);
        assert!(sigma_lambda(0.0, &q4(0.0, 0.0, 2.0)).is_err());
    }

    #[test]
    fn equator_flux_is_minus_two() {
        let params = ProblemParams::new(GroupContext::new(1).unwrap(), 0.0, 0.0, 2.0, 1).unwrap();
        let p = HPoint::new(vec![1.0], vec![0.0], 0.0).unwrap();
        let (lhs, rhs) = boundary_flux(&params, &p).unwrap();
        assert!((lhs + 2.0).abs() < 1e-14);
        assert!((rhs + 2.0).abs() < 1e-14);
    }

    #[test]
    fn spec_classifications() {
        let c = classify(&q4(0.0, -2.0, 2.0)).unwrap();
        assert_eq!(c.verdict, Verdict::NonexistenceAllF);
        assert_eq!(classify(&q4(0.0, 0.0, 2.0)).unwrap().verdict, Verdict::ExistenceWitness);
        assert_eq!(classify(&q4(-1.0, 0.0, 3.0)).unwrap().verdict, Verdict::OpenCritical);
        let t = critical_exponent(GroupContext::from_q(4).unwrap(), -0.75, 0.0).unwrap().unwrap();
        assert_eq!(t.kind, ThresholdKind::Second);
        assert!((t.value - 5.0).abs() < 1e-12);
        let t = critical_exponent(GroupContext::from_q(4).unwrap(), 0.0, 1.0).unwrap().unwrap();
        assert_eq!((t.kind, t.value), (ThresholdKind::Third, -2.0));
        assert!(critical_exponent(GroupContext::from_q(4).unwrap(), 3.0, 0.0).unwrap().is_none());
    }

    #[test]
    fn params_serde_is_flat() {
        let p = q4(0.5, 1.0, 2.0);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"n\":1") && s.contains("\"q\":4"), "{s}");
        let back: ProblemParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let short: ProblemParams = serde_json::from_str(r#"{"n":2,"lambda":0,"a":0,"p":2}"#).unwrap();
        assert_eq!((short.ctx.q(), short.k), (6, 1));
    }
}
