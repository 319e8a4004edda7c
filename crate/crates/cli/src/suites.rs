//! Invariant suites over the group, calculus, quadrature and barrier layers.

use std::f64::consts::PI;

use koranyi_core::check::CheckOutcome;
use koranyi_core::hcalc::{hgrad, hlap, hlap_divform, radial_lap, Gauge, Power, RadialLift};
use koranyi_core::hgroup::random_unit_vector;
use koranyi_core::hquad::{mc_annulus, radial_integral, Annulus};
use koranyi_core::spectrum::{
    boundary_flux, check_k_boundary, check_k_harmonic, hardy_threshold, sample_points, ProblemParams, SampleSpec,
};
use koranyi_core::{GroupContext, HPoint, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{IdentityTolerances, VerifyConfig};

/// Largest value and its index; NaN counts as largest.
fn worst(values: &[f64]) -> Option<(usize, f64)> {
    values
        .iter()
        .copied()
        .enumerate()
        .reduce(|best, cur| if cur.1.is_nan() || (!best.1.is_nan() && cur.1 > best.1) { cur } else { best })
}

fn outcome(name: String, values: &[f64], points: &[HPoint], tol: f64, cite: &str) -> CheckOutcome {
    let (i, w) = worst(values).unwrap_or((0, 0.0));
    let mut c = CheckOutcome::at_most(name, w, tol, cite).with_samples(values.len());
    if let Some(p) = points.get(i) {
        c = c.with_worst(p.coords());
    }
    c
}

fn box_point(rng: &mut ChaCha8Rng, n: usize, r: f64) -> HPoint {
    let c: Vec<f64> = (0..2 * n + 1).map(|_| rng.random_range(-r..r)).collect();
    HPoint::from_coords(&c).expect("2N + 1 coordinates")
}

fn max_diff(a: &HPoint, b: &HPoint) -> f64 {
    a.coords().iter().zip(b.coords()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Associativity, inverses and identity on random triples in `[-1, 1]^{2N+1}`.
pub fn group_axioms(ctx: GroupContext, triples: usize, seed: u64, tol: f64) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ctx.n();
    let pts: Vec<(HPoint, HPoint, HPoint)> =
        (0..triples).map(|_| (box_point(&mut rng, n, 1.0), box_point(&mut rng, n, 1.0), box_point(&mut rng, n, 1.0))).collect();
    let errs: Vec<f64> = pts
        .par_iter()
        .map(|(a, b, c)| {
            let left = a.compose(b)?.compose(c)?;
            let right = a.compose(&b.compose(c)?)?;
            let e = a.compose(&a.inverse())?;
            let id = a.compose(&HPoint::origin(n))?;
            let scale = left.coords().iter().fold(1.0f64, |m, v| m.max(v.abs()));
            Ok((max_diff(&left, &right) / scale).max(max_diff(&e, &HPoint::origin(n))).max(max_diff(&id, a)))
        })
        .collect::<Result<_>>()?;
    let firsts: Vec<HPoint> = pts.into_iter().map(|t| t.0).collect();
    Ok(outcome(
        format!("group axioms (N = {n})"),
        &errs,
        &firsts,
        tol,
        "group law: associativity, inverse -xi, identity at the origin",
    ))
}

/// Points with `ρ ∈ [rho_lo, rho_hi]`, `ψ ≥ psi_min` and random direction.
fn polar_points(ctx: GroupContext, count: usize, seed: u64, rho: (f64, f64), psi_min: f64) -> Result<Vec<HPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t0 = psi_min.asin();
    (0..count)
        .map(|_| {
            let r = rng.random_range(rho.0..rho.1);
            let theta = rng.random_range(t0..PI - t0);
            let omega = random_unit_vector(&mut rng, 2 * ctx.n());
            HPoint::from_polar(r, theta, &omega)
        })
        .collect()
}

/// `|∇_H ρ|² = ψ` at random points.
pub fn gauge_gradient(ctx: GroupContext, count: usize, seed: u64, tol: f64) -> Result<CheckOutcome> {
    let pts = polar_points(ctx, count, seed, (0.05, 2.0), 1e-3)?;
    let errs: Vec<f64> = pts
        .par_iter()
        .map(|p| {
            let g: f64 = hgrad(&Gauge, p).iter().map(|v| v * v).sum();
            let psi = p.psi()?;
            Ok((g - psi).abs() / psi)
        })
        .collect::<Result<_>>()?;
    Ok(outcome(
        format!("|grad_H rho|^2 = psi (N = {})", ctx.n()),
        &errs,
        &pts,
        tol,
        "horizontal gradient of the gauge: |grad_H rho|^2 = psi",
    ))
}

/// Radial formula and divergence form against the hyper-dual Kohn-Laplacian
/// for `ρ^s`, errors scaled by `ρ^{s−2}`.
pub fn radial_and_divergence(
    ctx: GroupContext,
    count: usize,
    seed: u64,
    tol_radial: f64,
    tol_div: f64,
) -> Result<[CheckOutcome; 2]> {
    let pts = polar_points(ctx, count, seed, (0.3, 2.0), 0.05)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let exps: Vec<f64> = (0..count).map(|_| rng.random_range(-3.0..3.0)).collect();
    let errs: Vec<(f64, f64)> = pts
        .par_iter()
        .zip(&exps)
        .map(|(p, &s)| {
            let lift = RadialLift(Power(s));
            let rho = p.knorm();
            let full = hlap(&lift, p);
            let radial = p.psi()? * radial_lap(&Power(s), rho, ctx)?;
            let div = hlap_divform(&lift, p, 1e-4 * rho)?;
            let scale = rho.powf(s - 2.0);
            Ok(((full - radial).abs() / scale, (div - full).abs() / scale.max(1.0)))
        })
        .collect::<Result<_>>()?;
    let (radial, div): (Vec<f64>, Vec<f64>) = errs.into_iter().unzip();
    Ok([
        outcome(
            format!("radial formula vs Kohn-Laplacian (N = {})", ctx.n()),
            &radial,
            &pts,
            tol_radial,
            "Kohn-Laplacian of a radial function: psi (f'' + (Q-1) f' / rho)",
        ),
        outcome(
            format!("divergence form vs Kohn-Laplacian (N = {})", ctx.n()),
            &div,
            &pts,
            tol_div,
            "Kohn-Laplacian as div(A(z) grad u)",
        ),
    ])
}

/// The exponents `s` of the polar-formula family `ψ ρ^s`.
pub fn polar_family(ctx: GroupContext) -> [f64; 5] {
    [-(ctx.q() as f64) + 0.5, -2.0, 0.0, 1.0, 3.0]
}

/// MC estimate of `∫ ψ ρ^s` over `ann`. A ball whose integrand has infinite
/// variance is split into the dyadic shells `(2^{-j-1}R, 2^{-j}R)`, each a
/// dilate of the outermost one scaled by `2^{-j(Q+s)}`.
pub fn mc_power(ann: Annulus, s: f64, samples: u64, seed: u64, ctx: GroupContext) -> Result<(f64, f64)> {
    let q = ctx.q() as f64;
    let f = |p: &HPoint| p.z_norm_sq() / p.knorm().powi(2) * p.knorm().powf(s);
    if ann.r_inner() > 0.0 || 2.0 * s + q > 0.0 {
        let r = mc_annulus(f, ann, samples, seed, ctx)?;
        return Ok((r.value, r.error_estimate));
    }
    let shell = mc_annulus(f, Annulus::new(0.5 * ann.r_outer(), ann.r_outer())?, samples, seed, ctx)?;
    let series = 1.0 / (1.0 - 2f64.powf(-(q + s)));
    Ok((shell.value * series, shell.error_estimate * series))
}

/// Polar formula against Monte Carlo for the family on `(0.1, 1)` and the
/// unit ball; measured in combined standard errors.
pub fn polar_vs_monte_carlo(ctx: GroupContext, samples: u64, seed: u64, sigmas: f64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for ann in [Annulus::new(0.1, 1.0)?, Annulus::ball(1.0)?] {
        for s in polar_family(ctx) {
            let exact = radial_integral(|r: f64| r.powf(s), ann, ctx)?;
            let (mc, mc_err) = mc_power(ann, s, samples, seed, ctx)?;
            let sigma = (exact.error_estimate.powi(2) + mc_err.powi(2)).sqrt();
            out.push(
                CheckOutcome::at_most(
                    format!("polar formula vs Monte Carlo, psi rho^{s} on ({}, {}) (N = {})", ann.r_inner(), ann.r_outer(), ctx.n()),
                    (exact.value - mc).abs() / sigma,
                    sigmas,
                    "polar integration formula: int psi F = C_N int rho^(Q-1) F(rho) drho",
                )
                .with_samples(samples as usize)
                .with_detail(format!("quadrature {:.12e}, Monte Carlo {mc:.6e} +- {mc_err:.1e}", exact.value)),
            );
        }
    }
    Ok(out)
}

/// `∫_{B_H} ψ dξ = π` for `N = 1`.
pub fn ball_volume(tol: f64) -> Result<CheckOutcome> {
    let ctx = GroupContext::new(1)?;
    let r = radial_integral(|_| 1.0, Annulus::ball(1.0)?, ctx)?;
    Ok(CheckOutcome::close_to(
        "psi-weighted volume of the unit ball (N = 1)",
        r.value,
        PI,
        tol * PI,
        "polar formula with C_1 = 4 pi: int_B psi = pi",
    ))
}

/// Harmonicity and boundary flux of `K` for each `λ` (plus the critical
/// value), and the hand value `2 − Q` of the flux at the equator for `λ = 0`.
pub fn barrier(
    ctx: GroupContext,
    lambdas: &[f64],
    harmonic_points: usize,
    flux_nodes: usize,
    seed: u64,
    tol: &IdentityTolerances,
) -> Result<Vec<CheckOutcome>> {
    let mut all: Vec<f64> = vec![hardy_threshold(ctx)];
    all.extend(lambdas.iter().copied().filter(|&l| l != hardy_threshold(ctx)));
    let pts = sample_points(ctx, &SampleSpec { count: harmonic_points, seed, ..SampleSpec::default() })?;
    let mut out = Vec::new();
    for lambda in all {
        let params = ProblemParams::new(ctx, lambda, 0.0, 2.0, 1)?;
        out.push(check_k_harmonic(&params, &pts, tol.harmonic)?);
        out.push(check_k_boundary(&params, flux_nodes, tol.flux)?.0);
    }
    let params = ProblemParams::new(ctx, 0.0, 0.0, 2.0, 1)?;
    let mut e1 = vec![0.0; 2 * ctx.n() + 1];
    e1[0] = 1.0;
    let (lhs, _) = boundary_flux(&params, &HPoint::from_coords(&e1)?)?;
    let q = ctx.q() as f64;
    out.push(CheckOutcome::close_to(
        format!("equator flux by hand (lambda = 0, N = {})", ctx.n()),
        lhs,
        2.0 - q,
        tol.flux * (q - 2.0),
        "normal derivative of K at (1, 0, ..., 0): sigma'(1) = 2 - Q",
    ));
    Ok(out)
}

/// Everything `verify-identities` runs.
pub fn identities(cfg: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let ctx = GroupContext::new(cfg.n)?;
    let tol = &cfg.tolerances;
    let mut out = vec![
        group_axioms(ctx, cfg.triples, cfg.seed, tol.group)?,
        gauge_gradient(ctx, cfg.points, cfg.seed.wrapping_add(1), tol.gradient)?,
    ];
    out.extend(radial_and_divergence(ctx, cfg.points, cfg.seed.wrapping_add(2), tol.radial, tol.divergence_form)?);
    out.extend(polar_vs_monte_carlo(ctx, cfg.mc_samples as u64, cfg.seed.wrapping_add(3), tol.monte_carlo_sigmas)?);
    if cfg.n == 1 {
        out.push(ball_volume(tol.ball_volume)?);
    }
    out.extend(barrier(ctx, &cfg.lambdas, cfg.harmonic_points, cfg.flux_nodes, cfg.seed.wrapping_add(4), tol)?);
    Ok(out)
}
