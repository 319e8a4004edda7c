//! Browser bindings: phase map, witness profile and barrier profile as JSON.

use koranyi_core::hcalc::RadialProfile;
use koranyi_core::spectrum::{classify, hardy_threshold, ProblemParams, SigmaProfile};
use koranyi_core::witness::{build_critical, build_subcritical, verify_witness, VerifyGrid};
use koranyi_core::GroupContext;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn context(q: usize) -> Result<GroupContext, String> {
    GroupContext::from_q(q).map_err(|e| e.to_string())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Verdict grid over `(λ, a)` at fixed `p`; `λ` starts no lower than the
/// Hardy threshold.
pub fn phase_map_json(q: usize, p: f64, lambda_max: f64, a_min: f64, a_max: f64, nx: usize, ny: usize) -> Result<String, String> {
    let ctx = context(q)?;
    let lo = hardy_threshold(ctx);
    if !(lambda_max > lo && a_max > a_min && p > 1.0) {
        return Err(format!("need lambda_max > {lo}, a_max > a_min and p > 1"));
    }
    if nx * ny > 40_000 {
        return Err("at most 40000 cells".into());
    }
    let lambdas = linspace(lo, lambda_max, nx);
    let a_list = linspace(a_min, a_max, ny);
    let mut verdicts = Vec::with_capacity(lambdas.len());
    for &lambda in &lambdas {
        let row = a_list
            .iter()
            .map(|&a| {
                let params = ProblemParams::new(ctx, lambda, a, p, 1).map_err(|e| e.to_string())?;
                classify(&params).map(|c| c.verdict.to_string()).map_err(|e| e.to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        verdicts.push(row);
    }
    let frontier: Vec<[f64; 2]> = lambdas
        .iter()
        .map(|&lambda| {
            let am = ProblemParams::new(ctx, lambda, 0.0, p, 1).and_then(|pr| pr.alphas()).map(|al| al.alpha_minus);
            am.map(|am| [lambda, (q as f64 - 2.0 + am) * p - q as f64 - am])
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    Ok(json!({ "q": q, "p": p, "lambdas": lambdas, "a_list": a_list, "verdicts": verdicts, "frontier": frontier }).to_string())
}

/// Builds the default witness (power or log by `λ`), verifies it and samples
/// `u` and the slack on log-spaced radii.
pub fn witness_profile_json(q: usize, lambda: f64, a: f64, p: f64, critical: bool, points: usize) -> Result<String, String> {
    let ctx = context(q)?;
    let params = if critical {
        ProblemParams::critical(ctx, a, p, 1)
    } else {
        ProblemParams::new(ctx, lambda, a, p, 1)
    }
    .map_err(|e| e.to_string())?;
    let w = if params.is_critical() { build_critical(&params, None, None) } else { build_subcritical(&params, None, None) }
        .map_err(|e| e.to_string())?;
    let grid = VerifyGrid { points: points.clamp(2, 2000), ..VerifyGrid::default() };
    let check = verify_witness(&w, &grid, 1e-10).map_err(|e| e.to_string())?;
    let radii = grid.radii();
    let u: Vec<f64> = radii.iter().map(|&r| w.value(r)).collect();
    let slack: Vec<f64> = radii.iter().map(|&r| w.identity_value(r) - r.powf(a) * w.value(r).powf(p)).collect();
    Ok(json!({
        "witness": w,
        "radii": radii,
        "u": u,
        "slack": slack,
        "max_identity_error": check.max_identity_error,
        "min_slack": check.min_slack,
        "passed": check.passed,
    })
    .to_string())
}

/// `σ_λ` on `(0, 1]` with its exponents and boundary slope.
pub fn barrier_profile_json(q: usize, lambda: f64, points: usize) -> Result<String, String> {
    let params = ProblemParams::new(context(q)?, lambda, 0.0, 2.0, 1).map_err(|e| e.to_string())?;
    let sigma = SigmaProfile::new(&params).map_err(|e| e.to_string())?;
    let s = linspace(0.02, 1.0, points.clamp(2, 2000));
    let values: Vec<f64> = s.iter().map(|&x| sigma.eval(x)).collect();
    Ok(json!({
        "alpha_minus": sigma.alphas.alpha_minus,
        "alpha_plus": sigma.alphas.alpha_plus,
        "critical": sigma.critical,
        "boundary_slope": sigma.boundary_slope(),
        "s": s,
        "sigma": values,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn phase_map(q: usize, p: f64, lambda_max: f64, a_min: f64, a_max: f64, nx: usize, ny: usize) -> Result<String, JsValue> {
    phase_map_json(q, p, lambda_max, a_min, a_max, nx, ny).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn witness_profile(q: usize, lambda: f64, a: f64, p: f64, critical: bool, points: usize) -> Result<String, JsValue> {
    witness_profile_json(q, lambda, a, p, critical, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn barrier_profile(q: usize, lambda: f64, points: usize) -> Result<String, JsValue> {
    barrier_profile_json(q, lambda, points).map_err(|e| JsValue::from_str(&e))
}
