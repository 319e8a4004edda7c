use std::f64::consts::PI;

use koranyi_core::capacity::{
    beta_integral, check_admissibility, default_scale_grid, eta, j1_space_factor, j1_time_factor, j2,
    j2_space_integrand, scaling_fit, CutoffFamily, TestFamily,
};
use koranyi_core::spectrum::ProblemParams;
use koranyi_core::GroupContext;

fn q4(lambda: f64, a: f64, p: f64) -> ProblemParams {
    ProblemParams::new(GroupContext::from_q(4).unwrap(), lambda, a, p, 1).unwrap()
}

fn alpha_minus(q: f64, lambda: f64) -> f64 {
    let h = (q - 2.0) / 2.0;
    -h - (lambda + h * h).max(0.0).sqrt()
}

#[test]
fn time_factor_slopes() {
    for k in [1u32, 2] {
        for p in [1.5, 2.0, 3.0] {
            let fam = CutoffFamily::new(k, p);
            let values: Vec<(f64, f64)> =
                default_scale_grid().into_iter().map(|t| (t, j1_time_factor(t, k, p, fam).unwrap().value)).collect();
            let fit = scaling_fit(&values).unwrap();
            let expected = 1.0 - k as f64 * p / (p - 1.0);
            assert!((fit.slope - expected).abs() <= 0.05, "k={k} p={p}: {} vs {expected}", fit.slope);
        }
    }
}

#[test]
fn time_integral_is_at_most_t() {
    let fam = CutoffFamily::new(2, 2.0);
    for t in default_scale_grid() {
        assert!(beta_integral(t, fam).unwrap().value <= t * (1.0 + 1e-10));
    }
}

#[test]
fn gamma_family_space_exponent() {
    for (lambda, a, p) in [(0.0, 0.0, 2.0), (3.0, 0.0, 2.0), (-0.75, 1.0, 3.0)] {
        let params = q4(lambda, a, p);
        let fam = CutoffFamily::for_params(&params);
        let big_t = 10.0;
        let values: Vec<(f64, f64)> = default_scale_grid()
            .into_iter()
            .map(|r| (r, j2(TestFamily::Gamma, big_t, r, &params, fam).unwrap().value / big_t))
            .collect();
        let fit = scaling_fit(&values).unwrap();
        let expected = (a + 2.0 * p) / (p - 1.0) - 4.0 - alpha_minus(4.0, lambda);
        assert!((fit.slope - expected).abs() <= 0.1, "lambda={lambda}: {} vs {expected}", fit.slope);
        assert!(fit.r_squared >= 0.999);
    }
}

#[test]
fn gamma_family_at_critical_lambda_carries_one_log() {
    // α⁺ = α⁻ gives J₂/T ≈ R (c₁ ln R + c₀) for λ = −1, a = 0, p = 2
    let params = q4(-1.0, 0.0, 2.0);
    let fam = CutoffFamily::for_params(&params);
    let per_r: Vec<f64> = default_scale_grid()
        .into_iter()
        .map(|r| j2(TestFamily::Gamma, 10.0, r, &params, fam).unwrap().value / (10.0 * r))
        .collect();
    let steps: Vec<f64> = per_r.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = steps.iter().sum::<f64>() / steps.len() as f64;
    assert!(mean > 0.0);
    assert!(steps.iter().all(|d| (d / mean - 1.0).abs() < 0.01), "{steps:?}");
}

#[test]
fn mu_family_log_regime_at_equality() {
    // on (L p = Q + a + α⁻) the product decays like (ln R)^{−1/(p−1)}
    for (lambda, a, p) in [(0.0, -2.0, 2.0), (-0.75, 0.0, 5.0), (3.0, -4.0, 3.0)] {
        let params = q4(lambda, a, p);
        let l = 2.0 + alpha_minus(4.0, lambda);
        assert!((l * p - (4.0 + a + alpha_minus(4.0, lambda))).abs() < 1e-12);
        let fam = CutoffFamily::for_params(&params);
        let values: Vec<(f64, f64)> = [30.0, 45.0, 64.0, 90.0, 128.0, 181.0, 256.0, 300.0]
            .into_iter()
            .map(|e: f64| {
                let r = 10f64.powf(e);
                (r.ln(), j2(TestFamily::Mu, 10.0, r, &params, fam).unwrap().value / 10.0)
            })
            .collect();
        let fit = scaling_fit(&values).unwrap();
        let expected = -1.0 / (p - 1.0);
        assert!((fit.slope - expected).abs() <= 0.1, "lambda={lambda}: {} vs {expected}", fit.slope);
        assert!(fit.r_squared >= 0.95);
    }
}

#[test]
fn gamma_integrand_vanishes_outside_the_transition() {
    let params = q4(0.0, 0.0, 2.0);
    let fam = CutoffFamily::for_params(&params);
    assert_eq!(j2_space_integrand(TestFamily::Gamma, 0.9, 100.0, &params, fam).unwrap(), 0.0);
    assert_eq!(j2_space_integrand(TestFamily::Gamma, 0.001, 100.0, &params, fam).unwrap(), 0.0);
    assert!(j2_space_integrand(TestFamily::Gamma, 0.0075, 100.0, &params, fam).unwrap() > 0.0);
}

#[test]
fn j1_space_factor_is_dominated_by_eta() {
    for (lambda, a, p) in [(0.0, 0.0, 2.0), (-0.75, 1.0, 3.0), (3.0, -4.0, 3.0)] {
        let params = q4(lambda, a, p);
        let fam = CutoffFamily::for_params(&params);
        for r in [10.0, 100.0, 1000.0] {
            let space = j1_space_factor(TestFamily::Gamma, r, &params, fam).unwrap().value;
            let bound = eta(r, &params, |rho: f64| rho.powf(a)).unwrap();
            assert!(space <= bound * (1.0 + 1e-8), "{space} > {bound}");
        }
    }
}

#[test]
fn test_functions_are_admissible() {
    let params = q4(-0.75, 0.0, 2.0);
    let fam = CutoffFamily::for_params(&params);
    for family in [TestFamily::Gamma, TestFamily::Mu] {
        let c = check_admissibility(family, 10.0, 100.0, &params, fam).unwrap();
        assert!(c.passed, "{c:?}");
    }
}

#[test]
fn eta_is_nondecreasing_and_matches_closed_forms() {
    // λ = 0, a = 0, p = 2: η(∞) = 4π ∫_0^1 ρ³ (ρ^{−2} − 1) dρ = π
    let params = q4(0.0, 0.0, 2.0);
    let vals: Vec<f64> = default_scale_grid().iter().map(|&r| eta(r, &params, |_| 1.0).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[1] >= w[0]));
    let limit = eta(1e6, &params, |_| 1.0).unwrap();
    assert!((limit - PI).abs() < 1e-6, "{limit}");
    // λ = 3, a = 2, p = 2: the integrand behaves like ρ^{−2} at the origin, so η ~ R
    let params = q4(3.0, 2.0, 2.0);
    let values: Vec<(f64, f64)> =
        default_scale_grid().into_iter().map(|r| (r, eta(r, &params, |rho: f64| rho * rho).unwrap())).collect();
    let fit = scaling_fit(&values).unwrap();
    assert!((fit.slope - 1.0).abs() < 0.05, "{}", fit.slope);
}

#[test]
fn fit_examples() {
    let grid: Vec<f64> = (0..9).map(|i| 10f64.powf(1.0 + 0.25 * i as f64)).collect();
    let exact: Vec<(f64, f64)> = grid.iter().map(|&r| (r, 3.0 * r.powf(-1.5))).collect();
    let f = scaling_fit(&exact).unwrap();
    assert!((f.slope + 1.5).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
    let logged: Vec<(f64, f64)> = grid.iter().map(|&r| (r, r.powf(2.0) * r.ln())).collect();
    let bent = scaling_fit(&logged).unwrap().slope;
    assert!(bent > 2.0 && bent < 2.4, "{bent}");
    let flat: Vec<(f64, f64)> = grid.iter().map(|&r| (r, 7.0)).collect();
    assert!(scaling_fit(&flat).unwrap().slope.abs() < 1e-12);
    assert!(scaling_fit(&[(1.0, 1.0), (2.0, 2.0), (3.0, 0.0), (20.0, 1.0)]).is_err());
}
