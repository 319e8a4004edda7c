use koranyi_core::spectrum::{
    check_k_boundary, check_k_harmonic, classify, critical_exponent, hardy_threshold, liminf_probe, probe_exponent,
    sample_points, sigma_lambda, ProblemParams, SampleSpec, ThresholdKind, Verdict,
};
use koranyi_core::witness::{build_critical, tau_window};
use koranyi_core::GroupContext;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use Verdict::{ExistenceWitness as Exist, NonexistenceAllF as Non, OpenCritical as Open};

fn ctx(q: usize) -> GroupContext {
    GroupContext::from_q(q).unwrap()
}

fn crit(q: usize) -> f64 {
    let h = (q as f64 - 2.0) / 2.0;
    -h * h
}

/// `α⁻ = −(Q−2)/2 − √(λ + ((Q−2)/2)²)`.
fn alpha_minus(q: usize, lambda: f64) -> f64 {
    let h = (q as f64 - 2.0) / 2.0;
    -h - (lambda + h * h).max(0.0).sqrt()
}

/// The published clauses with the threshold written through `α⁻`.
/// Returns the verdict and whether the clause as printed agrees with it.
fn clause_verdict(q: usize, lambda: f64, a: f64, p: f64) -> (Verdict, bool) {
    let qf = q as f64;
    let l = qf - 2.0 + alpha_minus(q, lambda);
    if lambda == crit(q) {
        if a <= -2.0 {
            return (Non, true);
        }
        let p_star = 1.0 + 2.0 * (a + 2.0) / (qf - 2.0);
        return if p > p_star {
            (Non, true)
        } else if p < p_star {
            (Exist, true)
        } else {
            (Open, true)
        };
    }
    if lambda < 0.0 {
        if a <= -2.0 {
            return (Non, true);
        }
        return if p >= 1.0 + (a + 2.0) / l { (Non, true) } else { (Exist, true) };
    }
    if lambda == 0.0 {
        return if a <= -2.0 { (Non, true) } else { (Exist, true) };
    }
    if a >= -2.0 {
        // printed as nonexistence; the governing inequality gives existence
        return (Exist, false);
    }
    if p <= 1.0 + (a + 2.0) / l {
        (Non, true)
    } else {
        (Exist, true)
    }
}

const FIXTURES: &[(&str, usize, f64, f64, f64)] = &[
    ("critical I(i)", 4, -1.0, -2.0, 2.0),
    ("critical I(i)", 4, -1.0, -3.0, 1.5),
    ("critical I(i)", 6, -4.0, -2.0, 5.0),
    ("critical I(ii)", 4, -1.0, 0.0, 4.0),
    ("critical I(ii)", 6, -4.0, 1.0, 3.0),
    ("critical II", 4, -1.0, 0.0, 2.0),
    ("critical II", 6, -4.0, 1.0, 2.0),
    ("critical II", 4, -1.0, 2.0, 2.0),
    ("critical open", 4, -1.0, 0.0, 3.0),
    ("critical open", 6, -4.0, 1.0, 2.5),
    ("critical open", 4, -1.0, -1.0, 2.0),
    ("negative I(i)", 4, -0.75, -3.0, 2.0),
    ("negative I(i)", 4, -0.5, -2.0, 3.0),
    ("negative I(ii)", 4, -0.75, 0.0, 5.0),
    ("negative I(ii)", 4, -0.75, 0.0, 6.0),
    ("negative II", 4, -0.75, 0.0, 3.0),
    ("negative II", 6, -1.0, 0.0, 4.0),
    ("zero I", 4, 0.0, -2.0, 2.0),
    ("zero I", 4, 0.0, -5.0, 1.5),
    ("zero I", 6, 0.0, -2.5, 3.0),
    ("zero II", 4, 0.0, 0.0, 2.0),
    ("zero II", 4, 0.0, -1.9, 10.0),
    ("zero II", 6, 0.0, 1.0, 1.1),
    ("positive I(i)", 4, 3.0, 0.0, 2.0),
    ("positive I(i)", 4, 1.0, -2.0, 3.0),
    ("positive I(ii)", 4, 3.0, -4.0, 2.0),
    ("positive I(ii)", 4, 3.0, -4.0, 3.0),
    ("positive I(ii)", 6, 5.0, -3.0, 1.5),
    ("positive II", 4, 3.0, -4.0, 4.0),
    ("positive II", 6, 5.0, -3.0, 2.5),
];

#[test]
fn fixture_table_reproduces_every_clause() {
    assert!(FIXTURES.len() >= 25);
    for &(clause, q, lambda, a, p) in FIXTURES {
        let params = ProblemParams::new(ctx(q), lambda, a, p, 1).unwrap();
        let got = classify(&params).unwrap();
        let (expected, _) = clause_verdict(q, lambda, a, p);
        assert_eq!(got.verdict, expected, "{clause}: Q={q} lambda={lambda} a={a} p={p}");
        assert!(!got.citation.is_empty());
    }
    for verdict in [Exist, Non, Open] {
        assert!(FIXTURES.iter().any(|&(_, q, l, a, p)| clause_verdict(q, l, a, p).0 == verdict));
    }
}

#[test]
fn positive_lambda_clause_disagrees_with_the_inequality() {
    let disagreeing: Vec<_> =
        FIXTURES.iter().filter(|&&(_, q, l, a, p)| !clause_verdict(q, l, a, p).1).map(|f| f.0).collect();
    assert!(!disagreeing.is_empty());
    assert!(disagreeing.iter().all(|c| *c == "positive I(i)"));
    let c = classify(&ProblemParams::new(ctx(4), 3.0, 0.0, 2.0, 1).unwrap()).unwrap();
    assert_eq!(c.verdict, Exist);
    assert!(c.citation.contains("opposite"));
}

#[test]
fn hand_checked_classifications() {
    let c = classify(&ProblemParams::new(ctx(4), 0.0, -2.0, 2.0, 1).unwrap()).unwrap();
    assert_eq!((c.verdict, c.lhs, c.rhs), (Non, 0.0, 0.0));
    let c = classify(&ProblemParams::critical(ctx(4), 0.0, 3.0, 1).unwrap()).unwrap();
    assert_eq!(c.verdict, Open);
    let c = classify(&ProblemParams::new(ctx(4), 0.0, 0.0, 2.0, 1).unwrap()).unwrap();
    assert_eq!((c.verdict, c.lhs, c.rhs), (Exist, 0.0, 2.0));
}

#[test]
fn thresholds_by_hand() {
    let t = critical_exponent(ctx(4), 0.0, 1.0).unwrap().unwrap();
    assert_eq!((t.kind, t.value), (ThresholdKind::Third, -2.0));
    let t = critical_exponent(ctx(4), -0.75, 0.0).unwrap().unwrap();
    assert_eq!(t.kind, ThresholdKind::Second);
    assert!((t.value - 5.0).abs() < 1e-12);
    let t = critical_exponent(ctx(4), crit(4), 0.0).unwrap().unwrap();
    assert!((t.value - 3.0).abs() < 1e-12);
    let t = critical_exponent(ctx(4), 3.0, -4.0).unwrap().unwrap();
    assert_eq!(t.kind, ThresholdKind::First);
    assert!((t.value - 3.0).abs() < 1e-12);
    assert!(critical_exponent(ctx(4), 3.0, 0.0).unwrap().is_none());
}

#[test]
fn classifier_is_total_and_monotone_in_p() {
    for q in [4, 6] {
        let lo = crit(q);
        let lambdas: Vec<f64> = (0..20).map(|i| lo + i as f64 * 0.4).collect();
        let a_list: Vec<f64> = (0..20).map(|i| -5.0 + i as f64 * 0.5).collect();
        let p_list: Vec<f64> = (0..20).map(|i| 1.05 + i as f64 * 0.5).collect();
        for &lambda in &lambdas {
            for &a in &a_list {
                let l = q as f64 - 2.0 + alpha_minus(q, lambda);
                let verdicts: Vec<Verdict> = p_list
                    .iter()
                    .map(|&p| classify(&ProblemParams::new(ctx(q), lambda, a, p, 1).unwrap()).unwrap().verdict)
                    .collect();
                let changes = verdicts.windows(2).filter(|w| w[0] != w[1]).count();
                if l > 0.0 {
                    assert!(changes <= 1 || verdicts.contains(&Open));
                    if changes == 1 && !verdicts.contains(&Open) {
                        assert_eq!((verdicts[0], *verdicts.last().unwrap()), (Exist, Non));
                    }
                }
            }
        }
    }
}

#[test]
fn window_agrees_with_classifier_on_random_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let q = [4, 6, 8][rng.random_range(0..3)];
        let critical = rng.random_bool(0.2);
        let lambda = if critical { hardy_threshold(ctx(q)) } else { crit(q) + rng.random_range(1e-3..8.0) };
        let a = rng.random_range(-6.0..4.0);
        let p = rng.random_range(1.01..8.0);
        let params = ProblemParams::new(ctx(q), lambda, a, p, 1).unwrap();
        let exists = classify(&params).unwrap().verdict == Exist;
        if critical {
            assert_eq!(build_critical(&params, None, None).is_ok(), exists, "{params:?}");
        } else {
            assert_eq!(tau_window(&params).unwrap().is_some(), exists, "{params:?}");
        }
    }
}

#[test]
fn alphas_are_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let q = 2 * rng.random_range(2..6);
        let lambda = crit(q) + rng.random_range(0.0..10.0);
        let params = ProblemParams::new(ctx(q), lambda, 0.0, 2.0, 1).unwrap();
        let al = params.alphas().unwrap();
        for alpha in [al.alpha_minus, al.alpha_plus] {
            let r = alpha * alpha + (q as f64 - 2.0) * alpha - lambda;
            assert!(r.abs() <= 1e-12 * (1.0 + lambda.abs()), "{r}");
        }
    }
}

#[test]
fn sigma_vanishes_on_the_sphere_and_is_continuous_at_criticality() {
    for lambda in [crit(4), -0.5, 0.0, 3.0] {
        let params = ProblemParams::new(ctx(4), lambda, 0.0, 2.0, 1).unwrap();
        assert!(sigma_lambda(1.0, &params).unwrap().abs() < 1e-15);
        for s in [1e-3, 0.1, 0.5, 0.99] {
            assert!(sigma_lambda(s, &params).unwrap() > 0.0);
        }
    }
    let at = ProblemParams::critical(ctx(4), 0.0, 2.0, 1).unwrap();
    let near = ProblemParams::new(ctx(4), crit(4) + 1e-8, 0.0, 2.0, 1).unwrap();
    for j in 1..=10 {
        let s = j as f64 / 11.0;
        let (a, b) = (sigma_lambda(s, &at).unwrap(), sigma_lambda(s, &near).unwrap() / (2.0 * 1e-4));
        // σ_λ ≈ 2√(λ−crit) σ_crit as λ ↓ crit
        assert!((a - b).abs() <= 1e-6 * a.abs().max(1.0), "s={s}: {a} vs {b}");
    }
}

#[test]
fn k_is_harmonic_and_satisfies_the_flux_identity() {
    let points = sample_points(ctx(4), &SampleSpec::default()).unwrap();
    for lambda in [crit(4), -0.5, 0.0, 3.0] {
        let params = ProblemParams::new(ctx(4), lambda, 0.0, 2.0, 1).unwrap();
        let h = check_k_harmonic(&params, &points, 1e-8).unwrap();
        assert!(h.passed, "{h:?}");
        let (b, samples) = check_k_boundary(&params, 1000, 1e-6).unwrap();
        assert!(b.passed && samples.len() >= 1000, "{b:?}");
    }
}

#[test]
fn liminf_probe_decays_for_nonexistence_and_grows_for_existence() {
    let rs: Vec<f64> = (0..8).map(|i| 10f64.powf(1.0 + 0.5 * i as f64)).collect();
    let non = ProblemParams::new(ctx(4), -0.75, -3.0, 2.0, 1).unwrap();
    assert_eq!(classify(&non).unwrap().verdict, Non);
    let vals = liminf_probe(|r: f64| r.powf(non.a), &non, &rs).unwrap();
    assert!(vals.windows(2).all(|w| w[1].1 < w[0].1));
    assert!(vals.last().unwrap().1 < 0.1 * vals[0].1);
    // exponent (a+2p)/(p−1) − Q − α⁻ computed by hand: 1 − 4 + 1.5
    assert!((probe_exponent(&non).unwrap() + 1.5).abs() < 1e-12);
    let ex = ProblemParams::new(ctx(4), 0.0, 2.0, 2.0, 1).unwrap();
    let vals = liminf_probe(|r: f64| r.powf(ex.a), &ex, &rs).unwrap();
    let slope = (vals.last().unwrap().1 / vals[0].1).ln() / (rs.last().unwrap() / rs[0]).ln();
    assert!(slope > 0.0 && (slope - 4.0).abs() < 0.1, "{slope}");
    let eq = ProblemParams::new(ctx(4), 0.0, -2.0, 2.0, 1).unwrap();
    let vals = liminf_probe(|r: f64| r.powf(eq.a), &eq, &rs).unwrap();
    let first = vals[0].1;
    assert!(vals.iter().all(|v| v.1 > 0.0 && v.1 <= 1.5 * first));
}
