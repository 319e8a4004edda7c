use koranyi_core::evolve::{
    canonical_data, integrate, mms_convergence, phase_sweep, profile_data, CellStatus, DtPolicy, RadialGrid, SimConfig,
    SimResult, SimStatus, Spacing, SweepConfig, SweepRow,
};
use koranyi_core::spectrum::ProblemParams;
use koranyi_core::GroupContext;

fn params(lambda: f64, a: f64, p: f64, k: u32) -> ProblemParams {
    ProblemParams::new(GroupContext::from_q(4).unwrap(), lambda, a, p, k).unwrap()
}

fn config(params: ProblemParams, grid: RadialGrid, eps: f64, t_end: f64) -> SimConfig {
    SimConfig { params, grid, eps, t_end, dt: DtPolicy::default(), nonlinear: true }
}

#[test]
fn manufactured_solution_converges_at_second_order() {
    for k in [1u32, 2] {
        for (rho_min, lambda) in [(1e-3, 0.0), (0.1, 0.7)] {
            let grid = RadialGrid::new(rho_min, 32, Spacing::Uniform).unwrap();
            let cfg = config(params(lambda, 1.0, 2.0, k), grid, 0.0, 0.25);
            let (errors, orders) = mms_convergence(&cfg, 3).unwrap();
            assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
            assert!(orders.iter().all(|&o| o > 1.8), "k={k} rho_min={rho_min}: {orders:?}");
        }
    }
}

#[test]
fn zero_data_stays_zero() {
    for k in [1u32, 2] {
        let grid = RadialGrid::new(1e-3, 32, Spacing::Uniform).unwrap();
        let cfg = config(params(-0.5, 1.0, 2.0, k), grid, 0.0, 0.5);
        let r = integrate(&cfg, profile_data(&grid, k as usize, |_| 0.0)).unwrap();
        assert_eq!(r.status, SimStatus::Completed);
        assert!(r.final_profile.iter().all(|&v| v == 0.0));
    }
}

#[test]
fn linear_heat_flow_does_not_raise_the_sup_norm() {
    let grid = RadialGrid::new(1e-3, 64, Spacing::Uniform).unwrap();
    let cfg = SimConfig { nonlinear: false, ..config(params(0.0, 0.0, 2.0, 1), grid, 0.0, 0.5) };
    let r = integrate(&cfg, canonical_data(&grid, 1)).unwrap();
    assert_eq!(r.status, SimStatus::Completed);
    let sups: Vec<f64> = r.sup_norm_history.iter().map(|h| h.1).collect();
    assert!(sups.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), "{sups:?}");
    assert!(sups.last().unwrap() < &sups[0]);
}

#[test]
fn runs_are_deterministic() {
    let cfg = SweepConfig::new(GroupContext::from_q(4).unwrap());
    let a = phase_sweep(&[0.0, -0.75], &[-2.0, 2.0], &[2.0], &cfg).unwrap();
    let b = phase_sweep(&[0.0, -0.75], &[-2.0, 2.0], &[2.0], &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn reference_cells_keep_their_status_under_refinement() {
    for n_cells in [128, 256] {
        let mut cfg = SweepConfig::new(GroupContext::from_q(4).unwrap());
        cfg.grid = RadialGrid { n_cells, ..cfg.grid };
        let status = |l: f64, a: f64| phase_sweep(&[l], &[a], &[2.0], &cfg).unwrap()[0].status;
        assert_eq!(status(-0.75, -2.0), CellStatus::BlownUp, "{n_cells}");
        assert_eq!(status(0.0, 2.0), CellStatus::Completed, "{n_cells}");
    }
}

#[test]
fn sweep_rows_carry_the_full_schema() {
    let cfg = SweepConfig::new(GroupContext::from_q(4).unwrap());
    let rows = phase_sweep(&[0.0, 3.0], &[0.0], &[2.0, 3.0], &cfg).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!(!r.classifier_verdict.is_empty());
        assert_eq!(r.grid, cfg.grid.to_string());
        assert_eq!(r.dt_policy, cfg.dt.to_string());
        let v = serde_json::to_value(r).unwrap();
        for key in ["lambda", "a", "p", "k", "status", "blow_up_time", "classifier_verdict", "grid", "dt_policy"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let back: SweepRow = serde_json::from_value(v).unwrap();
        assert_eq!(&back, r);
    }
    let bad = phase_sweep(&[0.0], &[0.0], &[1.0], &cfg).unwrap();
    assert_eq!(bad[0].status, CellStatus::Failed);
    assert!(phase_sweep(&[], &[0.0], &[2.0], &cfg).is_err());
    assert!(phase_sweep(&[f64::NAN], &[0.0], &[2.0], &cfg).is_err());
}

#[test]
fn data_below_a_stationary_supersolution_stays_bounded() {
    // λ = 0, a = 0, p = 2: ½ρ^{−1} is a supersolution, so data below it cannot blow up
    let grid = RadialGrid::new(1e-3, 32, Spacing::Uniform).unwrap();
    let cfg = config(params(0.0, 0.0, 2.0, 1), grid, 0.5, 20.0);
    let r = integrate(&cfg, profile_data(&grid, 1, |rho| 0.5 / rho)).unwrap();
    assert_eq!(r.status, SimStatus::Completed);
    assert!(r.max_sup() <= 0.5 / 1e-3 * (1.0 + 1e-9));
}

#[test]
fn result_and_config_json_round_trip() {
    let grid = RadialGrid::new(1e-3, 32, Spacing::Log).unwrap();
    let cfg = config(params(-0.5, 1.0, 2.0, 2), grid, 0.1, 0.1);
    let back: SimConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(back, cfg);
    let r = integrate(&cfg, canonical_data(&grid, 2)).unwrap();
    let back: SimResult = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn invalid_configs_are_rejected() {
    let grid = RadialGrid::new(1e-3, 32, Spacing::Uniform).unwrap();
    let cfg = config(params(0.0, 0.0, 2.0, 1), grid, 0.1, -1.0);
    assert!(integrate(&cfg, canonical_data(&grid, 1)).is_err());
    let cfg = config(params(0.0, 0.0, 2.0, 1), grid, 0.1, 1.0);
    assert!(integrate(&cfg, canonical_data(&grid, 2)).is_err());
    assert!(integrate(&cfg, vec![vec![0.0; 3]]).is_err());
}
