//! Subcommands.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use koranyi_core::capacity::{
    beta_integral, eta, gamma_transition_bound, j1_time_factor, j2, mu_transition_bound, scaling_fit, CutoffFamily,
    TestFamily,
};
use koranyi_core::check::CheckOutcome;
use koranyi_core::evolve::{canonical_data, integrate, phase_sweep, profile_data, SimConfig, SweepConfig};
use koranyi_core::hquad::{radial_integral, Annulus};
use koranyi_core::spectrum::{alphas_for, classify, ProblemParams};
use koranyi_core::witness::{build_critical, build_subcritical, verify_witness};
use koranyi_core::GroupContext;
use serde::Serialize;
use serde_json::json;

use crate::config::{
    load, ClassifyConfig, InitialData, IntegrateConfig, ParamFlags, Quantity, ReportConfig, ScalingConfig,
    SimulateConfig, SweepCliConfig, VerifyConfig, WitnessConfig,
};
use crate::plot::{line_plot, phase_heat_map, Series};
use crate::report::{markdown, Report};
use crate::{suites, UsageError};

#[derive(Parser, Debug)]
#[command(name = "koranyi", version, about = "Verification toolkit for the Koranyi ball of the Heisenberg group")]
pub struct Cli {
    /// JSON config for the subcommand; flags override it
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Seed for every randomized check
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Directory for the JSON report and any CSV or SVG artifacts
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group, calculus, quadrature and barrier identity suite
    VerifyIdentities(VerifyArgs),
    /// Existence or nonexistence verdict for one parameter tuple
    Classify(ParamFlags),
    /// Build and verify an explicit stationary supersolution
    Witness(WitnessArgs),
    /// Fit the scaling law of a capacity functional
    LemmaScaling(ScalingArgs),
    /// Integrate psi rho^s over an annulus by quadrature and Monte Carlo
    Integrate(IntegrateArgs),
    /// Run the radial evolution from one initial profile
    Simulate(SimulateArgs),
    /// Simulate a grid of (lambda, a, p) cells next to the classifier
    PhaseSweep(SweepArgs),
    /// Merge JSON reports into one summary
    Report(ReportArgs),
}

#[derive(Args, Debug, Default)]
pub struct VerifyArgs {
    #[arg(long = "N", value_name = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub triples: Option<usize>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub mc_samples: Option<usize>,
    /// Multiply every tolerance by this factor
    #[arg(long)]
    pub tol_scale: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub params: ParamFlags,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct ScalingArgs {
    #[arg(long, value_enum)]
    pub quantity: Option<Quantity>,
    #[command(flatten)]
    pub params: ParamFlags,
    #[arg(long)]
    pub big_t: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct IntegrateArgs {
    #[arg(long = "N", value_name = "N")]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long)]
    pub r_inner: Option<f64>,
    #[arg(long)]
    pub r_outer: Option<f64>,
    #[arg(long)]
    pub mc_samples: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamFlags,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub cells: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p_list: Option<Vec<f64>>,
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long)]
    pub t_end: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct ReportArgs {
    /// Report file to merge; repeatable
    #[arg(long = "input", value_name = "PATH")]
    pub inputs: Vec<PathBuf>,
}

/// Runs the parsed command and writes its artifacts.
pub fn execute(cli: &Cli) -> Result<Report> {
    let config = cli.config.as_deref();
    let out = cli.out.as_deref();
    let mut report = match &cli.command {
        Command::VerifyIdentities(args) => verify_identities(config, cli.seed, out, args)?,
        Command::Classify(args) => cmd_classify(config, args)?,
        Command::Witness(args) => cmd_witness(config, out, args)?,
        Command::LemmaScaling(args) => lemma_scaling(config, out, args)?,
        Command::Integrate(args) => cmd_integrate(config, cli.seed, args)?,
        Command::Simulate(args) => simulate(config, out, args)?,
        Command::PhaseSweep(args) => cmd_phase_sweep(config, out, args)?,
        Command::Report(args) => merge_reports(config, out, args)?,
    };
    if let Some(dir) = out {
        let path = report.write(dir).with_context(|| format!("writing the report to {}", dir.display()))?;
        report.artifacts.push(path.display().to_string());
    }
    Ok(report)
}

fn artifact(out: Option<&Path>, name: &str) -> Result<Option<PathBuf>> {
    let Some(dir) = out else {
        return Ok(None);
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(Some(dir.join(name)))
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn verify_identities(config: Option<&Path>, seed: Option<u64>, out: Option<&Path>, args: &VerifyArgs) -> Result<Report> {
    let mut cfg: VerifyConfig = load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(t) = args.triples {
        cfg.triples = t;
    }
    if let Some(p) = args.points {
        cfg.points = p;
    }
    if let Some(m) = args.mc_samples {
        cfg.mc_samples = m;
    }
    if let Some(f) = args.tol_scale {
        if !(f >= 0.0 && f.is_finite()) {
            return Err(usage(format!("tol-scale must be a nonnegative number, got {f}")));
        }
        cfg.tolerances = cfg.tolerances.scaled(f);
    }
    if cfg.n == 0 || cfg.triples == 0 || cfg.points == 0 || cfg.harmonic_points == 0 || cfg.mc_samples < 1000 {
        return Err(usage("need N >= 1, positive point counts and at least 1000 Monte Carlo samples"));
    }
    let mut report = Report::new("verify-identities", &cfg);
    report.extend(suites::identities(&cfg)?);
    if let Some(path) = artifact(out, "residuals.svg")? {
        let ratios: Vec<(f64, f64)> = report
            .checks
            .iter()
            .enumerate()
            .map(|(i, c)| (i as f64, (c.measured.abs() / c.tolerance).log10()))
            .collect();
        line_plot(
            &path,
            "worst residual over tolerance",
            "check",
            "log10(measured / tolerance)",
            &[Series { label: "checks", points: ratios, markers: true }],
        )?;
        report.artifacts.push(path.display().to_string());
    }
    Ok(report)
}

pub fn cmd_classify(config: Option<&Path>, args: &ParamFlags) -> Result<Report> {
    let mut cfg: ClassifyConfig = load(config)?;
    args.apply(&mut cfg.params);
    let params = cfg.params.resolve()?;
    let c = classify(&params)?;
    Ok(Report::new("classify", &cfg).with_data(&c))
}

pub fn cmd_witness(config: Option<&Path>, out: Option<&Path>, args: &WitnessArgs) -> Result<Report> {
    let mut cfg: WitnessConfig = load(config)?;
    args.params.apply(&mut cfg.params);
    cfg.tau = args.tau.or(cfg.tau);
    cfg.eps = args.eps.or(cfg.eps);
    cfg.beta = args.beta.or(cfg.beta);
    if !(cfg.sharpness_factor > 1.0) {
        return Err(usage(format!("sharpness_factor must exceed 1, got {}", cfg.sharpness_factor)));
    }
    let params = cfg.params.resolve()?;
    let w = if params.is_critical() {
        if cfg.tau.is_some() {
            return Err(usage("tau has no meaning at critical lambda; use beta"));
        }
        build_critical(&params, cfg.beta, cfg.eps)?
    } else {
        if cfg.beta.is_some() {
            return Err(usage("beta is only used at critical lambda; use tau"));
        }
        build_subcritical(&params, cfg.tau, cfg.eps)?
    };
    let v = verify_witness(&w, &cfg.grid, cfg.tol)?;
    let over = w.scaled_eps(cfg.sharpness_factor * w.bounds.eps_bound / w.eps);
    let sharp = verify_witness(&over, &cfg.grid, cfg.tol)?;
    let mut sharpness = CheckOutcome::at_most(
        format!("eps at {} times its bound breaks the inequality", cfg.sharpness_factor),
        sharp.min_slack,
        0.0,
        "the admissible range of eps is sharp at rho = 1",
    )
    .with_samples(cfg.grid.points)
    .with_detail(format!("min slack {:.3e} at rho = {:.3e}", sharp.min_slack, sharp.rho_of_min_slack));
    sharpness.passed = sharp.min_slack < 0.0;
    let mut report = Report::new("witness", &cfg);
    report.extend([v.identity.clone(), v.inequality.clone(), sharpness]);
    report = report.with_data(&json!({ "witness": w, "verification": v }));
    if let Some(path) = artifact(out, "witness.svg")? {
        let radii = cfg.grid.radii();
        let pts = |f: &dyn Fn(f64) -> f64| radii.iter().map(|&r| (r.log10(), f(r).log10())).collect::<Vec<_>>();
        let a = params.a;
        let p = params.p;
        line_plot(
            &path,
            "witness operator against the nonlinearity",
            "log10 rho",
            "log10",
            &[
                Series { label: "-(1/psi) lap u + lambda u / rho^2", points: pts(&|r| w.identity_value(r)), markers: false },
                Series { label: "rho^a u^p", points: pts(&|r| r.powf(a) * w.value(r).powf(p)), markers: false },
            ],
        )?;
        report.artifacts.push(path.display().to_string());
    }
    Ok(report)
}

#[derive(Serialize)]
struct ScalingRow {
    scale: f64,
    value: f64,
}

fn scaling_values(cfg: &ScalingConfig, params: &ProblemParams) -> Result<(Vec<(f64, f64)>, f64, String)> {
    let p = params.p;
    let inv = 1.0 / (p - 1.0);
    let fam = CutoffFamily::for_params(params);
    let alpha_minus = params.alphas()?.alpha_minus;
    let q = params.q();
    let gamma_exp = (params.a + 2.0 * p) * inv - q - alpha_minus;
    let critical = params.is_critical();
    let a = params.a;
    let log_note = "at critical lambda the law carries one extra factor ln R, divided out before the fit";
    let grid = cfg.scale_grid();
    let eval = |s: f64| -> Result<f64> {
        Ok(match cfg.quantity {
            Quantity::TimeFactor => j1_time_factor(s, params.k, p, CutoffFamily::new(params.k, p))?.value,
            Quantity::TimeMass => beta_integral(s, fam)?.value,
            Quantity::Eta => eta(s, params, |rho: f64| rho.powf(a))?,
            Quantity::GammaSpace => {
                let v = j2(TestFamily::Gamma, cfg.big_t, s, params, fam)?.value / cfg.big_t;
                if critical {
                    v / s.ln()
                } else {
                    v
                }
            }
            Quantity::GammaBound => {
                let v = gamma_transition_bound(s, params)?;
                if critical {
                    v / s.ln()
                } else {
                    v
                }
            }
            Quantity::MuLog => j2(TestFamily::Mu, cfg.big_t, s, params, fam)?.value / cfg.big_t,
            Quantity::MuBound => mu_transition_bound(s, params)?,
        })
    };
    let values = grid
        .iter()
        .map(|&s| Ok((if cfg.quantity.logarithmic() { s.ln() } else { s }, eval(s)?)))
        .collect::<Result<Vec<_>>>()?;
    let (expected, note) = match cfg.quantity {
        Quantity::TimeFactor => (1.0 - params.k as f64 * p * inv, "T exponent 1 - kp/(p-1)".to_string()),
        Quantity::TimeMass => (1.0, "the time cutoff integrates to a fixed fraction of T".to_string()),
        Quantity::Eta => (
            (a * inv - q - alpha_minus).max(0.0),
            "R exponent max(0, a/(p-1) - Q - alpha_minus); zero when eta converges".to_string(),
        ),
        Quantity::GammaSpace | Quantity::GammaBound => {
            let base = "R exponent (a+2p)/(p-1) - Q - alpha_minus".to_string();
            (gamma_exp, if critical { format!("{base}; {log_note}") } else { base })
        }
        Quantity::MuLog | Quantity::MuBound => (-inv, "ln R exponent -1/(p-1) on the line Lp = Q + a + alpha_minus".to_string()),
    };
    Ok((values, expected, note))
}

pub fn lemma_scaling(config: Option<&Path>, out: Option<&Path>, args: &ScalingArgs) -> Result<Report> {
    let mut cfg: ScalingConfig = load(config)?;
    if let Some(q) = args.quantity {
        cfg.quantity = q;
    }
    args.params.apply(&mut cfg.params);
    if let Some(t) = args.big_t {
        cfg.big_t = t;
    }
    if !(cfg.big_t >= 1.0 && cfg.big_t.is_finite()) {
        return Err(usage(format!("big_t must be at least 1, got {}", cfg.big_t)));
    }
    let params = cfg.params.resolve()?;
    let mut report = Report::new("lemma-scaling", &cfg);
    if cfg.quantity.logarithmic() {
        let gap = (params.l_coef()? * params.p - params.rhs()?).abs();
        let line = CheckOutcome::at_most(
            "parameters lie on the critical line Lp = Q + a + alpha_minus",
            gap,
            1e-9 * params.rhs()?.abs().max(1.0),
            "the logarithmic test functions are needed only on the critical line",
        );
        let on_line = line.passed;
        report.push(line);
        if !on_line {
            return Ok(report);
        }
    }
    let (values, expected, note) = scaling_values(&cfg, &params)?;
    let fit = scaling_fit(&values)?;
    let tol = cfg.slope_tol.unwrap_or(match cfg.quantity {
        Quantity::TimeFactor | Quantity::TimeMass => 0.05,
        _ => 0.1,
    });
    let name = cfg.quantity.name();
    let citation = format!("capacity scaling law ({name}): {note}");
    report.push(CheckOutcome::close_to(format!("{name} slope"), fit.slope, expected, tol, citation.clone()).with_samples(values.len()));
    // a bounded quantity has no line to explain
    if expected != 0.0 {
        report.push(CheckOutcome::at_least(format!("{name} fit r^2"), fit.r_squared, cfg.min_r_squared, citation));
    }
    if let Some(path) = artifact(out, "scaling.csv")? {
        let mut w = csv::Writer::from_path(&path)?;
        for &(scale, value) in &values {
            w.serialize(ScalingRow { scale, value })?;
        }
        w.flush()?;
        report.artifacts.push(path.display().to_string());
    }
    if let Some(path) = artifact(out, "scaling.svg")? {
        let x_label = if cfg.quantity.logarithmic() { "ln ln R" } else { "ln scale" };
        let line: Vec<(f64, f64)> = fit.points.iter().map(|&(x, _)| (x, fit.intercept + fit.slope * x)).collect();
        line_plot(
            &path,
            &format!("{name}: slope {:.4} (expected {expected:.4})", fit.slope),
            x_label,
            "ln value",
            &[
                Series { label: "computed", points: fit.points.clone(), markers: true },
                Series { label: "least-squares fit", points: line, markers: false },
            ],
        )?;
        report.artifacts.push(path.display().to_string());
    }
    Ok(report.with_data(&json!({ "expected_slope": expected, "fit": fit })))
}

pub fn cmd_integrate(config: Option<&Path>, seed: Option<u64>, args: &IntegrateArgs) -> Result<Report> {
    let mut cfg: IntegrateConfig = load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(s) = args.s {
        cfg.s = s;
    }
    if let Some(r) = args.r_inner {
        cfg.r_inner = r;
    }
    if let Some(r) = args.r_outer {
        cfg.r_outer = r;
    }
    if let Some(m) = args.mc_samples {
        cfg.mc_samples = m;
    }
    let ctx = GroupContext::new(cfg.n)?;
    let ann = Annulus::new(cfg.r_inner, cfg.r_outer)?;
    let s = cfg.s;
    let quad = radial_integral(|r: f64| r.powf(s), ann, ctx)?;
    let (mc, mc_err) = suites::mc_power(ann, s, cfg.mc_samples as u64, cfg.seed, ctx)?;
    let sigma = (quad.error_estimate.powi(2) + mc_err.powi(2)).sqrt();
    let mut report = Report::new("integrate", &cfg);
    report.push(
        CheckOutcome::at_most(
            format!("polar formula vs Monte Carlo for psi rho^{s}"),
            (quad.value - mc).abs() / sigma,
            cfg.sigmas,
            "polar integration formula: int psi F = C_N int rho^(Q-1) F(rho) drho",
        )
        .with_samples(cfg.mc_samples),
    );
    Ok(report.with_data(&json!({
        "quadrature": quad,
        "monte_carlo": { "value": mc, "error_estimate": mc_err },
    })))
}

pub fn simulate(config: Option<&Path>, out: Option<&Path>, args: &SimulateArgs) -> Result<Report> {
    let mut cfg: SimulateConfig = load(config)?;
    args.params.apply(&mut cfg.params);
    if let Some(e) = args.eps {
        cfg.eps = e;
    }
    if let Some(t) = args.t_end {
        cfg.t_end = t;
    }
    if let Some(n) = args.cells {
        cfg.grid.n_cells = n;
    }
    let params = cfg.params.resolve()?;
    let sim = SimConfig { params, grid: cfg.grid, eps: cfg.eps, t_end: cfg.t_end, dt: cfg.dt, nonlinear: cfg.nonlinear };
    sim.validate()?;
    let k = params.k as usize;
    let ic = match cfg.initial {
        InitialData::Canonical => canonical_data(&cfg.grid, k),
        InitialData::Zero => profile_data(&cfg.grid, k, |_| 0.0),
        InitialData::Power { coef, exponent } => profile_data(&cfg.grid, k, |r| coef * r.powf(exponent)),
    };
    let result = integrate(&sim, ic)?;
    let mut report = Report::new("simulate", &cfg);
    if let Some(path) = artifact(out, "sup_norm.svg")? {
        let hist: Vec<(f64, f64)> = result.sup_norm_history.iter().map(|&(t, s)| (t, s.max(1e-300).log10())).collect();
        line_plot(
            &path,
            &format!("sup norm, status {}", result.status),
            "t",
            "log10 max |u|",
            &[Series { label: "sup norm", points: hist, markers: false }],
        )?;
        report.artifacts.push(path.display().to_string());
    }
    Ok(report.with_data(&json!({ "label": "illustrative", "result": result })))
}

/// `a` on the classifier frontier `Lp = Q + a + α⁻` as a function of `λ`.
fn frontier(ctx: GroupContext, p: f64, lambdas: &[f64]) -> Vec<(f64, f64)> {
    let (lo, hi) = lambdas.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &l| (a.min(l), b.max(l)));
    let q = ctx.q() as f64;
    (0..=200)
        .filter_map(|i| {
            let l = lo + (hi - lo) * i as f64 / 200.0;
            let am = alphas_for(ctx, l).ok()?.alpha_minus;
            Some((l, (q - 2.0 + am) * p - q - am))
        })
        .collect()
}

pub fn cmd_phase_sweep(config: Option<&Path>, out: Option<&Path>, args: &SweepArgs) -> Result<Report> {
    let mut cfg: SweepCliConfig = load(config)?;
    if let Some(l) = &args.lambdas {
        cfg.lambdas = l.clone();
    }
    if let Some(a) = &args.a_list {
        cfg.a_list = a.clone();
    }
    if let Some(p) = &args.p_list {
        cfg.p_list = p.clone();
    }
    if let Some(n) = args.cells {
        cfg.grid.n_cells = n;
    }
    if let Some(t) = args.t_end {
        cfg.t_end = t;
    }
    if cfg.lambdas.is_empty() || cfg.a_list.is_empty() || cfg.p_list.is_empty() {
        return Err(usage("phase sweep needs nonempty lambda, a and p lists"));
    }
    if !(cfg.t_end > 0.0 && cfg.t_end.is_finite()) {
        return Err(usage(format!("t_end must be positive, got {}", cfg.t_end)));
    }
    let ctx = GroupContext::from_q(cfg.q).map_err(|e| usage(e.to_string()))?;
    let sweep = SweepConfig { ctx, k: cfg.k, grid: cfg.grid, t_end: cfg.t_end, eps: cfg.eps, dt: cfg.dt };
    let rows = phase_sweep(&cfg.lambdas, &cfg.a_list, &cfg.p_list, &sweep)?;
    let mut report = Report::new("phase-sweep", &cfg);
    if let Some(path) = artifact(out, "sweep.csv")? {
        let mut w = csv::Writer::from_path(&path)?;
        for r in &rows {
            w.serialize(r)?;
        }
        w.flush()?;
        report.artifacts.push(path.display().to_string());
    }
    for (i, &p) in cfg.p_list.iter().enumerate() {
        if let Some(path) = artifact(out, &format!("sweep_p{i}.svg"))? {
            phase_heat_map(&path, &rows, p, &frontier(ctx, p, &cfg.lambdas))?;
            report.artifacts.push(path.display().to_string());
        }
    }
    Ok(report.with_data(&json!({ "label": "illustrative", "rows": rows })))
}

fn json_reports(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut found: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json") && p.file_stem().is_some_and(|s| s != "report"))
        .collect();
    found.sort();
    Ok(found)
}

pub fn merge_reports(config: Option<&Path>, out: Option<&Path>, args: &ReportArgs) -> Result<Report> {
    let cfg: ReportConfig = load(config)?;
    let base = config.and_then(Path::parent).unwrap_or(Path::new("."));
    let mut inputs: Vec<PathBuf> = cfg.inputs.iter().map(|p| base.join(p)).collect();
    inputs.extend(args.inputs.iter().cloned());
    if inputs.is_empty() {
        let dir = out.ok_or_else(|| usage("report needs inputs, or an --out directory holding reports"))?;
        inputs = json_reports(dir)?;
    }
    if inputs.is_empty() {
        return Err(usage("no reports to merge"));
    }
    let mut merged = Report::new("report", &json!({ "inputs": inputs }));
    let mut suites = Vec::new();
    let mut text = String::from("# Verification summary\n\n");
    for path in &inputs {
        let raw = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let r: Report =
            serde_json::from_str(&raw).map_err(|e| usage(format!("{} is not a report: {e}", path.display())))?;
        text.push_str(&markdown(&r));
        text.push('\n');
        suites.push(json!({ "suite": r.suite, "path": path, "summary": r.summary }));
        for mut c in r.checks {
            c.name = format!("{}: {}", r.suite, c.name);
            merged.push(c);
        }
    }
    if let Some(path) = artifact(out, "report.md")? {
        std::fs::write(&path, text)?;
        merged.artifacts.push(path.display().to_string());
    }
    Ok(merged.with_data(&json!({ "suites": suites })))
}
