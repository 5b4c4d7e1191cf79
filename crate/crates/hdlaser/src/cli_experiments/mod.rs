//! Config-driven experiment runner: builds models from an
//! [`ExperimentConfig`], runs the requested figure, returns CSV tables and a
//! text report. The `simulate` binary is a thin shell around [`run_experiment`].

pub mod config;
pub mod csv;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::atomic_core::{
    build_effective_two_level, rho31_approx, three_level_steady_state, two_level_steady_state, validate_elimination_regime,
    ThreeLevelParams,
};
use crate::constants::{EPS0, HBAR, TWO_PI};
use crate::dual_isotope_oracle::{compare_with_lorentzian, DualIsotopeSystem, IterateOptions, OracleParams};
use crate::error::{DlsError, Result};
use crate::gain_medium::{CavityParams, DualMediumParams, MediumParams};
use crate::lasing_solver::{sweep_shift_ratio, Medium, PumpShiftScenario, SweepOptions};
use crate::numerics::{linear_fit, linspace, logspace};

pub use config::{load_config, Experiment, ExperimentConfig, SweepModel};
pub use csv::{Cell, CsvTable, CSV_VERSION};
pub use report::{emit_report, Model, ReportFormat, ResultRow, ShiftSweepResult};

pub fn cavity(cfg: &ExperimentConfig) -> Result<CavityParams> {
    let c = &cfg.physics.cavity;
    match c.r {
        Some(r) => CavityParams::from_mirror(c.l0, c.lambda0, r),
        None => Ok(CavityParams { q: c.q, l0: c.l0, lambda0: c.lambda0, r: None, omega_l0: c.nu_l0_hz.rad() }),
    }
}

pub fn dual_medium(cfg: &ExperimentConfig) -> DualMediumParams {
    let d = &cfg.physics.dual;
    DualMediumParams {
        medium1: MediumParams::with_gain(d.n1, d.mu1, d.gamma1_hz.rad(), d.g1),
        medium2: MediumParams::with_gain(d.n2, d.mu2, d.gamma2_hz.rad(), d.g2),
    }
}

pub fn sub_medium(cfg: &ExperimentConfig) -> MediumParams {
    let s = &cfg.physics.sub;
    MediumParams::with_gain(s.n, s.mu, s.gamma_hz.rad(), s.g0)
}

pub fn oracle_params(cfg: &ExperimentConfig) -> OracleParams {
    let o = &cfg.physics.oracle;
    OracleParams {
        theta1: o.theta1,
        theta2: o.theta2,
        delta_p: o.delta_p_hz.rad(),
        gamma1: o.gamma1_hz.rad(),
        gamma2: o.gamma2_hz.rad(),
        gamma_3: o.gamma3_hz.rad(),
        g1: o.g1,
        mu: o.mu,
        q: o.q,
    }
}

pub fn lambda_params(cfg: &ExperimentConfig) -> ThreeLevelParams {
    let l = &cfg.physics.lambda;
    ThreeLevelParams {
        omega_l: l.omega_l_hz.rad(),
        omega_p: l.omega_p_hz.rad(),
        delta_p: l.delta_p_hz.rad(),
        delta_diff: 0.0,
        gamma_eff: l.gamma_eff_hz.rad(),
        gamma_3: l.gamma3_hz.rad(),
    }
}

/// Group-index targets: explicit list, else a log grid in 1/n_g.
pub fn ng_targets(cfg: &ExperimentConfig) -> Vec<f64> {
    let s = &cfg.sweep;
    if !s.ng_targets.is_empty() {
        return s.ng_targets.clone();
    }
    logspace(s.inv_ng_min, s.inv_ng_max, s.points).into_iter().map(|v| 1.0 / v).collect()
}

/// Subluminal targets: n_g − 1 log spaced over [10⁻², 10⁴] unless listed.
pub fn sub_ng_targets(cfg: &ExperimentConfig) -> Vec<f64> {
    if !cfg.sweep.ng_targets.is_empty() {
        return cfg.sweep.ng_targets.clone();
    }
    logspace(1e-2, 1e4, cfg.sweep.points).into_iter().map(|v| 1.0 + v).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub experiment: Experiment,
    pub tables: Vec<CsvTable>,
    pub report: String,
    pub failed_rows: usize,
    pub nonconverged_rows: usize,
    pub flags: Vec<String>,
}

impl RunOutput {
    /// 0 success, 2 partial row failures, 4 non-convergence on a row.
    pub fn exit_code(&self) -> i32 {
        if self.nonconverged_rows > 0 {
            4
        } else if self.failed_rows > 0 {
            2
        } else {
            0
        }
    }

    pub fn write(&self, dir: &Path, precision: usize) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut files = Vec::new();
        for t in &self.tables {
            let p = dir.join(format!("{}.csv", t.name));
            std::fs::write(&p, t.render(precision))?;
            files.push(p);
        }
        let p = dir.join(format!("{}_report.txt", self.experiment.name()));
        std::fs::write(&p, &self.report)?;
        files.push(p);
        Ok(files)
    }
}

fn sweep_rows(base: &PumpShiftScenario, targets: &[f64], dps: &[f64], opts: &SweepOptions) -> ShiftSweepResult {
    let mut res = ShiftSweepResult::default();
    for r in sweep_shift_ratio(base, targets, dps, opts) {
        let dp_hz = csv::tidy(r.delta_p / TWO_PI);
        let status = r.status.code().to_string();
        res.rows.push(ResultRow {
            model: Model::Lorentzian,
            inv_ng: r.inv_ng(),
            delta_p_hz: dp_hz,
            delta_l_hz: r.delta_l / TWO_PI,
            ratio: r.ratio,
            status: status.clone(),
        });
        let law = (r.n_g - 1.0) / r.n_g;
        res.rows.push(ResultRow {
            model: Model::Analytic,
            inv_ng: r.inv_ng(),
            delta_p_hz: dp_hz,
            delta_l_hz: law * dp_hz,
            ratio: law,
            status: if r.n_g.is_finite() { "ok".into() } else { status },
        });
    }
    res.sort();
    res
}

/// One table per Δ_p trace.
fn trace_tables(prefix: &str, res: &ShiftSweepResult) -> Vec<CsvTable> {
    let mut dps: Vec<f64> = res.rows.iter().map(|r| r.delta_p_hz).collect();
    dps.sort_by(|a, b| a.total_cmp(b));
    dps.dedup();
    dps.iter()
        .map(|&dp| {
            let mut t = CsvTable::new(
                format!("{prefix}_dp_{dp:e}hz"),
                &["inv_ng", "delta_p_hz", "delta_l_hz", "ratio", "analytic_ratio", "status"],
            );
            let lor = res.rows.iter().filter(|r| r.model == Model::Lorentzian && r.delta_p_hz == dp);
            let ana: Vec<&ResultRow> = res.rows.iter().filter(|r| r.model == Model::Analytic && r.delta_p_hz == dp).collect();
            for (r, a) in lor.zip(ana) {
                t.push(vec![
                    r.inv_ng.into(),
                    r.delta_p_hz.into(),
                    r.delta_l_hz.into(),
                    r.ratio.into(),
                    a.ratio.into(),
                    Cell::Text(r.status.clone()),
                ]);
            }
            t
        })
        .collect()
}

fn sweep_options(cfg: &ExperimentConfig) -> SweepOptions {
    SweepOptions { tol: cfg.solver.tol, calib_rtol: cfg.solver.calib_rtol }
}

fn count(res: &ShiftSweepResult) -> (usize, usize) {
    let nc = res.rows.iter().filter(|r| r.status == "no_convergence").count();
    (res.failed(), nc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig7Scan {
    /// (δ_diff, Re exact, Re θρ₂₁, Im exact, Im θρ₂₁)
    pub rows: Vec<[f64; 5]>,
    /// max |Re(exact − approx)|/|exact|
    pub max_re_dev: f64,
    pub max_im_dev: f64,
    pub validity_warnings: usize,
    pub regime_ok: bool,
}

/// ρ₃₁ exact vs θρ₂₁ over δ_diff ∈ ±10Γ_eff.
pub fn fig7_scan(p: &ThreeLevelParams, points: usize) -> Result<Fig7Scan> {
    let mut rows = Vec::with_capacity(points);
    let (mut re, mut im, mut warn) = (0.0f64, 0.0f64, 0);
    for x in linspace(-10.0 * p.gamma_eff, 10.0 * p.gamma_eff, points) {
        let q = ThreeLevelParams { delta_diff: x, ..*p };
        let e = build_effective_two_level(&q)?;
        let a = rho31_approx(&e, &two_level_steady_state(&e));
        warn += a.validity_warning as usize;
        let ex = three_level_steady_state(&q)?.rho31();
        let d = ex - a.value;
        re = re.max(d.re.abs() / ex.norm());
        im = im.max(d.im.abs() / ex.norm());
        rows.push([x, ex.re, a.value.re, ex.im, a.value.im]);
    }
    Ok(Fig7Scan { rows, max_re_dev: re, max_im_dev: im, validity_warnings: warn, regime_ok: validate_elimination_regime(p, 10.0).all_pass() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig8Result {
    /// (offset, three-level n − 1 relative to center, δ/(QΓ))
    pub rows: Vec<[f64; 3]>,
    pub half_width: f64,
    pub slope: f64,
    pub r2: f64,
    pub slope_q_gamma: f64,
    pub slope_2q_gamma: f64,
    /// "1/(Q Gamma)" or "1/(2 Q Gamma)", whichever is closer.
    pub matches: &'static str,
}

pub fn appendix_system(a: &config::AppendixConfig) -> Result<DualIsotopeSystem> {
    let cav = CavityParams::from_mirror(a.l, a.lambda, a.r)?;
    let g0 = a.g0_times_q / cav.q;
    DualIsotopeSystem::single(a.n, a.mu, a.gamma_eff_hz.rad(), a.gamma3_hz.rad(), a.delta_p_hz.rad(), g0, cav).locked()
}

/// Saturated three-level index across the lasing range, fitted by a line.
pub fn fig8_linearity(a: &config::AppendixConfig, points: usize) -> Result<Fig8Result> {
    let sys = appendix_system(a)?;
    let w = sys.lasing_half_width()?;
    let gamma = a.gamma_eff_hz.rad();
    let q = sys.cavity.q;
    let dn0 = sys.dn_sat(0.0)?;
    let mut rows = Vec::with_capacity(points);
    for x in linspace(-0.98 * w, 0.98 * w, points) {
        rows.push([x, sys.dn_sat(x)? - dn0, x / (q * gamma)]);
    }
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let (slope, _, r2) = linear_fit(&xs, &ys);
    let (s1, s2) = (1.0 / (q * gamma), 0.5 / (q * gamma));
    let matches = if (slope - s1).abs() <= (slope - s2).abs() { "1/(Q Gamma)" } else { "1/(2 Q Gamma)" };
    Ok(Fig8Result { rows, half_width: w, slope, r2, slope_q_gamma: s1, slope_2q_gamma: s2, matches })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixBound {
    pub q: f64,
    pub g0: f64,
    /// sqrt(μ²NΓQ/(ħε₀)).
    pub closed_form: f64,
    /// sqrt(μ²NΓ(2Q − 1/G₀)/(ħε₀)).
    pub chain_2q: f64,
    /// sqrt(μ²NΓ(Q − 1/G₀)/(ħε₀)), consistent with ζ = ħNΓ/(2ε₀).
    pub chain_q: f64,
    pub reference_value: f64,
    /// Largest probe Rabi frequency seen by the explicit solve, μE_max/ħ.
    pub explicit: f64,
}

pub fn appendix_bound(a: &config::AppendixConfig) -> Result<AppendixBound> {
    let cav = CavityParams::from_mirror(a.l, a.lambda, a.r)?;
    let g0 = a.g0_times_q / cav.q;
    let k = a.mu * a.mu * a.n * a.gamma_eff_hz.rad() / (HBAR * EPS0);
    let explicit = appendix_system(a).map(|s| a.mu * s.e_lock / HBAR).unwrap_or(f64::NAN);
    Ok(AppendixBound {
        q: cav.q,
        g0,
        closed_form: (k * cav.q).sqrt(),
        chain_2q: (k * (2.0 * cav.q - 1.0 / g0)).max(0.0).sqrt(),
        chain_q: (k * (cav.q - 1.0 / g0)).max(0.0).sqrt(),
        reference_value: a.reference_value,
        explicit,
    })
}

fn appendix_report(b: &AppendixBound, delta_p: f64) -> String {
    let mut s = String::new();
    s.push_str(&format!("Q (mirror formula)            {:.6e}\n", b.q));
    s.push_str(&format!("G0 used                       {:.6e}\n", b.g0));
    s.push_str(&format!("Omega_L,max closed form       {:.6e} rad/s\n", b.closed_form));
    s.push_str(&format!("Omega_L,max (2Q - 1/G0) chain {:.6e} rad/s\n", b.chain_2q));
    s.push_str(&format!("Omega_L,max (Q - 1/G0) chain  {:.6e} rad/s\n", b.chain_q));
    s.push_str(&format!("Omega_L,max explicit solve    {:.6e} rad/s\n", b.explicit));
    s.push_str(&format!("reference value               {:.6e} rad/s\n", b.reference_value));
    s.push_str(&format!(
        "FLAG factor discrepancy: closed form / reference = {:.4}, (Q - 1/G0) chain / reference = {:.4}\n",
        b.closed_form / b.reference_value,
        b.chain_q / b.reference_value
    ));
    s.push_str(&format!(
        "|delta_p| / Omega_L,max (closed form) = {:.3e} ({})\n",
        delta_p / b.closed_form,
        if delta_p / b.closed_form >= 10.0 { "far detuned" } else { "NOT far detuned" }
    ));
    s
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let t0 = Instant::now();
    let exp = cfg.experiment;
    let mut flags = Vec::new();
    let mut tables = Vec::new();
    let mut report = format!("experiment {}\n", exp.name());
    let (mut failed, mut nonconv) = (0, 0);
    let dps: Vec<f64> = cfg.sweep.delta_p_hz.iter().map(|h| h.rad()).collect();
    match exp {
        Experiment::Fig4Sub | Experiment::Fig4Super | Experiment::Fig5 | Experiment::CustomSweep => {
            let cav = cavity(cfg)?;
            let (medium, targets) = match (exp, cfg.sweep.model) {
                (Experiment::Fig4Sub, _) | (Experiment::CustomSweep, SweepModel::Sub) => (Medium::Sub(sub_medium(cfg)), sub_ng_targets(cfg)),
                (Experiment::CustomSweep, SweepModel::Linear) => (Medium::Linear { alpha: 0.0 }, ng_targets(cfg)),
                _ => (Medium::Super(dual_medium(cfg)), ng_targets(cfg)),
            };
            // single-trace experiments use the smallest shift only
            let dps = if matches!(exp, Experiment::Fig4Sub | Experiment::Fig4Super) {
                vec![dps.iter().cloned().fold(f64::INFINITY, |a, b| if b.abs() < a.abs() { b } else { a })]
            } else {
                dps
            };
            let base = PumpShiftScenario { delta_p: 0.0, medium, cavity: cav };
            let res = sweep_rows(&base, &targets, &dps, &sweep_options(cfg));
            (failed, nonconv) = count(&res);
            if exp == Experiment::Fig4Sub {
                let bad = res
                    .rows
                    .iter()
                    .filter(|r| r.model == Model::Lorentzian && r.ok())
                    .filter(|r| !(r.delta_l_hz / r.delta_p_hz > 0.0 && r.delta_l_hz / r.delta_p_hz < 1.0))
                    .count();
                if bad > 0 {
                    flags.push(format!("subluminal_shift_outside_(0,dp): {bad}"));
                }
            }
            let n_unreach = res.rows.iter().filter(|r| r.model == Model::Lorentzian && r.status == "unreachable").count();
            if n_unreach > 0 {
                flags.push(format!("unreachable_ng_targets: {n_unreach}"));
            }
            tables.extend(trace_tables(exp.name(), &res));
            tables.push(res.table(&format!("{}_rows", exp.name())));
            report.push_str(&emit_report(&res, ReportFormat::Text));
        }
        Experiment::Fig6 => {
            let base = DualIsotopeSystem::build(&oracle_params(cfg), 0.0);
            let s = &cfg.sweep;
            let targets: Vec<f64> = if s.ng_targets.is_empty() {
                logspace(s.oracle_inv_ng_min, s.oracle_inv_ng_max, s.oracle_points).into_iter().map(|v| 1.0 / v).collect()
            } else {
                s.ng_targets.clone()
            };
            let dp = dps.iter().cloned().fold(f64::INFINITY, |a, b| if b.abs() < a.abs() { b } else { a });
            let opts = IterateOptions {
                tol_freq: cfg.solver.tol_freq,
                tol_field: cfg.solver.tol_field,
                max_iter: cfg.solver.max_iter,
                relaxation: cfg.solver.relaxation,
            };
            let rows = compare_with_lorentzian(&base, &targets, dp, &opts);
            let mut t = CsvTable::new(
                "fig6_oracle",
                &["ng_target", "inv_ng_oracle", "ratio_oracle", "inv_ng_lorentzian", "ratio_lorentzian", "abs_diff", "rel_diff", "n2_oracle", "iterations", "status"],
            );
            let mut res = ShiftSweepResult::default();
            let mut worst = 0.0f64;
            for r in &rows {
                t.push(vec![
                    r.ng_target.into(),
                    (1.0 / r.ng_oracle).into(),
                    r.ratio_oracle.into(),
                    (1.0 / r.ng_lorentzian).into(),
                    r.ratio_lorentzian.into(),
                    r.abs_diff.into(),
                    r.rel_diff.into(),
                    r.n2_oracle.into(),
                    (r.iterations as f64).into(),
                    Cell::Text(r.status.clone()),
                ]);
                if r.status == "ok" {
                    worst = worst.max(r.rel_diff);
                }
                for (model, inv, ratio) in [(Model::Oracle, 1.0 / r.ng_oracle, r.ratio_oracle), (Model::Lorentzian, 1.0 / r.ng_lorentzian, r.ratio_lorentzian)] {
                    res.rows.push(ResultRow {
                        model,
                        inv_ng: inv,
                        delta_p_hz: csv::tidy(dp / TWO_PI),
                        delta_l_hz: ratio * dp / TWO_PI,
                        ratio,
                        status: r.status.clone(),
                    });
                }
            }
            res.sort();
            failed = rows.iter().filter(|r| r.status != "ok").count();
            nonconv = rows.iter().filter(|r| r.status == "no_convergence").count();
            if worst > 0.10 {
                flags.push(format!("oracle_band_exceeded: max rel diff {worst:.4e}"));
            }
            report.push_str(&format!("oracle vs lorentzian max rel diff {worst:.6e}\n"));
            report.push_str(&emit_report(&res, ReportFormat::Text));
            tables.push(t);
            tables.push(res.table("fig6_rows"));
        }
        Experiment::Fig7 => {
            let p = lambda_params(cfg);
            let scan = fig7_scan(&p, cfg.sweep.detuning_points)?;
            let mut t = CsvTable::new("fig7_rho31", &["delta_diff_hz", "re_rho31_exact", "re_rho31_approx", "im_rho31_exact", "im_rho31_approx"]);
            for r in &scan.rows {
                t.push(vec![(r[0] / TWO_PI).into(), r[1].into(), r[2].into(), r[3].into(), r[4].into()]);
            }
            if scan.validity_warnings > 0 {
                flags.push(format!("rho31_validity_warning: {}", scan.validity_warnings));
            }
            if !scan.regime_ok {
                flags.push("elimination_regime_fail".into());
            }
            report.push_str(&format!("max |Re dev|/|rho31| {:.6e}\nmax |Im dev|/|rho31| {:.6e}\n", scan.max_re_dev, scan.max_im_dev));
            tables.push(t);
        }
        Experiment::Fig8 | Experiment::Appendix => {
            let a = &cfg.physics.appendix;
            if exp == Experiment::Fig8 {
                let f = fig8_linearity(a, cfg.sweep.detuning_points)?;
                let mut t = CsvTable::new("fig8_index", &["delta_hz", "dn_three_level", "dn_linear_q_gamma"]);
                for r in &f.rows {
                    t.push(vec![(r[0] / TWO_PI).into(), r[1].into(), r[2].into()]);
                }
                report.push_str(&format!(
                    "lasing half width {:.6e} rad/s\nfit slope {:.6e}\nR^2 {:.8}\n1/(Q Gamma) {:.6e}\n1/(2 Q Gamma) {:.6e}\nmatches {}\n",
                    f.half_width, f.slope, f.r2, f.slope_q_gamma, f.slope_2q_gamma, f.matches
                ));
                tables.push(t);
            }
            let b = appendix_bound(a)?;
            flags.push("appendix_factor_discrepancy".into());
            report.push_str(&appendix_report(&b, a.delta_p_hz.rad()));
        }
    }
    report.push_str(&format!("rows_failed {failed}\nrows_nonconverged {nonconv}\n"));
    for f in &flags {
        report.push_str(&format!("flag {f}\n"));
    }
    report.push_str(&format!("runtime_s {:.3}\n", t0.elapsed().as_secs_f64()));
    log::info!("{} finished: {} tables, {failed} failed rows", exp.name(), tables.len());
    Ok(RunOutput { experiment: exp, tables, report, failed_rows: failed, nonconverged_rows: nonconv, flags })
}

/// Parse, override and run; used by the binary.
pub fn run_from_path(path: &Path, experiment: Option<&str>) -> Result<RunOutput> {
    let mut cfg = load_config(path)?;
    if let Some(name) = experiment {
        cfg.experiment = Experiment::parse(name)?;
    }
    run_experiment(&cfg)
}

impl From<toml::de::Error> for DlsError {
    fn from(e: toml::de::Error) -> Self {
        DlsError::Config(e.to_string())
    }
}
