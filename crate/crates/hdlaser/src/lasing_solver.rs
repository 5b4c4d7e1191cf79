//! Lasing frequency from the resonance condition ω·n(ω) = ω_L0, before and
//! after a pump shift Δ_p, plus the group index and transfer-ratio sweeps.
//!
//! Everything runs in offsets D = ω − ω_L0 with n − 1 carried separately, so
//! the large optical frequency never enters a subtraction. A pump shift moves
//! the gain (and dip) profile rigidly by Δ_p, so the shifted index at D is the
//! unshifted one at D − Δ_p.

use rayon::prelude::*;

use crate::error::{DlsError, Result};
use crate::gain_medium::{
    lasing_half_width_sub, lasing_half_width_super, saturated_index_sub, saturated_index_super, CavityParams,
    DualMediumParams, MediumParams,
};
use crate::numerics::{bisect_secant, bracket_outward, calibrate_decreasing, derivative};

/// n − 1 as a function of the offset from the profile center.
pub trait IndexProfile: Sync {
    fn dn(&self, offset: f64) -> Result<f64>;
    fn omega_l0(&self) -> f64;
    /// Natural frequency scale, used for finite-difference steps.
    fn width(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Medium {
    /// n − 1 = α·δ everywhere (no threshold).
    Linear { alpha: f64 },
    Sub(MediumParams),
    Super(DualMediumParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpShiftScenario {
    pub delta_p: f64,
    pub medium: Medium,
    pub cavity: CavityParams,
}

impl IndexProfile for PumpShiftScenario {
    fn dn(&self, offset: f64) -> Result<f64> {
        match &self.medium {
            Medium::Linear { alpha } => Ok(alpha * offset),
            Medium::Sub(m) => saturated_index_sub(m, &self.cavity, offset),
            Medium::Super(d) => saturated_index_super(d, &self.cavity, offset),
        }
    }

    fn omega_l0(&self) -> f64 {
        self.cavity.omega_l0
    }

    fn width(&self) -> f64 {
        match &self.medium {
            Medium::Linear { .. } => 1e6,
            Medium::Sub(m) => m.gamma,
            Medium::Super(d) => d.medium2.gamma,
        }
    }
}

impl PumpShiftScenario {
    pub fn with_shift(&self, delta_p: f64) -> Self {
        PumpShiftScenario { delta_p, ..*self }
    }

    /// Half-width of the above-threshold window, if there is one.
    pub fn window(&self) -> Option<f64> {
        match &self.medium {
            Medium::Linear { .. } => None,
            Medium::Sub(m) => lasing_half_width_sub(m, &self.cavity).ok(),
            Medium::Super(d) => lasing_half_width_super(d, &self.cavity).ok(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LasingSolution {
    pub omega_l: f64,
    pub delta_l: f64,
    /// ε = ω_L·n′_s(ω_L) − ω_L0 at the returned root, rad/s.
    pub residual: f64,
    pub n_g: f64,
    pub iterations: usize,
}

/// ∂(nω)/∂ω at the profile center: 1 + (n − 1) + ω₀·dn′, with the step
/// halved until two Richardson estimates agree.
pub fn group_index<F>(dn: F, omega0: f64, h0: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let n0 = dn(0.0)?;
    let mut h = h0;
    let mut prev = derivative(&dn, 0.0, h)?;
    for _ in 0..30 {
        h *= 0.25;
        let d = derivative(&dn, 0.0, h)?;
        if (d - prev).abs() <= 1e-7 * d.abs().max(1e-300) {
            let ng = 1.0 + n0 + omega0 * d;
            return if ng.is_finite() { Ok(ng) } else { Err(DlsError::NonFinite("group index")) };
        }
        prev = d;
    }
    // rounding floor reached; keep the last estimate
    let ng = 1.0 + n0 + omega0 * prev;
    if ng.is_finite() {
        Ok(ng)
    } else {
        Err(DlsError::NonFinite("group index"))
    }
}

pub fn scenario_group_index<P: IndexProfile>(p: &P) -> Result<f64> {
    group_index(|x| p.dn(x), p.omega_l0(), 1e-2 * p.width())
}

/// Resonance residual ε(D) = D + (ω_L0 + D)·dn(D − Δ_p).
pub fn resonance_residual<P: IndexProfile>(p: &P, delta_p: f64, d: f64) -> Result<f64> {
    Ok(d + (p.omega_l0() + d) * p.dn(d - delta_p)?)
}

/// Lasing frequency nearest ω_L0 after the pump shift. The root is polished
/// until the bracket collapses; `tol` bounds the accepted |ε|.
pub fn solve_lasing_frequency(s: &PumpShiftScenario, tol: f64) -> Result<LasingSolution> {
    let n_g = scenario_group_index(s)?;
    solve_with_group_index(s, tol, n_g)
}

fn solve_with_group_index(s: &PumpShiftScenario, tol: f64, n_g: f64) -> Result<LasingSolution> {
    let w0 = s.omega_l0();
    let f = |d: f64| resonance_residual(s, s.delta_p, d);
    let f0 = f(0.0)?;
    if f0 == 0.0 {
        return Ok(LasingSolution { omega_l: w0, delta_l: 0.0, residual: 0.0, n_g, iterations: 0 });
    }
    let h0 = 1e-3 * s.delta_p.abs().max(tol);
    let (a, b) = bracket_outward(f, 0.0, f0, h0, 200)?;
    let root = bisect_secant(f, a, b, 0.0, 400)?;
    if !(root.fx.abs() <= tol) {
        return Err(DlsError::NoConvergence { iterations: root.iterations, residual_freq: root.fx, residual_field: 0.0 });
    }
    Ok(LasingSolution {
        omega_l: w0 + root.x,
        delta_l: root.x,
        residual: root.fx,
        n_g,
        iterations: root.iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Sub,
    SuperLinearized,
}

/// (n_g − 1)/n_g. The same law holds in both regimes.
pub fn shift_ratio_analytic(n_g: f64, _regime: Regime) -> Result<f64> {
    if n_g == 0.0 {
        return Err(DlsError::Pole);
    }
    Ok((n_g - 1.0) / n_g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub tol: f64,
    /// Relative tolerance of the calibration knob.
    pub calib_rtol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { tol: crate::constants::TWO_PI * 1e-4, calib_rtol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    Failed(String),
}

impl RowStatus {
    pub fn code(&self) -> &str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Failed(c) => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub ng_target: f64,
    /// Group index actually reached after calibration.
    pub n_g: f64,
    pub delta_p: f64,
    pub delta_l: f64,
    pub ratio: f64,
    pub status: RowStatus,
}

impl SweepRow {
    pub fn inv_ng(&self) -> f64 {
        1.0 / self.n_g
    }
}

pub fn error_code(e: &DlsError) -> String {
    match e {
        DlsError::BelowThreshold { .. } => "below_threshold",
        DlsError::NoLasingSolution => "no_solution",
        DlsError::Unreachable { .. } => "unreachable",
        DlsError::NoConvergence { .. } => "no_convergence",
        DlsError::Pole => "pole",
        DlsError::Singular { .. } => "singular",
        _ => "error",
    }
    .to_string()
}

/// Adjust the medium so the unshifted group index is `target`. Super: bisection
/// on G₂ at fixed N₂. Sub: closed form for Γ at fixed G₀. Linear: α.
pub fn calibrate(base: &PumpShiftScenario, target: f64, rtol: f64) -> Result<PumpShiftScenario> {
    let w0 = base.omega_l0();
    match base.medium {
        Medium::Linear { .. } => Ok(PumpShiftScenario { medium: Medium::Linear { alpha: (target - 1.0) / w0 }, ..*base }),
        Medium::Sub(m) => {
            if !(target > 1.0) {
                return Err(DlsError::Unreachable { target });
            }
            let gamma = w0 / (base.cavity.q * (target - 1.0));
            let g0 = m.g0();
            let m = MediumParams::with_gain(m.n, m.mu, gamma, g0);
            Ok(PumpShiftScenario { medium: Medium::Sub(m), ..*base })
        }
        Medium::Super(d) => {
            let at = |g2: f64| {
                let s = PumpShiftScenario { medium: Medium::Super(d.with_g2(g2)), ..*base };
                scenario_group_index(&s).ok()
            };
            // n_g falls as the dip deepens
            let g2 = calibrate_decreasing(at, target, 1e-30, rtol).ok_or(DlsError::Unreachable { target })?;
            Ok(PumpShiftScenario { medium: Medium::Super(d.with_g2(g2)), ..*base })
        }
    }
}

/// Grid of (n_g, Δ_p) cells; rows sorted by (Δ_p, 1/n_g). Failed cells are
/// kept as rows with a status code.
pub fn sweep_shift_ratio(
    base: &PumpShiftScenario,
    ng_targets: &[f64],
    delta_p_values: &[f64],
    opts: &SweepOptions,
) -> Vec<SweepRow> {
    let mut rows: Vec<SweepRow> = ng_targets
        .par_iter()
        .flat_map_iter(|&target| {
            let calibrated = calibrate(base, target, opts.calib_rtol)
                .and_then(|s| scenario_group_index(&s).map(|ng| (s, ng)));
            delta_p_values
                .iter()
                .map(|&dp| match &calibrated {
                    Ok((s, ng)) => match solve_with_group_index(&s.with_shift(dp), opts.tol, *ng) {
                        Ok(sol) => SweepRow {
                            ng_target: target,
                            n_g: *ng,
                            delta_p: dp,
                            delta_l: sol.delta_l,
                            ratio: sol.delta_l / dp,
                            status: RowStatus::Ok,
                        },
                        Err(e) => failed_row(target, *ng, dp, &e),
                    },
                    Err(e) => failed_row(target, f64::NAN, dp, e),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    rows.sort_by(|a, b| {
        a.delta_p
            .total_cmp(&b.delta_p)
            .then((1.0 / a.ng_target).total_cmp(&(1.0 / b.ng_target)))
    });
    rows
}

fn failed_row(target: f64, n_g: f64, dp: f64, e: &DlsError) -> SweepRow {
    log::warn!("sweep cell n_g={target} dp={dp}: {e}");
    SweepRow {
        ng_target: target,
        n_g,
        delta_p: dp,
        delta_l: f64::NAN,
        ratio: f64::NAN,
        status: RowStatus::Failed(error_code(e)),
    }
}
