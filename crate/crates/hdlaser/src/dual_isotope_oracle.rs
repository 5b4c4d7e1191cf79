//! Brute-force superluminal laser: two Λ systems (gain isotope, depletion
//! isotope with reversed optical pumping) solved as full density matrices,
//! with the single-mode field and frequency found by alternating updates.
//!
//! Both pumps move together by Δ_p. A pump shift changes the two-photon
//! detuning by −Δ_p and the one-photon detuning by +Δ_p.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::atomic_core::{three_level_steady_state_with, Pumping, SolveOptions, ThreeLevelParams};
use crate::constants::{EPS0, HBAR, MU_RB, TWO_PI};
use crate::error::{DlsError, Result};
use crate::gain_medium::{CavityParams, DualMediumParams, MediumParams};
use crate::lasing_solver::{error_code, solve_lasing_frequency, scenario_group_index, Medium, PumpShiftScenario};
use crate::numerics::{bisect_secant, bracket_outward, calibrate_decreasing, derivative};

/// One isotope's Λ system. `omega_p`, `delta_p`, `gamma_eff`, `gamma_3` are
/// used from `lambda`; the probe and two-photon detuning are set per call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isotope {
    pub lambda: ThreeLevelParams,
    pub n: f64,
    pub mu: f64,
    pub pumping: Pumping,
    /// Two-photon detuning at zero laser offset (light-shift compensation).
    pub offset: f64,
}

/// Exact dressed-state shift of a ground level coupled with Rabi Ω at detuning d.
fn dressed_shift(omega: f64, d: f64) -> f64 {
    d.signum() * ((d * d + omega * omega).sqrt() - d.abs()) / 2.0
}

impl Isotope {
    pub fn theta(&self) -> f64 {
        self.lambda.omega_p / (2.0 * self.lambda.delta_p)
    }

    /// Lorentzian counterpart built from the same numbers.
    pub fn lorentzian(&self) -> MediumParams {
        MediumParams { n: self.n, mu: self.mu, gamma: self.lambda.gamma_eff, theta: self.theta() }
    }

    /// Susceptibility at laser offset `x` and field `e`, with both pumps
    /// shifted by `dp`.
    pub fn chi(&self, x: f64, e: f64, dp: f64) -> Result<C64> {
        if self.n == 0.0 {
            return Ok(C64::from(0.0));
        }
        // weak-probe limit for E = 0
        let omega_l = if e > 0.0 { self.mu * e / HBAR } else { 1e-9 * self.lambda.gamma_eff };
        let p = ThreeLevelParams {
            omega_l,
            delta_diff: x - dp + self.offset,
            delta_p: self.lambda.delta_p + dp,
            ..self.lambda
        };
        let opt = SolveOptions { pumping: self.pumping, ..Default::default() };
        let rho = three_level_steady_state_with(&p, &opt)?;
        let chi = rho.rho31() * (2.0 * self.n * self.mu * self.mu / (HBAR * EPS0 * omega_l));
        debug_assert!(chi.norm() < 0.1, "|chi| = {}", chi.norm());
        Ok(chi)
    }

    fn center(&mut self, e_ref: f64) {
        let omega_l = self.mu * e_ref / HBAR;
        self.offset = dressed_shift(self.lambda.omega_p, self.lambda.delta_p) - dressed_shift(omega_l, self.lambda.delta_p);
    }
}

/// Inputs of the oracle's dual-isotope set; rates in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleParams {
    pub theta1: f64,
    pub theta2: f64,
    pub delta_p: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma_3: f64,
    /// Peak gain of isotope 1, fixes N₁.
    pub g1: f64,
    pub mu: f64,
    pub q: f64,
}

impl Default for OracleParams {
    /// θ₁ = 0.02, θ₂ = 0.005, δ_p = 2π·500 GHz, Γ₁ = 2π·30 MHz, Γ₂ = 2π·10 MHz,
    /// Γ₃ = 2π·6.0666 MHz, G₁ = 10⁻⁵, Q = 10⁶.
    fn default() -> Self {
        OracleParams {
            theta1: 0.02,
            theta2: 0.005,
            delta_p: TWO_PI * 500e9,
            gamma1: TWO_PI * 30e6,
            gamma2: TWO_PI * 10e6,
            gamma_3: TWO_PI * 6.0666e6,
            g1: 1e-5,
            mu: MU_RB,
            q: 1e6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualIsotopeSystem {
    pub isotope1: Isotope,
    pub isotope2: Isotope,
    pub cavity: CavityParams,
    /// Offset between the two isotopes' pump detunings, rad/s.
    pub pump_lock_offset: f64,
    /// Clamped field at the lock point, V/m (0 before [`DualIsotopeSystem::lock`]).
    pub e_lock: f64,
}

impl DualIsotopeSystem {
    /// Physically realizable reference set (see [`OracleParams::default`]).
    pub fn reference(n2: f64) -> Self {
        Self::build(&OracleParams::default(), n2)
    }

    pub fn build(p: &OracleParams, n2: f64) -> Self {
        let lam = |theta: f64, gamma: f64| ThreeLevelParams {
            omega_l: 0.0,
            omega_p: 2.0 * theta * p.delta_p,
            delta_p: p.delta_p,
            delta_diff: 0.0,
            gamma_eff: gamma,
            gamma_3: p.gamma_3,
        };
        let n1 = p.g1 * HBAR * EPS0 * p.gamma1 / (2.0 * p.theta1 * p.theta1 * p.mu * p.mu);
        DualIsotopeSystem {
            isotope1: Isotope { lambda: lam(p.theta1, p.gamma1), n: n1, mu: p.mu, pumping: Pumping::Forward, offset: 0.0 },
            isotope2: Isotope { lambda: lam(p.theta2, p.gamma2), n: n2, mu: p.mu, pumping: Pumping::Reversed, offset: 0.0 },
            cavity: CavityParams::with_q(p.q),
            pump_lock_offset: 0.0,
            e_lock: 0.0,
        }
    }

    /// One gain isotope only, with θ set so that its peak gain is `g0`.
    pub fn single(n: f64, mu: f64, gamma_eff: f64, gamma_3: f64, delta_p: f64, g0: f64, cavity: CavityParams) -> Self {
        let theta = MediumParams::with_gain(n, mu, gamma_eff, g0).theta;
        let lam = ThreeLevelParams { omega_l: 0.0, omega_p: 2.0 * theta * delta_p, delta_p, delta_diff: 0.0, gamma_eff, gamma_3 };
        let iso = Isotope { lambda: lam, n, mu, pumping: Pumping::Forward, offset: 0.0 };
        DualIsotopeSystem {
            isotope1: iso,
            isotope2: Isotope { n: 0.0, pumping: Pumping::Reversed, ..iso },
            cavity,
            pump_lock_offset: 0.0,
            e_lock: 0.0,
        }
    }

    /// Half-width of the window where the clamp condition has a solution.
    pub fn lasing_half_width(&self) -> Result<f64> {
        let g = self.isotope1.lambda.gamma_eff;
        // light shifts make the window slightly lopsided; take the narrow side
        let side = |sgn: f64| crate::gain_medium::lasing_half_width(|x| self.clamp_field(sgn * x, 0.0, None).map(|e| e * e), 0.25 * g);
        Ok(side(1.0)?.min(side(-1.0)?))
    }

    pub fn with_n2(&self, n2: f64) -> Self {
        let mut s = *self;
        s.isotope2.n = n2;
        s
    }

    pub fn lorentzian(&self) -> PumpShiftScenario {
        PumpShiftScenario {
            delta_p: 0.0,
            medium: Medium::Super(DualMediumParams { medium1: self.isotope1.lorentzian(), medium2: self.isotope2.lorentzian() }),
            cavity: self.cavity,
        }
    }

    /// Center both two-photon resonances at the laser frequency, iterating the
    /// probe light shift with the clamped field at the center.
    pub fn lock(&mut self) -> Result<()> {
        let mut e = 1.0;
        for _ in 0..4 {
            self.isotope1.center(e);
            self.isotope2.center(e);
            e = self.clamp_field(0.0, 0.0, None)?;
        }
        self.e_lock = e;
        self.pump_lock_offset = self.isotope2.offset - self.isotope1.offset;
        Ok(())
    }

    pub fn locked(mut self) -> Result<Self> {
        self.lock()?;
        Ok(self)
    }

    pub fn medium_response(&self, x: f64, e: f64) -> Result<C64> {
        self.response(x, e, 0.0)
    }

    pub fn response(&self, x: f64, e: f64, dp: f64) -> Result<C64> {
        Ok(self.isotope1.chi(x, e, dp)? + self.isotope2.chi(x, e, dp)?)
    }

    pub fn gain(&self, x: f64, e: f64, dp: f64) -> Result<f64> {
        Ok(-self.response(x, e, dp)?.im / 2.0)
    }

    /// Field at which gain equals loss, solved in ln E.
    pub fn clamp_field(&self, x: f64, dp: f64, guess: Option<f64>) -> Result<f64> {
        let q2 = 2.0 * self.cavity.q;
        let f = |le: f64| Ok(self.gain(x, le.exp(), dp)? * q2 - 1.0);
        let (a, b) = match guess {
            Some(g) if g > 0.0 => {
                let l = g.ln();
                match (f(l - 3.0), f(l + 3.0)) {
                    (Ok(fa), Ok(fb)) if fa.signum() != fb.signum() => (l - 3.0, l + 3.0),
                    _ => ((1e-3f64).ln(), (1e9f64).ln()),
                }
            }
            _ => ((1e-3f64).ln(), (1e9f64).ln()),
        };
        match bisect_secant(f, a, b, 1e-15, 300) {
            Ok(r) => Ok(r.x.exp()),
            Err(DlsError::NoLasingSolution) => Err(DlsError::BelowThreshold { margin: f(a).unwrap_or(f64::NAN) }),
            Err(e) => Err(e),
        }
    }

    /// Saturated n − 1 at laser offset x (unshifted pumps).
    pub fn dn_sat(&self, x: f64) -> Result<f64> {
        let e = self.clamp_field(x, 0.0, Some(self.e_lock))?;
        Ok(self.response(x, e, 0.0)?.re / 2.0)
    }

    /// Group index at the lock point; fixed Richardson step because the
    /// saturated index carries solver noise at the 10⁻²⁰ level.
    pub fn group_index(&self) -> Result<f64> {
        let h = 1.6e-4 * self.isotope2.lambda.gamma_eff.min(self.isotope1.lambda.gamma_eff);
        let d = derivative(|x| self.dn_sat(x), 0.0, h)?;
        Ok(1.0 + self.dn_sat(0.0)? + self.cavity.omega_l0 * d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterateOptions {
    pub tol_freq: f64,
    pub tol_field: f64,
    pub max_iter: usize,
    /// 1 is plain alternation.
    pub relaxation: f64,
}

impl Default for IterateOptions {
    fn default() -> Self {
        IterateOptions { tol_freq: 1e-2, tol_field: 1e-9, max_iter: 60, relaxation: 0.7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterativeLasingState {
    pub omega_l: f64,
    pub delta_l: f64,
    pub field_amplitude: f64,
    pub iteration: usize,
    pub converged: bool,
    pub residual_freq: f64,
    pub residual_field: f64,
    /// Frequency steps shrank over the last three iterations.
    pub monotone_tail: bool,
}

/// Alternate (a) gain = loss for the field at the current frequency and
/// (b) the resonance condition for the frequency at the current field.
/// `sys` must be locked.
pub fn iterate_lasing(sys: &DualIsotopeSystem, dp: f64, opts: &IterateOptions) -> Result<IterativeLasingState> {
    if sys.e_lock <= 0.0 {
        return Err(DlsError::Domain("system not locked".into()));
    }
    let w0 = sys.cavity.omega_l0;
    let dn0 = sys.dn_sat(0.0)?;
    let mut e = sys.e_lock;
    let mut d = 0.0;
    let mut steps: Vec<f64> = Vec::new();
    let (mut res_f, mut res_e) = (f64::INFINITY, f64::INFINITY);
    for it in 1..=opts.max_iter {
        let e_new = sys.clamp_field(d, dp, Some(e))?;
        res_e = ((e_new - e) / e_new).abs();
        e = e_new;
        let g = |x: f64| -> Result<f64> {
            let dn = sys.response(x, e, dp)?.re / 2.0;
            Ok(x + w0 * (dn - dn0) + x * dn)
        };
        let g0 = g(d)?;
        let d_new = if g0 == 0.0 {
            d
        } else {
            let h = 1e-3 * dp.abs().max(opts.tol_freq);
            let (a, b) = bracket_outward(g, d, g0, h, 200)?;
            bisect_secant(g, a, b, 0.0, 400)?.x
        };
        let step = d_new - d;
        d += opts.relaxation * step;
        res_f = g(d)?.abs().max(step.abs());
        steps.push(step.abs());
        log::debug!("iter {it}: D = {d:.9e} step {step:.3e} E = {e:.9e}");
        if res_f < opts.tol_freq && res_e < opts.tol_field.max(1e-12) || (step == 0.0 && res_e < opts.tol_field) {
            let n = steps.len();
            let monotone_tail = n < 3 || (steps[n - 1] <= steps[n - 2] && steps[n - 2] <= steps[n - 3]);
            if !monotone_tail {
                log::debug!("non-monotone final steps {:?}", &steps[n - 3..]);
            }
            return Ok(IterativeLasingState {
                omega_l: w0 + d,
                delta_l: d,
                field_amplitude: e,
                iteration: it,
                converged: true,
                residual_freq: res_f,
                residual_field: res_e,
                monotone_tail,
            });
        }
    }
    Err(DlsError::NoConvergence { iterations: opts.max_iter, residual_freq: res_f, residual_field: res_e })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub ng_target: f64,
    pub ng_oracle: f64,
    pub ratio_oracle: f64,
    pub ng_lorentzian: f64,
    pub ratio_lorentzian: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub n2_oracle: f64,
    pub iterations: usize,
    pub status: String,
}

/// Calibrate the oracle on N₂ to a group index target.
pub fn calibrate_oracle(base: &DualIsotopeSystem, target: f64, rtol: f64) -> Result<DualIsotopeSystem> {
    let at = |n2: f64| base.with_n2(n2).locked().and_then(|s| s.group_index()).ok();
    let n2 = calibrate_decreasing(at, target, 1e14, rtol).ok_or(DlsError::Unreachable { target })?;
    base.with_n2(n2).locked()
}

/// Calibrate the Lorentzian twin on N₂ (θ₂ fixed), the same knob as the oracle.
pub fn calibrate_lorentzian(base: &DualIsotopeSystem, target: f64, rtol: f64) -> Result<PumpShiftScenario> {
    let at = |n2: f64| scenario_group_index(&base.with_n2(n2).lorentzian()).ok();
    let n2 = calibrate_decreasing(at, target, 1e14, rtol).ok_or(DlsError::Unreachable { target })?;
    Ok(base.with_n2(n2).lorentzian())
}

pub fn compare_with_lorentzian(
    base: &DualIsotopeSystem,
    ng_targets: &[f64],
    dp: f64,
    opts: &IterateOptions,
) -> Vec<ComparisonRow> {
    let mut rows: Vec<ComparisonRow> = ng_targets
        .par_iter()
        .map(|&t| compare_one(base, t, dp, opts).unwrap_or_else(|e| {
            log::warn!("oracle row n_g={t}: {e}");
            ComparisonRow {
                ng_target: t,
                ng_oracle: f64::NAN,
                ratio_oracle: f64::NAN,
                ng_lorentzian: f64::NAN,
                ratio_lorentzian: f64::NAN,
                abs_diff: f64::NAN,
                rel_diff: f64::NAN,
                n2_oracle: f64::NAN,
                iterations: 0,
                status: error_code(&e),
            }
        }))
        .collect();
    rows.sort_by(|a, b| (1.0 / a.ng_target).total_cmp(&(1.0 / b.ng_target)));
    rows
}

fn compare_one(base: &DualIsotopeSystem, t: f64, dp: f64, opts: &IterateOptions) -> Result<ComparisonRow> {
    let sys = calibrate_oracle(base, t, 1e-10)?;
    let ng_o = sys.group_index()?;
    let st = iterate_lasing(&sys, dp, opts)?;
    let lor = calibrate_lorentzian(base, t, 1e-12)?;
    let sol = solve_lasing_frequency(&lor.with_shift(dp), 1e-6)?;
    let (ro, rl) = (st.delta_l / dp, sol.delta_l / dp);
    Ok(ComparisonRow {
        ng_target: t,
        ng_oracle: ng_o,
        ratio_oracle: ro,
        ng_lorentzian: sol.n_g,
        ratio_lorentzian: rl,
        abs_diff: (ro - rl).abs(),
        rel_diff: (ro - rl).abs() / rl.abs(),
        n2_oracle: sys.isotope2.n,
        iterations: st.iteration,
        status: "ok".into(),
    })
}
