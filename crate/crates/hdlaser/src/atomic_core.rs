//! Λ-system density matrices: the full three-level steady state and its
//! adiabatically eliminated two-level reduction.
//!
//! Level order is |1⟩, |2⟩, |3⟩ (index 0, 1, 2). The probe couples |1⟩↔|3⟩,
//! the pump |2⟩↔|3⟩ and optical pumping moves population |1⟩→|2⟩.
//!
//! Factor-2 note: the effective Rabi frequency here is Ω_LΩ_p/(2δ_p) = θΩ_L.
//! The alternative Ω_LΩ_p/(4δ_p) gives half the coherence of the full
//! three-level solution, so it is not used.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{DlsError, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelParams {
    pub omega_l: f64,
    pub omega_p: f64,
    pub delta_p: f64,
    pub delta_diff: f64,
    pub gamma_eff: f64,
    pub gamma_3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveTwoLevel {
    pub omega_eff: f64,
    pub delta: f64,
    pub gamma_eff: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelState {
    pub rho11: f64,
    pub rho22: f64,
    pub rho21: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreeLevelState {
    pub rho: DMatrix<C64>,
}

impl ThreeLevelState {
    pub fn rho31(&self) -> C64 {
        self.rho[(2, 0)]
    }
    pub fn rho21(&self) -> C64 {
        self.rho[(1, 0)]
    }
    pub fn population(&self, k: usize) -> f64 {
        self.rho[(k, k)].re
    }
}

/// Direction of the incoherent optical pumping between the ground states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pumping {
    /// |1⟩→|2⟩: Raman gain on the probe.
    #[default]
    Forward,
    /// |2⟩→|1⟩: Raman depletion (the dip isotope).
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Fraction of Γ₃ decay landing in |1⟩; the rest goes to |2⟩.
    pub branch_to_1: f64,
    pub pumping: Pumping,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { branch_to_1: 0.5, pumping: Pumping::Forward }
    }
}

/// Incoherent transfer `from`→`to` at `rate`.
#[derive(Debug, Clone, Copy)]
pub struct Jump {
    pub rate: f64,
    pub from: usize,
    pub to: usize,
}

pub fn build_effective_two_level(p: &ThreeLevelParams) -> Result<EffectiveTwoLevel> {
    if p.delta_p == 0.0 {
        return Err(DlsError::Domain("zero one-photon detuning: elimination undefined".into()));
    }
    let theta = p.omega_p / (2.0 * p.delta_p);
    Ok(EffectiveTwoLevel {
        omega_eff: theta * p.omega_l,
        delta: p.delta_diff + (p.omega_l * p.omega_l - p.omega_p * p.omega_p) / (4.0 * p.delta_p),
        gamma_eff: p.gamma_eff,
        theta,
    })
}

pub fn two_level_steady_state(e: &EffectiveTwoLevel) -> TwoLevelState {
    let w2 = e.omega_eff * e.omega_eff;
    let d = 2.0 * w2 + e.gamma_eff * e.gamma_eff + 4.0 * e.delta * e.delta;
    let rho11 = w2 / d;
    TwoLevelState {
        rho11,
        rho22: 1.0 - rho11,
        rho21: C64::new(2.0 * e.delta, -e.gamma_eff) * (e.omega_eff / d),
    }
}

/// Effective two-level Hamiltonian (non-Hermitian part carries Γ_eff on |1⟩).
pub fn two_level_hamiltonian(e: &EffectiveTwoLevel) -> DMatrix<C64> {
    let c = C64::from(-0.5 * e.omega_eff);
    DMatrix::from_row_slice(2, 2, &[C64::new(e.delta, -0.5 * e.gamma_eff), c, c, C64::from(0.0)])
}

pub fn two_level_jumps(e: &EffectiveTwoLevel) -> Vec<Jump> {
    vec![Jump { rate: e.gamma_eff, from: 0, to: 1 }]
}

/// Non-Hermitian Λ Hamiltonian in the rotating frame. Decay widths sit on the
/// diagonal; the matching repopulation is in [`three_level_jumps`].
pub fn three_level_hamiltonian(p: &ThreeLevelParams, pumping: Pumping) -> DMatrix<C64> {
    let mut h = DMatrix::from_row_slice(
        3,
        3,
        &[
            C64::from(p.delta_diff),
            C64::from(0.0),
            C64::from(-0.5 * p.omega_l),
            C64::from(0.0),
            C64::from(0.0),
            C64::from(0.5 * p.omega_p),
            C64::from(-0.5 * p.omega_l),
            C64::from(0.5 * p.omega_p),
            C64::new(-p.delta_p, -0.5 * p.gamma_3),
        ],
    );
    let k = match pumping {
        Pumping::Forward => 0,
        Pumping::Reversed => 1,
    };
    h[(k, k)] -= I * (0.5 * p.gamma_eff);
    h
}

pub fn three_level_jumps(p: &ThreeLevelParams, opt: &SolveOptions) -> Vec<Jump> {
    let pump = match opt.pumping {
        Pumping::Forward => Jump { rate: p.gamma_eff, from: 0, to: 1 },
        Pumping::Reversed => Jump { rate: p.gamma_eff, from: 1, to: 0 },
    };
    vec![
        pump,
        Jump { rate: p.gamma_3 * opt.branch_to_1, from: 2, to: 0 },
        Jump { rate: p.gamma_3 * (1.0 - opt.branch_to_1), from: 2, to: 1 },
    ]
}

/// Row-major vectorized generator: vec(dρ/dt) = L vec(ρ).
pub fn liouvillian(h: &DMatrix<C64>, jumps: &[Jump]) -> DMatrix<C64> {
    let n = h.nrows();
    let id = DMatrix::<C64>::identity(n, n);
    let mut l = (h.kronecker(&id) - id.kronecker(&h.map(|z| z.conj()))) * (-I);
    for j in jumps {
        l[(j.to * n + j.to, j.from * n + j.from)] += C64::from(j.rate);
    }
    l
}

/// dρ/dt evaluated directly from the master equation (no vectorization).
pub fn liouville_rhs(h: &DMatrix<C64>, jumps: &[Jump], rho: &DMatrix<C64>) -> DMatrix<C64> {
    let hd = h.adjoint();
    let mut out = (h * rho - rho * hd) * (-I);
    for j in jumps {
        out[(j.to, j.to)] += rho[(j.from, j.from)] * j.rate;
    }
    out
}

/// Steady state by direct linear solve with the trace condition in row 0.
pub fn steady_state(h: &DMatrix<C64>, jumps: &[Jump]) -> Result<DMatrix<C64>> {
    let n = h.nrows();
    let mut l = liouvillian(h, jumps);
    let scale = l.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(DlsError::NonFinite("Liouvillian"));
    }
    l /= C64::from(scale);
    for c in 0..n * n {
        l[(0, c)] = C64::from(0.0);
    }
    for k in 0..n {
        l[(0, k * n + k)] = C64::from(1.0);
    }
    let mut b = DVector::<C64>::zeros(n * n);
    b[0] = C64::from(1.0);

    let lu = l.clone().lu();
    let u = lu.u();
    let piv: Vec<f64> = (0..n * n).map(|k| u[(k, k)].norm()).collect();
    let pmax = piv.iter().cloned().fold(0.0, f64::max);
    let pmin = piv.iter().cloned().fold(f64::INFINITY, f64::min);
    let pivot_ratio = pmax / pmin;
    if !(pmin > 0.0) || pivot_ratio > 1e15 {
        return Err(DlsError::Singular { pivot_ratio });
    }
    let mut x = lu.solve(&b).ok_or(DlsError::Singular { pivot_ratio })?;
    // one refinement step
    let r = &b - &l * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(DlsError::NonFinite("steady state"));
    }
    Ok(DMatrix::from_row_slice(n, n, x.as_slice()))
}

pub fn three_level_steady_state(p: &ThreeLevelParams) -> Result<ThreeLevelState> {
    three_level_steady_state_with(p, &SolveOptions::default())
}

pub fn three_level_steady_state_with(p: &ThreeLevelParams, opt: &SolveOptions) -> Result<ThreeLevelState> {
    if !(p.gamma_eff > 0.0 && p.gamma_3 > 0.0) {
        return Err(DlsError::Domain("decay rates must be positive".into()));
    }
    let h = three_level_hamiltonian(p, opt.pumping);
    let rho = steady_state(&h, &three_level_jumps(p, opt))?;
    Ok(ThreeLevelState { rho })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rho31Approx {
    pub value: C64,
    /// Set when Ω_eff/Γ_eff > 0.1 (the approximation assumes a nearly pure state).
    pub validity_warning: bool,
}

pub fn rho31_approx(e: &EffectiveTwoLevel, s: &TwoLevelState) -> Rho31Approx {
    Rho31Approx {
        value: s.rho21 * e.theta,
        validity_warning: (e.omega_eff / e.gamma_eff).abs() > 0.1,
    }
}

/// |ρ₂₁|/sqrt(ρ₁₁ρ₂₂) and the closed form it should equal.
pub fn purity_ratio(e: &EffectiveTwoLevel, s: &TwoLevelState) -> (f64, f64) {
    let g2 = e.gamma_eff * e.gamma_eff + 4.0 * e.delta * e.delta;
    let lhs = s.rho21.norm() / (s.rho11 * s.rho22).sqrt();
    let rhs = (g2 / (e.omega_eff * e.omega_eff + g2)).sqrt();
    (lhs, rhs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeFlag {
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub threshold: f64,
    pub detuning_over_gamma3: RegimeFlag,
    pub detuning_over_pump: RegimeFlag,
    pub pump_over_probe: RegimeFlag,
}

impl RegimeReport {
    pub fn all_pass(&self) -> bool {
        self.detuning_over_gamma3.pass && self.detuning_over_pump.pass && self.pump_over_probe.pass
    }
}

pub fn validate_elimination_regime(p: &ThreeLevelParams, threshold: f64) -> RegimeReport {
    let flag = |num: f64, den: f64| {
        let ratio = num.abs() / den.abs();
        // rad/s conversions leave ratios like 9.999999999999998
        RegimeFlag { ratio, pass: ratio >= threshold * (1.0 - 1e-12) }
    };
    RegimeReport {
        threshold,
        detuning_over_gamma3: flag(p.delta_p, p.gamma_3),
        detuning_over_pump: flag(p.delta_p, p.omega_p),
        pump_over_probe: flag(p.omega_p, p.omega_l),
    }
}

/// Explicit RK4 on the two-level master equation until ‖dρ/dt‖ drops below
/// `tol` (relative to Γ_eff). Slow; kept as a cross-check of the closed form.
pub fn two_level_time_stepped(e: &EffectiveTwoLevel, tol: f64, max_steps: usize) -> Result<TwoLevelState> {
    let h = two_level_hamiltonian(e);
    let jumps = two_level_jumps(e);
    let scale = e.gamma_eff.abs().max(e.omega_eff.abs()).max(e.delta.abs());
    let dt = 0.05 / scale;
    let mut rho = DMatrix::from_row_slice(2, 2, &[C64::from(0.0), C64::from(0.0), C64::from(0.0), C64::from(1.0)]);
    for _ in 0..max_steps {
        let k1 = liouville_rhs(&h, &jumps, &rho);
        let k2 = liouville_rhs(&h, &jumps, &(&rho + &k1 * C64::from(0.5 * dt)));
        let k3 = liouville_rhs(&h, &jumps, &(&rho + &k2 * C64::from(0.5 * dt)));
        let k4 = liouville_rhs(&h, &jumps, &(&rho + &k3 * C64::from(dt)));
        rho += (k1.clone() + k2 * C64::from(2.0) + k3 * C64::from(2.0) + k4) * C64::from(dt / 6.0);
        if k1.norm() < tol * e.gamma_eff {
            return Ok(TwoLevelState { rho11: rho[(0, 0)].re, rho22: rho[(1, 1)].re, rho21: rho[(1, 0)] });
        }
    }
    Err(DlsError::NoConvergence { iterations: max_steps, residual_freq: f64::NAN, residual_field: f64::NAN })
}
