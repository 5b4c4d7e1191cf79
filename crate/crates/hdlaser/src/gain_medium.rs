//! Lorentzian Raman gain media: single isotope (subluminal) and gain minus a
//! narrow depletion (superluminal), unsaturated and clamped at cavity loss.
//!
//! With Ω_L = μE/ħ the saturated gain of one isotope is ζ/(E² + η(δ)) and its
//! index n − 1 = (2δ/Γ)·ζ/(E² + η(δ)). "Gain" is the per-pass amplitude
//! quantity −χ″/2, set against the loss 1/(2Q).

use crate::constants::{C0, EPS0, HBAR, OMEGA_RB_D2, TWO_PI};
use crate::error::{DlsError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Number density, m⁻³.
    pub n: f64,
    /// Probe-leg dipole moment, C·m.
    pub mu: f64,
    /// Ground-state relaxation Γ, rad/s.
    pub gamma: f64,
    /// Ω_p/(2δ_p).
    pub theta: f64,
}

impl MediumParams {
    /// Build from a target peak gain G₀, solving for θ.
    pub fn with_gain(n: f64, mu: f64, gamma: f64, g0: f64) -> Self {
        let theta = (g0 * HBAR * EPS0 * gamma / (2.0 * n * mu * mu)).sqrt();
        MediumParams { n, mu, gamma, theta }
    }

    pub fn g0(&self) -> f64 {
        2.0 * self.n * self.theta * self.theta * self.mu * self.mu / (HBAR * EPS0 * self.gamma)
    }

    pub fn zeta(&self) -> f64 {
        HBAR * self.n * self.gamma / (2.0 * EPS0)
    }

    pub fn eta(&self, delta: f64) -> f64 {
        (self.gamma * self.gamma + 4.0 * delta * delta) * HBAR * self.n / (EPS0 * self.g0() * self.gamma)
    }

    /// Gain at intracavity field E² (V²/m²).
    pub fn saturated_gain(&self, e2: f64, delta: f64) -> f64 {
        self.zeta() / (e2 + self.eta(delta))
    }

    /// n − 1 at intracavity field E².
    pub fn saturated_dn(&self, e2: f64, delta: f64) -> f64 {
        2.0 * delta / self.gamma * self.saturated_gain(e2, delta)
    }

    /// Zero density or zero pump: contributes nothing.
    pub fn is_absent(&self) -> bool {
        self.n == 0.0 || self.theta == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("n", self.n), ("mu", self.mu), ("gamma", self.gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DlsError::Domain(format!("medium {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    pub q: f64,
    pub l0: f64,
    pub lambda0: f64,
    pub r: Option<f64>,
    /// Lasing frequency at unit index, rad/s.
    pub omega_l0: f64,
}

impl CavityParams {
    pub fn with_q(q: f64) -> Self {
        CavityParams { q, l0: 0.1, lambda0: 780e-9, r: None, omega_l0: OMEGA_RB_D2 }
    }

    /// Q = 2π(L/λ)/(1 − R).
    pub fn from_mirror(l0: f64, lambda0: f64, r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(DlsError::Domain(format!("reflectivity must lie in (0, 1), got {r}")));
        }
        Ok(CavityParams {
            q: TWO_PI * (l0 / lambda0) / (1.0 - r),
            l0,
            lambda0,
            r: Some(r),
            omega_l0: TWO_PI * C0 / lambda0,
        })
    }

    pub fn loss(&self) -> f64 {
        0.5 / self.q
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0) {
            return Err(DlsError::Domain(format!("Q must be positive, got {}", self.q)));
        }
        if let Some(r) = self.r {
            if !(r > 0.0 && r < 1.0) {
                return Err(DlsError::Domain(format!("reflectivity must lie in (0, 1), got {r}")));
            }
        }
        if !(self.omega_l0 > 0.0) {
            return Err(DlsError::Domain("omega_l0 must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainIndexPoint {
    pub gain: f64,
    /// n − 1, kept separate from the 1 to preserve precision.
    pub index: f64,
}

pub fn unsaturated_sub(m: &MediumParams, omega_l_rabi: f64, delta: f64) -> GainIndexPoint {
    let g0 = m.g0();
    let den = 2.0 * m.theta * m.theta * omega_l_rabi * omega_l_rabi + m.gamma * m.gamma + 4.0 * delta * delta;
    GainIndexPoint {
        gain: 0.5 * g0 * m.gamma * m.gamma / den,
        index: g0 * m.gamma * delta / den,
    }
}

pub fn saturated_field_sub(m: &MediumParams, c: &CavityParams, delta: f64) -> Result<f64> {
    let e2 = 2.0 * c.q * m.zeta() - m.eta(delta);
    if e2 > 0.0 {
        Ok(e2)
    } else {
        Err(DlsError::BelowThreshold { margin: e2 })
    }
}

pub fn saturated_index_sub(m: &MediumParams, c: &CavityParams, delta: f64) -> Result<f64> {
    let e2 = saturated_field_sub(m, c, delta)?;
    Ok(m.saturated_dn(e2, delta))
}

/// Slope of the clamped subluminal index, 1/(QΓ).
pub fn sub_slope(m: &MediumParams, c: &CavityParams) -> f64 {
    1.0 / (c.q * m.gamma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualMediumParams {
    /// Broad gain isotope.
    pub medium1: MediumParams,
    /// Narrow depletion isotope.
    pub medium2: MediumParams,
}

impl DualMediumParams {
    /// Gain and depletion set used by the superluminal sweeps, with G₂ a knob.
    pub fn fig5(g2: f64) -> Self {
        use crate::constants::MU_RB;
        DualMediumParams {
            medium1: MediumParams::with_gain(9e6, MU_RB, TWO_PI * 30e6, 1.2e5),
            medium2: MediumParams::with_gain(1e11, MU_RB, TWO_PI * 10e6, g2),
        }
    }

    pub fn g1(&self) -> f64 {
        self.medium1.g0()
    }

    pub fn g2(&self) -> f64 {
        self.medium2.g0()
    }

    pub fn with_g2(&self, g2: f64) -> Self {
        let m = self.medium2;
        DualMediumParams { medium2: MediumParams::with_gain(m.n, m.mu, m.gamma, g2), ..*self }
    }

    pub fn saturated_gain(&self, e2: f64, detuning: f64) -> f64 {
        self.medium1.saturated_gain(e2, detuning) - self.dip(|m| m.saturated_gain(e2, detuning))
    }

    pub fn saturated_dn(&self, e2: f64, detuning: f64) -> f64 {
        self.medium1.saturated_dn(e2, detuning) - self.dip(|m| m.saturated_dn(e2, detuning))
    }

    fn dip(&self, f: impl Fn(&MediumParams) -> f64) -> f64 {
        if self.medium2.is_absent() {
            0.0
        } else {
            f(&self.medium2)
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.medium1.validate()?;
        self.medium2.validate()?;
        if !(self.medium2.gamma < self.medium1.gamma) {
            return Err(DlsError::Domain("depletion linewidth must be narrower than the gain linewidth".into()));
        }
        Ok(())
    }
}

pub fn unsaturated_super(d: &DualMediumParams, omega1_rabi: f64, omega2_rabi: f64, detuning: f64) -> GainIndexPoint {
    let a = unsaturated_sub(&d.medium1, omega1_rabi, detuning);
    if d.medium2.is_absent() {
        return a;
    }
    let b = unsaturated_sub(&d.medium2, omega2_rabi, detuning);
    GainIndexPoint { gain: a.gain - b.gain, index: a.index - b.index }
}

/// Positive root E² of the two-isotope clamp condition.
pub fn saturated_field_super(d: &DualMediumParams, c: &CavityParams, detuning: f64) -> Result<f64> {
    if d.medium2.is_absent() {
        return saturated_field_sub(&d.medium1, c, detuning);
    }
    let q = c.q;
    let (z1, z2) = (d.medium1.zeta(), d.medium2.zeta());
    let (e1, e2) = (d.medium1.eta(detuning), d.medium2.eta(detuning));
    // E⁴ + bE² + c = 0
    let b = e1 + e2 - 2.0 * q * (z1 - z2);
    let cc = e1 * e2 - 2.0 * q * (z1 * e2 - z2 * e1);
    let mut disc = b * b - 4.0 * cc;
    if disc < 0.0 {
        if disc.abs() < 1e-12 * b * b {
            disc = 0.0;
            log::debug!("grazing threshold: discriminant clamped at detuning {detuning}");
        } else {
            return Err(DlsError::BelowThreshold { margin: disc });
        }
    }
    let s = disc.sqrt();
    let root = if b <= 0.0 { 0.5 * (s - b) } else { -2.0 * cc / (b + s) };
    if root > 0.0 && root.is_finite() {
        Ok(root)
    } else {
        Err(DlsError::BelowThreshold { margin: root })
    }
}

pub fn saturated_index_super(d: &DualMediumParams, c: &CavityParams, detuning: f64) -> Result<f64> {
    let e2 = saturated_field_super(d, c, detuning)?;
    Ok(d.saturated_dn(e2, detuning))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedSuper {
    pub alpha_prime: f64,
    pub beta_prime: f64,
    /// ᾱ = α′ − β′.
    pub alpha_tilde: f64,
    pub e2_center: f64,
}

impl LinearizedSuper {
    pub fn group_index(&self, omega_l0: f64) -> f64 {
        1.0 + self.alpha_tilde * omega_l0
    }
}

pub fn linearized_index_super(d: &DualMediumParams, c: &CavityParams) -> Result<LinearizedSuper> {
    let e2 = saturated_field_super(d, c, 0.0)?;
    let (m1, m2) = (&d.medium1, &d.medium2);
    let alpha_prime = (2.0 * m1.zeta() / m1.gamma) / (e2 + 2.0 * m1.zeta() / m1.g0());
    let beta_prime = if m2.is_absent() {
        0.0
    } else {
        (2.0 * m2.zeta() / m2.gamma) / (e2 + 2.0 * m2.zeta() / m2.g0())
    };
    Ok(LinearizedSuper { alpha_prime, beta_prime, alpha_tilde: alpha_prime - beta_prime, e2_center: e2 })
}

/// Half-width of the above-threshold window around zero detuning, found by
/// doubling then bisection on the sign of E².
pub fn lasing_half_width<F>(e2: F, scale: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let alive = |x: f64| matches!(e2(x), Ok(v) if v > 0.0);
    if !alive(0.0) {
        return Err(DlsError::BelowThreshold { margin: e2(0.0).unwrap_or(0.0) });
    }
    let mut lo = 0.0;
    let mut hi = scale.abs().max(f64::MIN_POSITIVE);
    let mut n = 0;
    while alive(hi) {
        lo = hi;
        hi *= 2.0;
        n += 1;
        if n > 200 {
            return Err(DlsError::NonFinite("lasing window"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if alive(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

pub fn lasing_half_width_sub(m: &MediumParams, c: &CavityParams) -> Result<f64> {
    lasing_half_width(|x| saturated_field_sub(m, c, x), m.gamma)
}

pub fn lasing_half_width_super(d: &DualMediumParams, c: &CavityParams) -> Result<f64> {
    lasing_half_width(|x| saturated_field_super(d, c, x), d.medium2.gamma)
}
