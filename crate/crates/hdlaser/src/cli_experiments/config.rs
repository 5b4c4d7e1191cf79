//! Strict TOML experiment configuration. Frequencies and rates are in Hz in
//! the file and become rad/s through [`Hz::rad`] when used.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constants::{Hz, MU_RB, OMEGA_RB_D2, TWO_PI};
use crate::error::{DlsError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Fig4Sub,
    Fig4Super,
    #[default]
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Appendix,
    CustomSweep,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Fig4Sub => "fig4_sub",
            Experiment::Fig4Super => "fig4_super",
            Experiment::Fig5 => "fig5",
            Experiment::Fig6 => "fig6",
            Experiment::Fig7 => "fig7",
            Experiment::Fig8 => "fig8",
            Experiment::Appendix => "appendix",
            Experiment::CustomSweep => "custom_sweep",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        toml::Value::String(s.to_string())
            .try_into()
            .map_err(|_| DlsError::Config(format!("unknown experiment '{s}'")))
    }
}

/// Single-isotope Lorentzian medium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SubConfig {
    pub n: f64,
    pub mu: f64,
    pub g0: f64,
    /// Only used when the sweep does not calibrate Γ.
    pub gamma_hz: Hz,
}

impl Default for SubConfig {
    fn default() -> Self {
        SubConfig { n: 1e16, mu: MU_RB, g0: 2e-6, gamma_hz: Hz(1e6 / TWO_PI) }
    }
}

/// Gain plus depletion Lorentzian medium. Defaults match the `fig5` sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DualConfig {
    pub g1: f64,
    pub g2: f64,
    pub gamma1_hz: Hz,
    pub gamma2_hz: Hz,
    pub n1: f64,
    pub n2: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl Default for DualConfig {
    fn default() -> Self {
        DualConfig {
            g1: 1.2e5,
            g2: 0.0,
            gamma1_hz: Hz(30e6),
            gamma2_hz: Hz(10e6),
            n1: 9e6,
            n2: 1e11,
            mu1: MU_RB,
            mu2: MU_RB,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CavityConfig {
    /// Used when `r` is absent.
    pub q: f64,
    pub l0: f64,
    pub lambda0: f64,
    /// Output-coupler reflectivity; when set, Q = 2π(L/λ)/(1 − R).
    pub r: Option<f64>,
    pub nu_l0_hz: Hz,
}

impl Default for CavityConfig {
    fn default() -> Self {
        CavityConfig { q: 1e6, l0: 0.1, lambda0: 780e-9, r: None, nu_l0_hz: Hz::from_rad(OMEGA_RB_D2) }
    }
}

/// Λ-system used by the ρ₃₁ scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LambdaConfig {
    pub omega_l_hz: Hz,
    pub omega_p_hz: Hz,
    pub delta_p_hz: Hz,
    pub gamma_eff_hz: Hz,
    pub gamma3_hz: Hz,
}

impl Default for LambdaConfig {
    fn default() -> Self {
        LambdaConfig {
            omega_l_hz: Hz(10e6),
            omega_p_hz: Hz(100e6),
            delta_p_hz: Hz(3e9),
            gamma_eff_hz: Hz(5e6),
            gamma3_hz: Hz(6.0666e6),
        }
    }
}

/// Physical dual-isotope set for the density-matrix oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    pub theta1: f64,
    pub theta2: f64,
    pub delta_p_hz: Hz,
    pub gamma1_hz: Hz,
    pub gamma2_hz: Hz,
    pub gamma3_hz: Hz,
    /// Peak gain of isotope 1; fixes N₁.
    pub g1: f64,
    pub mu: f64,
    pub q: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            theta1: 0.02,
            theta2: 0.005,
            delta_p_hz: Hz(500e9),
            gamma1_hz: Hz(30e6),
            gamma2_hz: Hz(10e6),
            gamma3_hz: Hz(6.0666e6),
            g1: 1e-5,
            mu: MU_RB,
            q: 1e6,
        }
    }
}

/// Three-level saturated-index check (`fig8`) and the Ω_L bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AppendixConfig {
    pub mu: f64,
    pub n: f64,
    /// Γ_eff in Hz (10⁶ rad/s by default).
    pub gamma_eff_hz: Hz,
    pub gamma3_hz: Hz,
    pub delta_p_hz: Hz,
    pub l: f64,
    pub lambda: f64,
    pub r: f64,
    /// G₀ in units of 1/Q.
    pub g0_times_q: f64,
    pub reference_value: f64,
}

impl Default for AppendixConfig {
    fn default() -> Self {
        AppendixConfig {
            mu: MU_RB,
            n: 1e16,
            gamma_eff_hz: Hz(1e6 / TWO_PI),
            gamma3_hz: Hz(6.0666e6),
            delta_p_hz: Hz(300e9),
            l: 0.1,
            lambda: 780e-9,
            r: 0.95,
            g0_times_q: 2.0,
            reference_value: 7.65e7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicsConfig {
    pub sub: SubConfig,
    pub dual: DualConfig,
    pub cavity: CavityConfig,
    pub lambda: LambdaConfig,
    pub oracle: OracleConfig,
    pub appendix: AppendixConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SweepModel {
    Linear,
    Sub,
    #[default]
    Super,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Explicit targets; when empty a log grid over [inv_ng_min, inv_ng_max] is used.
    pub ng_targets: Vec<f64>,
    pub inv_ng_min: f64,
    pub inv_ng_max: f64,
    pub points: usize,
    pub delta_p_hz: Vec<Hz>,
    /// Oracle grid (1/n_g).
    pub oracle_inv_ng_min: f64,
    pub oracle_inv_ng_max: f64,
    pub oracle_points: usize,
    /// Detuning samples for spectrum scans.
    pub detuning_points: usize,
    pub model: SweepModel,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            ng_targets: Vec::new(),
            inv_ng_min: 1.0,
            inv_ng_max: 1e4,
            points: 40,
            delta_p_hz: vec![Hz(1.0), Hz(1e3), Hz(1e5), Hz(1e6)],
            oracle_inv_ng_min: 2.0,
            oracle_inv_ng_max: 300.0,
            oracle_points: 12,
            detuning_points: 201,
            model: SweepModel::Super,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// Accepted |ω n − ω_L0|, rad/s.
    pub tol: f64,
    pub calib_rtol: f64,
    pub tol_freq: f64,
    pub tol_field: f64,
    pub max_iter: usize,
    pub relaxation: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tol: TWO_PI * 1e-4, calib_rtol: 1e-8, tol_freq: 1e-2, tol_field: 1e-9, max_iter: 60, relaxation: 0.7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub precision: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("out"), precision: 12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub physics: PhysicsConfig,
    pub sweep: SweepConfig,
    pub solver: SolverConfig,
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| DlsError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| DlsError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.physics;
        let positive: [(&str, f64); 22] = [
            ("physics.sub.n", p.sub.n),
            ("physics.sub.mu", p.sub.mu),
            ("physics.sub.g0", p.sub.g0),
            ("physics.sub.gamma_hz", p.sub.gamma_hz.0),
            ("physics.dual.g1", p.dual.g1),
            ("physics.dual.gamma1_hz", p.dual.gamma1_hz.0),
            ("physics.dual.gamma2_hz", p.dual.gamma2_hz.0),
            ("physics.dual.n1", p.dual.n1),
            ("physics.dual.n2", p.dual.n2),
            ("physics.dual.mu1", p.dual.mu1),
            ("physics.dual.mu2", p.dual.mu2),
            ("physics.cavity.q", p.cavity.q),
            ("physics.cavity.l0", p.cavity.l0),
            ("physics.cavity.lambda0", p.cavity.lambda0),
            ("physics.cavity.nu_l0_hz", p.cavity.nu_l0_hz.0),
            ("physics.lambda.gamma_eff_hz", p.lambda.gamma_eff_hz.0),
            ("physics.lambda.gamma3_hz", p.lambda.gamma3_hz.0),
            ("physics.oracle.q", p.oracle.q),
            ("physics.oracle.g1", p.oracle.g1),
            ("physics.appendix.n", p.appendix.n),
            ("solver.tol", self.solver.tol),
            ("solver.relaxation", self.solver.relaxation),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DlsError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(p.dual.g2 >= 0.0) {
            return Err(DlsError::Config(format!("physics.dual.g2 must be non-negative, got {}", p.dual.g2)));
        }
        if !(p.dual.gamma2_hz.0 < p.dual.gamma1_hz.0) {
            return Err(DlsError::Config("physics.dual.gamma2_hz must be below gamma1_hz".into()));
        }
        if let Some(r) = p.cavity.r {
            if !(r > 0.0 && r < 1.0) {
                return Err(DlsError::Config(format!("physics.cavity.r must lie in (0, 1), got {r}")));
            }
        }
        if !(p.appendix.r > 0.0 && p.appendix.r < 1.0) {
            return Err(DlsError::Config("physics.appendix.r must lie in (0, 1)".into()));
        }
        if self.solver.relaxation > 1.0 {
            return Err(DlsError::Config("solver.relaxation must be in (0, 1]".into()));
        }
        let s = &self.sweep;
        if s.points == 0 || s.oracle_points == 0 || s.detuning_points < 2 {
            return Err(DlsError::Config("sweep point counts must be positive".into()));
        }
        if !(s.inv_ng_min > 0.0 && s.inv_ng_max >= s.inv_ng_min) {
            return Err(DlsError::Config("sweep.inv_ng_min/max must be positive and ordered".into()));
        }
        if s.ng_targets.iter().any(|v| !(*v > 0.0)) {
            return Err(DlsError::Config("sweep.ng_targets must be positive".into()));
        }
        if s.delta_p_hz.is_empty() || s.delta_p_hz.iter().any(|v| v.0 == 0.0 || !v.0.is_finite()) {
            return Err(DlsError::Config("sweep.delta_p_hz must be a non-empty list of non-zero shifts".into()));
        }
        if !(1..=17).contains(&self.output.precision) {
            return Err(DlsError::Config("output.precision must be 1..=17".into()));
        }
        Ok(())
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| DlsError::Config(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_toml(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_fig5_defaults() {
        let c = ExperimentConfig::from_toml("").unwrap();
        assert_eq!(c.experiment, Experiment::Fig5);
        assert_eq!(c.physics.dual.g1, 1.2e5);
        assert_eq!(c.physics.dual.gamma1_hz.rad(), TWO_PI * 30e6);
        assert_eq!(c.physics.dual.n1, 9e6);
        assert_eq!(c.physics.dual.n2, 1e11);
        assert_eq!(c.physics.cavity.q, 1e6);
    }

    #[test]
    fn negative_q_rejected() {
        let e = ExperimentConfig::from_toml("[physics.cavity]\nq = -5.0\n").unwrap_err();
        assert!(matches!(e, DlsError::Config(m) if m.contains("physics.cavity.q")));
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let e = ExperimentConfig::from_toml("experiment = \"fig5\"\n\n[solver]\nbogus = 1\n").unwrap_err();
        let DlsError::Config(m) = e else { panic!() };
        assert!(m.contains("bogus") && m.contains("line 4"), "{m}");
    }

    #[test]
    fn round_trip_bit_identical() {
        let mut c = ExperimentConfig::default();
        c.physics.dual.gamma2_hz = Hz(9.876_543_210_123e6);
        c.sweep.delta_p_hz = vec![Hz(0.1), Hz(std::f64::consts::PI)];
        let back = ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.physics.dual.gamma2_hz.rad().to_bits(), c.physics.dual.gamma2_hz.rad().to_bits());
    }

    #[test]
    fn experiment_names() {
        for e in [Experiment::Fig4Sub, Experiment::Fig6, Experiment::CustomSweep] {
            assert_eq!(Experiment::parse(e.name()).unwrap(), e);
        }
        assert!(Experiment::parse("fig9").is_err());
    }
}
