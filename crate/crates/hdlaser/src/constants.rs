//! Physical constants (CODATA) and a few reference values.

use std::f64::consts::PI;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Speed of light, m/s.
pub const C0: f64 = 299_792_458.0;

pub const TWO_PI: f64 = 2.0 * PI;

/// Rb D2 line, rad/s.
pub const OMEGA_RB_D2: f64 = TWO_PI * 384.230e12;

/// Rb D2 transition dipole moment used throughout, C·m.
pub const MU_RB: f64 = 2.53e-29;

/// Hz to rad/s. The only place 2π is applied at the user boundary.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Hz(pub f64);

impl Hz {
    pub fn rad(self) -> f64 {
        TWO_PI * self.0
    }

    pub fn from_rad(w: f64) -> Self {
        Hz(w / TWO_PI)
    }
}
