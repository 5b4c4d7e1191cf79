//! Highly dispersive Raman laser simulator.
//!
//! The crate goes from Λ-system density matrices ([`atomic_core`]) to
//! Lorentzian gain media ([`gain_medium`]), the self-consistent lasing
//! frequency ([`lasing_solver`]), a brute-force dual-isotope check
//! ([`dual_isotope_oracle`]) and the config/CSV harness ([`cli_experiments`]).

pub mod atomic_core;
pub mod cli_experiments;
pub mod constants;
pub mod dual_isotope_oracle;
pub mod error;
pub mod gain_medium;
pub mod lasing_solver;
pub mod numerics;

pub use error::{DlsError, Result};
