use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DlsError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular steady-state system (pivot ratio {pivot_ratio:.3e})")]
    Singular { pivot_ratio: f64 },

    #[error("below lasing threshold (margin {margin:.6e})")]
    BelowThreshold { margin: f64 },

    #[error("no sign change of the resonance residual within the lasing window")]
    NoLasingSolution,

    #[error("group index is zero: shift ratio unbounded")]
    Pole,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("no convergence after {iterations} iterations (freq residual {residual_freq:.3e} rad/s, field residual {residual_field:.3e})")]
    NoConvergence {
        iterations: usize,
        residual_freq: f64,
        residual_field: f64,
    },

    #[error("group index target {target} unreachable")]
    Unreachable { target: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for DlsError {
    fn from(e: std::io::Error) -> Self {
        DlsError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, DlsError>;
