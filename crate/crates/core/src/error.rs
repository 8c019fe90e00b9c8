use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scattering configuration: {0}")]
    InvalidConfig(String),

    #[error("{what} index {index} out of range")]
    IndexOutOfRange { what: &'static str, index: usize },

    #[error("four-momentum is off shell: p.p = {mass_shell} (expected 1)")]
    OffShell { mass_shell: f64 },

    #[error("invalid polarization: {0}")]
    InvalidPolarization(String),

    #[error("degenerate contrast denominator |M psi_B|^2 = {0:e}")]
    DegenerateDenominator(f64),

    #[error("spin-propagation matrix is zero")]
    ZeroMatrix,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("q3 = {q3} outside fit domain [{lo}, {hi}]")]
    OutOfDomain { q3: f64, lo: f64, hi: f64 },

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("fit did not converge after {iterations} iterations (residual norm {residual_norm:e})")]
    FitNotConverged { iterations: usize, residual_norm: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
