//! Error type shared by every module of the crate.

use crate::dynamics::Trajectory;
use crate::spectral::SpectralField;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A physical grid too coarse for the requested mode range.
    #[error("grid of {got} points cannot resolve max mode {needed} (need >= 2N+1 samples)")]
    Resolution { needed: usize, got: usize },

    /// Coefficients that should describe a real function fail the
    /// conjugate-symmetry check c(-k) = conj(c(k)).
    #[error("field violates the reality invariant (defect {defect:.3e})")]
    CorruptedField { defect: f64 },

    /// A field extends beyond the range covered by a symbol table or partner
    /// field. Evaluation beyond the precomputed range is never silent.
    #[error("mode range mismatch: need modes up to {needed}, have {have}")]
    ModeRange { needed: usize, have: usize },

    #[error("{0}")]
    Domain(String),

    /// A derived model-parameter identity fails its 1e-12 tolerance.
    #[error("constraint `{name}` violated (residual {residual:.3e})")]
    Constraint { name: &'static str, residual: f64 },

    /// Non-finite coefficients or an H¹ norm past the runaway threshold.
    /// Carries the last good state and, when available, the partial run.
    #[error("solution blew up at t = {t}")]
    BlowUp {
        t: f64,
        last_good: Box<SpectralField>,
        partial: Option<Box<Trajectory>>,
    },

    #[error("ratio denominator is zero")]
    ZeroDenominator,

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
