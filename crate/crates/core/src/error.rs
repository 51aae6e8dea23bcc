use thiserror::Error;

/// Failures reported by the numerical kernels.
///
/// Variants map one-to-one onto CLI exit codes and FFI status codes, so new
/// variants must be added to both tables.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument {x} outside the supported range of {function}")]
    OverflowGuard { function: &'static str, x: f64 },

    #[error("K0({x}) underflows to zero")]
    UnderflowToZero { x: f64 },

    #[error("degenerate wavenumbers k = l = {k}: only the delta channel survives")]
    DegenerateWavenumbers { k: f64 },

    #[error("convergence failure in {stage}: spread {spread:e} exceeds tolerance {tolerance:e}")]
    ConvergenceFailure {
        stage: &'static str,
        spread: f64,
        tolerance: f64,
    },

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("samples do not belong to one coupling family: {0}")]
    InconsistentFamily(String),

    #[error("zero phase sample at k = {k}: free family, coupling at its limit point")]
    ZeroPhase { k: f64 },

    #[error("root-finding cross-check failed: bracketed {bracketed}, closed form {closed_form}")]
    CrossCheck { bracketed: f64, closed_form: f64 },

    #[error("matching condition is singular at k = {k}; step k slightly")]
    ResonancePole { k: f64 },

    #[error("no root in the first-branch bracket: {0}")]
    NoSolutionInBracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn require_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive and finite, got {v}")))
    }
}

pub(crate) fn require_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite, got {v}")))
    }
}
