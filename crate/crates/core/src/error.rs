use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// Validation failures carry enough context to report which input was bad;
/// numerical failures (degenerate hull, non-converged quadrature) are kept
/// separate so callers can distinguish "bad input" from "bad luck".
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension must be 2 or 3, got {0}")]
    BadDimension(usize),

    #[error("measure atom {index}: {reason}")]
    BadAtom { index: usize, reason: String },

    #[error("measure needs at least {needed} atom pairs after merging, got {got}")]
    TooFewAtoms { needed: usize, got: usize },

    #[error("atom directions do not span the ambient space (rank {rank} < {dim})")]
    NotSpanning { rank: usize, dim: usize },

    #[error("radial config length {got} does not match atom count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("radial config entry {index} must be positive and finite, got {value}")]
    BadRadius { index: usize, value: f64 },

    #[error("exponent p must satisfy -1 < p < 0, got {0}")]
    POutOfRange(f64),

    #[error("exponent p must be nonzero")]
    PZero,

    #[error("convex hull is degenerate: {0}")]
    DegenerateHull(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),

    #[error("solver failed: {0}")]
    SolveFailed(String),

    #[error("scenario is invalid: {0}")]
    BadScenario(String),

    #[error("t = {t} is outside the admissible range (0, {t_max})")]
    InadmissibleT { t: f64, t_max: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
