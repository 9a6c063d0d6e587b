use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("q1 = {q1} lies outside the tabulated domain [{min}, {max}]")]
    OutOfDomain { q1: f64, min: f64, max: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("non-realizable curvature: {0}")]
    NonRealizable(String),

    #[error("ground state must be positive on the interior (found {value} at index {index})")]
    NodalGroundState { index: usize, value: f64 },

    #[error("potential tails are not flat: outer variation {variation:e} exceeds {tolerance:e}")]
    NonFlatTails { variation: f64, tolerance: f64 },

    #[error("energy {energy} lies below the channel threshold {threshold}")]
    BelowThreshold { energy: f64, threshold: f64 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("time step budget violated: {0}")]
    BudgetViolation(String),

    #[error("non-finite wave function at step {step}")]
    NumericalBlowup { step: usize },

    #[error("no convergence after {steps} steps (last change {last_change:e})")]
    NotConverged { steps: usize, last_change: f64 },

    #[error("internal numerical error: {0}")]
    Internal(String),

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidParameter { .. } => 2,
            Error::Io { .. } => 4,
            _ => 3,
        }
    }

    /// Stable machine-readable identifier of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::OutOfDomain { .. } => "out_of_domain",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::InsufficientSamples { .. } => "insufficient_samples",
            Error::NonRealizable(_) => "non_realizable",
            Error::NodalGroundState { .. } => "nodal_ground_state",
            Error::NonFlatTails { .. } => "non_flat_tails",
            Error::BelowThreshold { .. } => "below_threshold",
            Error::GridTooCoarse(_) => "grid_too_coarse",
            Error::BudgetViolation(_) => "budget_violation",
            Error::NumericalBlowup { .. } => "numerical_blowup",
            Error::NotConverged { .. } => "not_converged",
            Error::Internal(_) => "internal",
            Error::Config { .. } => "config",
            Error::Io { .. } => "io",
        }
    }
}
