use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("stability violation: dt = {dt} >= 4*gamma/c0^2 = {limit}")]
    StabilityViolation { dt: f64, limit: f64 },

    #[error("linear solve did not converge{}: {iterations} iterations, relative residual {residual:e}",
        step.map(|k| format!(" at step {k}")).unwrap_or_default())]
    NonConvergence {
        step: Option<usize>,
        iterations: usize,
        residual: f64,
    },

    #[error("explicit integration blew up (dt = {dt}); reduce the step below the explicit stability limit")]
    Blowup { dt: f64 },

    #[error("resolution too low: {0}")]
    ResolutionTooLow(String),

    #[error("degenerate convergence data: {0}")]
    DegenerateFit(String),

    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::Blowup { .. } | Error::NonFinite(_)
        )
    }
}
