use thiserror::Error;

/// Failure classes shared by every module of the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Shapes or grids of the operands do not fit together.
    #[error("structural error: {0}")]
    Structural(String),
    /// A parameter set violates a hypothesis of the estimate being checked.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    /// The density perturbation reached `1 + a <= 0` somewhere.
    #[error("vacuum: min(1 + a) = {min_density} at t = {time}")]
    Vacuum { min_density: f64, time: f64 },
    /// The requested time step exceeds the CFL limit.
    #[error("step size {dt} exceeds CFL limit {limit}")]
    StepSize { dt: f64, limit: f64 },
    /// A tracked norm left its admissible envelope during integration.
    #[error("divergence: norm `{name}` = {value} exceeds {limit} at t = {time}")]
    Divergence {
        name: String,
        value: f64,
        limit: f64,
        time: f64,
    },
    #[error("I/O error at {path}: {message}")]
    Io { path: String, message: String },
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
