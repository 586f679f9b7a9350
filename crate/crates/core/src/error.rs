use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid run/sweep/grid configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A scalar parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An evaluation was requested outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A pointwise evaluation produced a non-finite value.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// The time integrator produced a non-finite flux or tendency.
    #[error("integration error at cell {cell}: {message}")]
    Integration { message: String, cell: usize },

    /// Time step collapsed below the configured minimum.
    #[error("time step collapse at t = {t}: dt = {dt}")]
    TimeStepCollapse { t: f64, dt: f64 },

    /// Density dropped below the positivity floor.
    #[error("positivity loss at cell {cell}: rho = {rho}")]
    PositivityLoss { cell: usize, rho: f64 },

    /// The reference solver detected gradient blow-up (end of the smooth regime).
    #[error("smooth regime exceeded at t = {t}: max|du| * dx = {indicator}")]
    SmoothRegimeExceeded { t: f64, indicator: f64 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A report or snapshot file failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
