use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The operation is defined only on part of the parameter space
    /// (e.g. the potential operator in the recurrent case).
    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("quadrature missed tolerance {requested:.3e}: estimate {estimate:.6e} ± {error:.3e}")]
    Quadrature {
        estimate: f64,
        error: f64,
        requested: f64,
    },

    #[error("intensity has infinite mass within radius {radius}")]
    InfiniteMass { radius: f64 },

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("regime {0} has no norming")]
    NoNorming(&'static str),

    #[error("covariance is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e}, trace {trace:.3e})")]
    NotPsd { min_eigenvalue: f64, trace: f64 },

    #[error("constant extraction disagrees across test functions: {first} vs {second}")]
    ExtractionMismatch { first: f64, second: f64 },

    #[error("truncation budget {budget:.3e} unreachable; tail bound {bound:.3e} at radius {radius:.3e}")]
    TruncationUnreachable { budget: f64, bound: f64, radius: f64 },

    #[error("misaligned inputs: {0}")]
    Misaligned(String),

    #[error("centering cache missing for grid time {0}")]
    MissingCentering(f64),

    #[error("configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}
