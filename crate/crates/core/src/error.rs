use thiserror::Error;

/// Errors produced anywhere in the integral, CI and reference pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{what} did not converge: {detail}")]
    Convergence { what: &'static str, detail: String },

    #[error("result not representable: {0}")]
    Overflow(String),

    #[error("quartet ({a},{b},{c},{d}): {source}")]
    Quartet {
        a: usize,
        b: usize,
        c: usize,
        d: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{count} quartet evaluations failed, first: {first}")]
    TensorBuild { count: usize, first: Box<Error> },

    #[error("no integral stored for quartet {0:?}")]
    MissingIntegral([usize; 4]),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("overlap matrix is indefinite: eigenvalue {eigenvalue:e} below -{threshold:e}")]
    IndefiniteOverlap { eigenvalue: f64, threshold: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("state {index} out of range, {available} states kept")]
    StateOutOfRange { index: usize, available: usize },

    #[error("integral cache: {0}")]
    Cache(String),

    #[error("scattering: {0}")]
    Scattering(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}
