use std::path::PathBuf;

/// Errors raised by the laboratory.
///
/// Variants split into two families that the CLI maps to exit codes:
/// input problems (domain, parameters, configuration, parsing) and
/// resource problems (missing coverage, sieve limits, IO).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("pole of zeta at s = 1")]
    Pole,

    #[error("zeta'/zeta is singular here: |zeta(s)| = {modulus:e}")]
    Singularity { modulus: f64 },

    #[error("insufficient zero coverage: need ordinates up to height {required}, table covers [{lower}, {height}]")]
    Coverage { required: f64, lower: f64, height: f64 },

    #[error("zero count certification failed near t = {near}: {reason}")]
    Certification { near: f64, reason: String },

    #[error("zero search incomplete in Gram block [{start}, {end}]: found {found} sign changes, expected {expected}")]
    Incomplete { start: f64, end: f64, found: usize, expected: usize },

    #[error("duplicate ordinate {value} (within 2x precision of its neighbour)")]
    Duplicate { value: f64 },

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("quadrature did not reach the requested accuracy: {0}")]
    Accuracy(String),

    #[error("sieve limit {limit} is below the required {required}")]
    SieveLimit { limit: u64, required: u64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// True for errors caused by missing resources rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Coverage { .. } | Error::SieveLimit { .. } | Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
