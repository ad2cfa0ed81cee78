use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Variants carry enough context to be logged into a run manifest as a
/// per-point failure without further decoration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma function at {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("{function}: estimated relative error {estimate:.3e} exceeds tolerance {tolerance:.3e} (nu = {nu}, z = {z})")]
    Precision {
        function: &'static str,
        nu: f64,
        z: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error("{function}: argument {arg:e} overflows the exponential range")]
    Overflow { function: &'static str, arg: f64 },

    #[error("point (t = {t}, x = {x}) has t - x >= 0 and lies outside region I")]
    Region { t: f64, x: f64 },

    #[error("integration window too small: boundary magnitude {boundary:.3e} exceeds {limit:.3e} of the peak")]
    Window { boundary: f64, limit: f64 },

    #[error("order nu = {nu:e} is below the small-order threshold {limit:e}")]
    SmallNu { nu: f64, limit: f64 },

    #[error("Fock truncation at n_max = {n_max} leaves tail weight {tail:.3e} above tolerance {tolerance:.3e}")]
    Truncation {
        n_max: usize,
        tail: f64,
        tolerance: f64,
    },

    #[error("symmetric eigensolver did not converge after {iterations} iterations")]
    EigenConvergence { iterations: usize },

    #[error("eigenvalue {value:e} is below the admissible floor {floor:e}")]
    NegativeEigenvalue { value: f64, floor: f64 },

    #[error("{0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error("{failed} of {total} sweep points failed (more than 10%)")]
    TooManyFailures { failed: usize, total: usize },

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}
