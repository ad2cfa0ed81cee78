//! Time-dependent entanglement between an inertial observer and a
//! non-uniformly accelerated one, from imaginary-order Bessel modes through
//! the squeezing parameter to negativity and mutual information curves.

pub mod bogoliubov;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod ode;
pub mod output;
pub mod plot;
pub mod scalar;
pub mod spacetime;
pub mod specfun;
pub mod sum;
pub mod sweep;

pub use error::{Error, Result};

pub use num_complex::Complex64;

/// Density matrix in double precision.
pub type DensityMatrix = entanglement::TruncatedDensityMatrix<f64>;
