//! Special functions of imaginary order on the positive real axis.
//!
//! * [`log_gamma_complex`] : Lanczos approximation with reflection.
//! * [`bessel_j_imag`], [`bessel_j_imag_deriv`] : `J_{iν}(z)` and `dJ_{iν}/dz`.
//! * [`hankel1_imag`] : `H¹_{iν}(z)`, continuous through ν → 0.
//! * [`macdonald_k_imag`] : the real function `K_{iν}(x)`.
//!
//! Small arguments use the defining power series, large arguments the Hankel
//! asymptotic expansion; the switch point and tolerance live in [`Precision`].
//! Every evaluator returns an error estimate and refuses (with
//! [`Error::Precision`](crate::Error::Precision)) to hand back a value whose
//! estimate exceeds the requested tolerance.
//!
//! `J_{-iν}(z)` is not exposed separately: for real `z` and `ν` it is the
//! complex conjugate of `J_{iν}(z)`.

mod bessel;
mod gamma;
mod macdonald;

pub use bessel::{
    bessel_j_imag, bessel_j_imag_deriv, bessel_j_imag_pair, bessel_y0_pair, hankel1_imag,
    hankel1_imag_deriv, hankel1_imag_pair, Backend, BesselPair,
};
pub use gamma::{gamma_complex, log_gamma_complex};
pub use macdonald::{macdonald_k_imag, macdonald_k_imag_with, MacdonaldValue};

use serde::{Deserialize, Serialize};

/// Accuracy controls shared by the special-function evaluators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    /// Largest acceptable estimated relative error.
    pub rel_tol: f64,
    /// Arguments above this use the asymptotic backend.
    pub z_switch: f64,
    /// Multiplies the internal work (series terms, quadrature refinements)
    /// beyond what the convergence test asks for.
    pub work_scale: u32,
    /// Orders below this use the ν → 0 limiting branch of `H¹_{iν}`.
    pub nu_limit: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            z_switch: 12.0,
            work_scale: 1,
            nu_limit: 1e-6,
        }
    }
}

impl Precision {
    pub fn with_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_work_scale(self, work_scale: u32) -> Self {
        Self {
            work_scale: work_scale.max(1),
            ..self
        }
    }
}

pub(crate) fn check_order_arg(function: &'static str, nu: f64, z: f64) -> crate::Result<()> {
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(crate::Error::InvalidParameter(format!(
            "{function}: order must be finite and non-negative, got {nu}"
        )));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(crate::Error::InvalidParameter(format!(
            "{function}: argument must be finite and positive, got {z}"
        )));
    }
    Ok(())
}
