//! Instantaneous positive-frequency matching on `T = T₀`, Bogoliubov
//! coefficients against Minkowski plane waves, and the squeezing parameter.
//!
//! On the slice `T = T₀` the combination
//! `F(T) = c₊ J_{iν}(T̃) + c₋ J_{-iν}(T̃)` is required to satisfy
//! `Ḟ(T₀) = -i W(T₀) F(T₀)`; the squeezing parameter `q` follows from
//! `(c₊, c₋)` alone. Different `ν` never mix, so everything here works one
//! mode at a time.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ode::{self, Tolerances};
use crate::spacetime::ModeSpec;
use crate::specfun::{bessel_j_imag_pair, gamma_complex, log_gamma_complex, Precision};
use crate::{Error, Result};

/// Below this order `sinh(πν)` makes the matching coefficients meaningless.
pub const SMALL_NU: f64 = 1e-6;

/// `(c₊, c₋)` at `T₀`, with the instantaneous frequency `W(T₀)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyMatchCoeffs {
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    pub frequency: f64,
    pub t0: f64,
}

/// Bogoliubov coefficients of one `(ν, k)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovPair {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub k: f64,
}

impl BogoliubovPair {
    /// `-β*/α`, the squeezing parameter implied by `V = β* α⁻¹ = -q`.
    pub fn squeezing(&self) -> Complex64 {
        -self.beta.conj() / self.alpha
    }
}

/// Squeezing parameter at `T₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezingParam {
    pub q: Complex64,
    pub t0: f64,
    pub nu: f64,
}

impl SqueezingParam {
    pub fn abs(&self) -> f64 {
        self.q.norm()
    }
}

/// Sign pattern of the `c₋` terms in `q` and `β`.
///
/// `Uncorrected` keeps `q = (e^{-πν} c₊* - c₋*) / (c₊ + e^{-πν} c₋)` and
/// `β = C c₊ B + C c₋ A*`. With it `|q|` tends to `1/sinh(πν)` in the far
/// past, which exceeds one for small `ν`. `Corrected` flips the sign of the
/// `c₋*` term in `q` (and of the `c₊ B` term in `β`), which gives `q → 0` in
/// the far past, where the matched mode reduces to `H¹_{iν}`, and keeps
/// `V = β* α⁻¹ = -q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum QFormula {
    Uncorrected,
    #[default]
    Corrected,
}

/// Phase convention for `A_{ν,k}` in the `α, β` cross-check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseConvention {
    /// `A_{ν,k}` with its full phase, `Γ(1+iν)⁻¹ ((ε-k)/2w)^{iν}`.
    Verbatim,
    /// `A_{ν,k}` replaced by `|A_{ν,k}|`, with `B = -A e^{-πν}` kept.
    #[default]
    Aligned,
}

fn check_nu(nu: f64) -> Result<()> {
    if nu < SMALL_NU {
        return Err(Error::SmallNu {
            nu,
            limit: SMALL_NU,
        });
    }
    Ok(())
}

/// `J_{iν}(T̃)` and its `T` derivative at `T`, from the special functions.
pub fn bessel_basis(spec: &ModeSpec, t: f64, prec: &Precision) -> Result<(Complex64, Complex64)> {
    let z = spec.t_tilde(t);
    if !z.is_finite() {
        return Err(Error::Overflow {
            function: "bessel_basis",
            arg: -spec.w * t,
        });
    }
    let j = bessel_j_imag_pair(spec.nu(), z, prec)?;
    Ok((j.value, -spec.w * z * j.deriv))
}

/// Matching coefficients at `T₀` computed from the special functions.
pub fn frequency_match(spec: &ModeSpec, t0: f64, prec: &Precision) -> Result<FrequencyMatchCoeffs> {
    check_nu(spec.nu())?;
    let (j, j_dot) = bessel_basis(spec, t0, prec)?;
    frequency_match_from_basis(spec, t0, j, j_dot)
}

/// Matching coefficients from given `J_{iν}(T̃₀)` and `d/dT J_{iν}(T̃₀)`;
/// the `-iν` branch is their complex conjugate.
pub fn frequency_match_from_basis(
    spec: &ModeSpec,
    t0: f64,
    j: Complex64,
    j_dot: Complex64,
) -> Result<FrequencyMatchCoeffs> {
    let nu = spec.nu();
    check_nu(nu)?;
    let w_inst = spec.frequency(t0);
    let i = Complex64::i();
    // νπ W^{1/2} / (2K sinh πν), with ν/K = 1/w
    let pre = PI * w_inst.sqrt() / (2.0 * spec.w * (PI * nu).sinh());
    let c_plus = -i * pre * (j_dot.conj() / w_inst + i * j.conj());
    let c_minus = i * pre * (j_dot / w_inst + i * j);
    if !(c_plus.norm().is_finite() && c_minus.norm().is_finite()) {
        return Err(Error::Overflow {
            function: "frequency_match",
            arg: t0,
        });
    }
    Ok(FrequencyMatchCoeffs {
        c_plus,
        c_minus,
        frequency: w_inst,
        t0,
    })
}

/// `F(T)` and `Ḟ(T)` of the matched solution.
pub fn reconstruct(
    spec: &ModeSpec,
    coeffs: &FrequencyMatchCoeffs,
    t: f64,
    prec: &Precision,
) -> Result<(Complex64, Complex64)> {
    let (j, j_dot) = bessel_basis(spec, t, prec)?;
    Ok((
        coeffs.c_plus * j + coeffs.c_minus * j.conj(),
        coeffs.c_plus * j_dot + coeffs.c_minus * j_dot.conj(),
    ))
}

/// `q` from matching coefficients.
pub fn q_from_coeffs(coeffs: &FrequencyMatchCoeffs, nu: f64, formula: QFormula) -> Complex64 {
    let e = (-PI * nu).exp();
    let (cp, cm) = (coeffs.c_plus, coeffs.c_minus);
    let numerator = match formula {
        QFormula::Uncorrected => e * cp.conj() - cm.conj(),
        QFormula::Corrected => e * cp.conj() + cm.conj(),
    };
    numerator / (cp + e * cm)
}

/// The squeezing parameter at `T₀`.
pub fn squeezing_q(spec: &ModeSpec, t0: f64, prec: &Precision) -> Result<SqueezingParam> {
    squeezing_q_with(spec, t0, prec, QFormula::Corrected)
}

pub fn squeezing_q_with(
    spec: &ModeSpec,
    t0: f64,
    prec: &Precision,
    formula: QFormula,
) -> Result<SqueezingParam> {
    let coeffs = frequency_match(spec, t0, prec)?;
    let nu = spec.nu();
    Ok(SqueezingParam {
        q: q_from_coeffs(&coeffs, nu, formula),
        t0,
        nu,
    })
}

/// `|q|` in the uniformly accelerated limit, `e^{-πν}`.
pub fn asymptotic_q_magnitude(nu: f64) -> f64 {
    (-PI * nu).exp()
}

/// `A_{ν,k} = -(ν/εw)^{1/2} e^{πν/2} / (2Γ(1+iν) sinh πν) · ((ε-k)/2w)^{iν}`.
pub fn a_coefficient(spec: &ModeSpec) -> Result<Complex64> {
    let nu = spec.nu();
    check_nu(nu)?;
    let eps = spec.epsilon();
    // ε - k without cancellation for large positive k
    let gap = if spec.k > 0.0 {
        spec.m * spec.m / (eps + spec.k)
    } else {
        eps - spec.k
    };
    let mu = Complex64::new(0.0, nu);
    let log_a = mu * (gap / (2.0 * spec.w)).ln() - log_gamma_complex(mu + 1.0)?;
    let magnitude = (nu / (eps * spec.w)).sqrt() * (0.5 * PI * nu).exp() / (2.0 * (PI * nu).sinh());
    Ok(-magnitude * log_a.exp())
}

/// `|A_{ν,k}|` through `|Γ(1+iν)|² = πν / sinh πν` instead of the gamma
/// function.
pub fn a_coefficient_modulus(spec: &ModeSpec) -> Result<f64> {
    let nu = spec.nu();
    check_nu(nu)?;
    let s = (PI * nu).sinh();
    let sq = nu / (spec.epsilon() * spec.w) * (PI * nu).exp() * s / (4.0 * PI * nu * s * s);
    Ok(sq.sqrt())
}

/// `C = sqrt(πw/ν)`.
pub fn c_constant(spec: &ModeSpec) -> f64 {
    (PI * spec.w / spec.nu()).sqrt()
}

/// `α = -C c₊ A + C c₋ B*` and `β` per [`QFormula`], with `B = -A e^{-πν}`.
pub fn alpha_beta(
    spec: &ModeSpec,
    coeffs: &FrequencyMatchCoeffs,
    phase: PhaseConvention,
    formula: QFormula,
) -> Result<BogoliubovPair> {
    let a_raw = a_coefficient(spec)?;
    let a = match phase {
        PhaseConvention::Verbatim => a_raw,
        PhaseConvention::Aligned => Complex64::new(a_raw.norm(), 0.0),
    };
    let b = -a * (-PI * spec.nu()).exp();
    let c = c_constant(spec);
    let (cp, cm) = (coeffs.c_plus, coeffs.c_minus);
    let alpha = -c * cp * a + c * cm * b.conj();
    let beta = match formula {
        QFormula::Uncorrected => c * cp * b + c * cm * a.conj(),
        QFormula::Corrected => -c * cp * b + c * cm * a.conj(),
    };
    Ok(BogoliubovPair {
        alpha,
        beta,
        k: spec.k,
    })
}

/// Argument of `T̃` at which the integration oracle starts.
const ODE_START_Z: f64 = 1e-7;

/// `J_{iν}(T̃₀)` and its `T` derivative obtained by integrating
/// `F'' + (m² e^{-2wT} + K²) F = 0` in from the far future, where the
/// two-term small-argument expansion is exact to double precision.
pub fn basis_by_integration(
    spec: &ModeSpec,
    t0: f64,
    tol: &Tolerances,
) -> Result<(Complex64, Complex64)> {
    let nu = spec.nu();
    let t_start = ((spec.m / spec.w).ln() - ODE_START_Z.ln()) / spec.w;
    let start = t_start.max(t0);
    let z = spec.t_tilde(start);
    let mu = Complex64::new(0.0, nu);
    let lead = (mu * (0.5 * z).ln()).exp() / gamma_complex(mu + 1.0)?;
    let x = 0.25 * z * z;
    let j = lead * (1.0 - x / (mu + 1.0));
    let dj_dz = lead * (mu / z - (mu + 2.0) * x / ((mu + 1.0) * z));
    let j_dot = -spec.w * z * dj_dz;
    if start == t0 {
        return Ok((j, j_dot));
    }
    let (m2, k2, w) = (spec.m * spec.m, spec.sep * spec.sep, spec.w);
    let rhs = |t: f64, y: &[f64; 4]| {
        let omega2 = m2 * (-2.0 * w * t).exp() + k2;
        [y[2], y[3], -omega2 * y[0], -omega2 * y[1]]
    };
    let y = ode::integrate(rhs, start, [j.re, j.im, j_dot.re, j_dot.im], t0, tol)?;
    Ok((Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3])))
}

/// `q(T₀)` with the Bessel evaluations replaced by [`basis_by_integration`].
pub fn squeezing_q_by_integration(
    spec: &ModeSpec,
    t0: f64,
    tol: &Tolerances,
) -> Result<SqueezingParam> {
    check_nu(spec.nu())?;
    let (j, j_dot) = basis_by_integration(spec, t0, tol)?;
    let coeffs = frequency_match_from_basis(spec, t0, j, j_dot)?;
    Ok(SqueezingParam {
        q: q_from_coeffs(&coeffs, spec.nu(), QFormula::Corrected),
        t0,
        nu: spec.nu(),
    })
}
