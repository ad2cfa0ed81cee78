//! Coordinates of the non-uniformly accelerated (NUA) observer, mode
//! functions, and the Klein–Gordon inner product on constant-`T` slices.
//!
//! The chart `(T, X)` covers the region `t - x < 0` of Minkowski space:
//!
//! ```text
//! w(t + x) = 2 sinh(w(T + X)),    w(t - x) = -exp(-w(T - X))
//! ```
//!
//! with metric `ds² = (e^{-2wT} + e^{2wX}) (dT² - dX²)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::specfun::{bessel_j_imag_pair, hankel1_imag_pair, macdonald_k_imag_with, Precision};
use crate::{Error, Result};

/// Largest argument for which `exp` stays finite.
const EXP_LIMIT: f64 = 709.0;

/// Physical parameters of one field mode (natural units, `c = ħ = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    /// Field mass.
    pub m: f64,
    /// Acceleration scale of the chart.
    pub w: f64,
    /// Separation constant `K`.
    pub sep: f64,
    /// Minkowski wavenumber, only used for Bogoliubov coefficients.
    pub k: f64,
}

impl ModeSpec {
    /// Validates `m, w, K > 0`; the wavenumber defaults to 1.
    pub fn new(m: f64, w: f64, sep: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("w", w), ("K", sep)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(Self { m, w, sep, k: 1.0 })
    }

    pub fn with_wavenumber(self, k: f64) -> Self {
        Self { k, ..self }
    }

    /// `ν = K / w`.
    pub fn nu(&self) -> f64 {
        self.sep / self.w
    }

    /// `ε = sqrt(k² + m²)`.
    pub fn epsilon(&self) -> f64 {
        self.k.hypot(self.m)
    }

    /// `T̃ = (m/w) e^{-wT}`.
    pub fn t_tilde(&self, t: f64) -> f64 {
        ((self.m / self.w).ln() - self.w * t).exp()
    }

    /// `X̃ = (m/w) e^{wX}`.
    pub fn x_tilde(&self, x: f64) -> f64 {
        ((self.m / self.w).ln() + self.w * x).exp()
    }

    /// Instantaneous frequency `W(T) = sqrt(m² e^{-2wT} + K²)`.
    pub fn frequency(&self, t: f64) -> f64 {
        (self.m * (-self.w * t).exp()).hypot(self.sep)
    }
}

/// A point in NUA coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NuaPoint {
    pub t: f64,
    pub x: f64,
}

/// A point in inertial coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiPoint {
    pub t: f64,
    pub x: f64,
}

/// Maps `(T, X)` into region I.
pub fn nua_to_minkowski(p: NuaPoint, w: f64) -> Result<MinkowskiPoint> {
    let u = w * (p.t + p.x);
    let v = w * (p.t - p.x);
    if u.abs() > EXP_LIMIT || v.abs() > EXP_LIMIT {
        return Err(Error::Overflow {
            function: "nua_to_minkowski",
            arg: if u.abs() > EXP_LIMIT { u } else { v },
        });
    }
    let plus = 2.0 * u.sinh() / w;
    let minus = light_cone_minus(p, w);
    Ok(MinkowskiPoint {
        t: 0.5 * (plus + minus),
        x: 0.5 * (plus - minus),
    })
}

/// The light-cone coordinate `t - x = -e^{-w(T-X)}/w`, negative by
/// construction. Forming `t - x` from the returned `(t, x)` can round to zero
/// once `|t + x|` dwarfs it.
pub fn light_cone_minus(p: NuaPoint, w: f64) -> f64 {
    -(-w * (p.t - p.x)).exp() / w
}

/// Inverse of [`nua_to_minkowski`]; fails outside region I.
pub fn minkowski_to_nua(p: MinkowskiPoint, w: f64) -> Result<NuaPoint> {
    let minus = p.t - p.x;
    if minus >= 0.0 {
        return Err(Error::Region { t: p.t, x: p.x });
    }
    let u = (0.5 * w * (p.t + p.x)).asinh();
    let v = -(-w * minus).ln();
    Ok(NuaPoint {
        t: (u + v) / (2.0 * w),
        x: (u - v) / (2.0 * w),
    })
}

/// `e^{-2wT} + e^{2wX}`.
pub fn conformal_factor(p: NuaPoint, w: f64) -> Result<f64> {
    let (a, b) = (-2.0 * w * p.t, 2.0 * w * p.x);
    if a > EXP_LIMIT || b > EXP_LIMIT {
        return Err(Error::Overflow {
            function: "conformal_factor",
            arg: a.max(b),
        });
    }
    Ok(a.exp() + b.exp())
}

/// Proper acceleration of the observer at fixed `X = X0`, written as
/// `w e^{-wX0} (1 + e^{-2w(T+X0)})^{-3/2}` so neither limit overflows.
pub fn proper_acceleration(t: f64, x0: f64, w: f64) -> f64 {
    let s = (-2.0 * w * (t + x0)).exp();
    w * (-w * x0).exp() * (-1.5 * s.ln_1p()).exp()
}

/// A mode value together with its `T` derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeValue {
    pub value: Complex64,
    pub dt: Complex64,
}

fn spatial_profile(spec: &ModeSpec, x: f64, prec: &Precision) -> Result<f64> {
    Ok(macdonald_k_imag_with(spec.nu(), spec.x_tilde(x), prec)?.value)
}

/// `Φ^{R+}_ν = (ν/πw)^{1/2} J_{iν}(T̃) K_{iν}(X̃)`, the mode that behaves as
/// `e^{-iKT}` in the far future.
pub fn mode_r_plus(spec: &ModeSpec, p: NuaPoint, prec: &Precision) -> Result<ModeValue> {
    let nu = spec.nu();
    let z = spec.t_tilde(p.t);
    let j = bessel_j_imag_pair(nu, z, prec)?;
    let g = spatial_profile(spec, p.x, prec)?;
    let pref = (nu / (PI * spec.w)).sqrt() * g;
    Ok(ModeValue {
        value: pref * j.value,
        dt: pref * (-spec.w * z) * j.deriv,
    })
}

/// `Φ^{I+}_ν = ½ sqrt(1 - e^{-2πν}) (ν/πw)^{1/2} H¹_{iν}(T̃) K_{iν}(X̃)`,
/// the mode that looks inertial in the far past.
pub fn mode_i_plus(spec: &ModeSpec, p: NuaPoint, prec: &Precision) -> Result<ModeValue> {
    let nu = spec.nu();
    let z = spec.t_tilde(p.t);
    let h = hankel1_imag_pair(nu, z, prec)?;
    let g = spatial_profile(spec, p.x, prec)?;
    let pref = 0.5 * (-(-2.0 * PI * nu).exp_m1()).sqrt() * (nu / (PI * spec.w)).sqrt() * g;
    Ok(ModeValue {
        value: pref * h.value,
        dt: pref * (-spec.w * z) * h.deriv,
    })
}

/// Sign of the frequency of a Minkowski plane wave.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frequency {
    Positive,
    Negative,
}

impl Frequency {
    fn sign(self) -> f64 {
        match self {
            Frequency::Positive => 1.0,
            Frequency::Negative => -1.0,
        }
    }
}

/// `Φ^{M±}_k = ½ (πε)^{-1/2} exp(∓i(εt - kx))`.
pub fn minkowski_mode(spec: &ModeSpec, p: MinkowskiPoint, freq: Frequency) -> Complex64 {
    let eps = spec.epsilon();
    let phase = -freq.sign() * (eps * p.t - spec.k * p.x);
    0.5 / (PI * eps).sqrt() * Complex64::from_polar(1.0, phase)
}

/// `Φ^{M±}_k` evaluated at an NUA point, with its derivative along `T`.
pub fn minkowski_mode_nua(spec: &ModeSpec, p: NuaPoint, freq: Frequency) -> Result<ModeValue> {
    let q = nua_to_minkowski(p, spec.w)?;
    let value = minkowski_mode(spec, q, freq);
    let u = spec.w * (p.t + p.x);
    let e = (-spec.w * (p.t - p.x)).exp();
    let (dt_dt, dx_dt) = (u.cosh() + 0.5 * e, u.cosh() - 0.5 * e);
    let i = Complex64::i();
    let d_phase = -freq.sign() * (spec.epsilon() * dt_dt - spec.k * dx_dt);
    Ok(ModeValue {
        value,
        dt: i * d_phase * value,
    })
}

/// Field values and time derivatives on a uniform grid of one time slice.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    /// Time coordinate of the slice.
    pub time: f64,
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<Complex64>,
    pub dt: Vec<Complex64>,
}

impl SampledField {
    /// Samples `f` at `n` equally spaced points of `[x0, x1]`; `n` must be
    /// odd so that Simpson's rule applies.
    pub fn sample(
        time: f64,
        x0: f64,
        x1: f64,
        n: usize,
        f: impl Fn(f64) -> Result<ModeValue>,
    ) -> Result<Self> {
        if n < 3 || n % 2 == 0 || !(x1 > x0) {
            return Err(Error::InvalidParameter(format!(
                "need an odd number of at least 3 points on an increasing window, got {n} on [{x0}, {x1}]"
            )));
        }
        let dx = (x1 - x0) / (n - 1) as f64;
        let mut values = Vec::with_capacity(n);
        let mut dt = Vec::with_capacity(n);
        for i in 0..n {
            let v = f(x0 + i as f64 * dx)?;
            if !(v.value.re.is_finite() && v.value.im.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "non-finite field value at X = {}",
                    x0 + i as f64 * dx
                )));
            }
            values.push(v.value);
            dt.push(v.dt);
        }
        Ok(Self {
            time,
            x0,
            dx,
            values,
            dt,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    /// `self += c · other` on the same grid.
    pub fn add_scaled(&mut self, c: Complex64, other: &SampledField) -> Result<()> {
        self.check_grid(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
        for (a, b) in self.dt.iter_mut().zip(&other.dt) {
            *a += c * b;
        }
        Ok(())
    }

    /// A field of zeros on the same grid.
    pub fn zeros_like(&self) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            values: vec![zero; self.len()],
            dt: vec![zero; self.len()],
            ..self.clone()
        }
    }

    fn check_grid(&self, other: &SampledField) -> Result<()> {
        if self.len() != other.len()
            || self.time != other.time
            || self.x0 != other.x0
            || self.dx != other.dx
        {
            return Err(Error::InvalidParameter(
                "fields are sampled on different grids".into(),
            ));
        }
        Ok(())
    }

    /// Largest of the two endpoint magnitudes relative to the peak.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let ends = self.values[0]
            .norm()
            .max(self.values[self.len() - 1].norm());
        ends / peak
    }
}

/// `⟨A, B⟩ = -i ∫ dX (A ∂_T B* - B* ∂_T A)` on the common slice, by composite
/// Simpson. Both fields must have decayed to `boundary_tol` of their peak at
/// the window edges.
pub fn kg_inner_product(
    a: &SampledField,
    b: &SampledField,
    boundary_tol: f64,
) -> Result<Complex64> {
    a.check_grid(b)?;
    for f in [a, b] {
        let ratio = f.boundary_ratio();
        if ratio > boundary_tol {
            return Err(Error::Window {
                boundary: ratio,
                limit: boundary_tol,
            });
        }
    }
    let n = a.len();
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let weight = if i == 0 || i == n - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let bc = b.values[i].conj();
        let integrand = a.values[i] * b.dt[i].conj() - bc * a.dt[i];
        sum += weight * integrand;
    }
    Ok(-Complex64::i() * sum * (a.dx / 3.0))
}

// Eighth-order central second difference.
fn second_difference(f: impl Fn(f64) -> Result<Complex64>, x: f64, h: f64) -> Result<Complex64> {
    const C: [f64; 5] = [
        -205.0 / 72.0,
        8.0 / 5.0,
        -1.0 / 5.0,
        8.0 / 315.0,
        -1.0 / 560.0,
    ];
    let mut acc = C[0] * f(x)?;
    for (i, c) in C.iter().enumerate().skip(1) {
        let s = i as f64 * h;
        acc += *c * (f(x + s)? + f(x - s)?);
    }
    Ok(acc / (h * h))
}

/// Finite-difference residual of `[∂_T² - ∂_X² + m²(e^{-2wT} + e^{2wX})] Φ`
/// at `p`, returned with the largest of the three term magnitudes.
pub fn pde_residual(
    spec: &ModeSpec,
    field: impl Fn(NuaPoint) -> Result<Complex64>,
    p: NuaPoint,
    h: f64,
) -> Result<(Complex64, f64)> {
    let d_tt = second_difference(|t| field(NuaPoint { t, x: p.x }), p.t, h)?;
    let d_xx = second_difference(|x| field(NuaPoint { t: p.t, x }), p.x, h)?;
    let potential = spec.m * spec.m * conformal_factor(p, spec.w)? * field(p)?;
    let scale = d_tt.norm().max(d_xx.norm()).max(potential.norm());
    Ok((d_tt - d_xx + potential, scale))
}
