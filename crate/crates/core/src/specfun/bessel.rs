use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_order_arg, log_gamma_complex, Precision};
use crate::sum::{CompensatedSum, ComplexSum};
use crate::{Error, Result};

const EPS: f64 = f64::EPSILON;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_SERIES_TERMS: usize = 2000;
const MAX_ASYMPTOTIC_TERMS: usize = 400;
const SERIES_RETRY_FACTOR: f64 = 4.0;

/// Which evaluation route produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Backend {
    Series,
    Asymptotic,
    /// `H¹_{iν}` from `J₀ + iY₀` below [`Precision::nu_limit`].
    NuZeroLimit,
}

/// A function value together with its derivative in `z` and the estimated
/// relative error of the pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselPair {
    pub value: Complex64,
    pub deriv: Complex64,
    pub err: f64,
    pub backend: Backend,
}

/// `J_{iν}(z)` with default precision.
pub fn bessel_j_imag(nu: f64, z: f64) -> Result<Complex64> {
    Ok(bessel_j_imag_pair(nu, z, &Precision::default())?.value)
}

/// `dJ_{iν}/dz` with default precision.
pub fn bessel_j_imag_deriv(nu: f64, z: f64) -> Result<Complex64> {
    Ok(bessel_j_imag_pair(nu, z, &Precision::default())?.deriv)
}

/// `J_{iν}(z)` and `dJ_{iν}/dz` for `ν >= 0`, `z > 0`.
pub fn bessel_j_imag_pair(nu: f64, z: f64, prec: &Precision) -> Result<BesselPair> {
    check_order_arg("bessel_j_imag", nu, z)?;
    let series = || j_series(nu, z, prec).map(|s| s.pair);
    let asymptotic = || {
        let h = hankel_asymptotic(nu, z);
        Ok(BesselPair {
            value: 0.5 * (h.h1 + h.h2),
            deriv: 0.5 * (h.dh1 + h.dh2),
            err: h.err_j,
            backend: Backend::Asymptotic,
        })
    };
    let pair = with_fallback(z, prec, series, asymptotic)?;
    accept("bessel_j_imag", nu, z, pair, prec)
}

/// Runs the backend chosen by `z_switch`; if its error estimate misses the
/// tolerance, tries the other one and keeps the better result. The series is
/// only retried up to `SERIES_RETRY_FACTOR · z_switch`.
fn with_fallback(
    z: f64,
    prec: &Precision,
    series: impl Fn() -> Result<BesselPair>,
    asymptotic: impl Fn() -> Result<BesselPair>,
) -> Result<BesselPair> {
    let use_series = z <= prec.z_switch;
    let first = if use_series { series() } else { asymptotic() };
    if matches!(&first, Ok(p) if p.err <= prec.rel_tol) {
        return first;
    }
    if !use_series && z > SERIES_RETRY_FACTOR * prec.z_switch {
        return first;
    }
    let second = if use_series { asymptotic() } else { series() };
    match (first, second) {
        (Ok(a), Ok(b)) => Ok(if b.err < a.err { b } else { a }),
        (Ok(a), Err(_)) => Ok(a),
        (Err(_), Ok(b)) => Ok(b),
        (Err(e), Err(_)) => Err(e),
    }
}

/// `H¹_{iν}(z)` with default precision.
pub fn hankel1_imag(nu: f64, z: f64) -> Result<Complex64> {
    Ok(hankel1_imag_pair(nu, z, &Precision::default())?.value)
}

/// `dH¹_{iν}/dz` with default precision.
pub fn hankel1_imag_deriv(nu: f64, z: f64) -> Result<Complex64> {
    Ok(hankel1_imag_pair(nu, z, &Precision::default())?.deriv)
}

/// `H¹_{iν}(z)` and its `z`-derivative.
///
/// For small arguments the connection formula
/// `H¹_μ = (J_{-μ} - e^{-iμπ} J_μ) / (i sin μπ)` at `μ = iν` reduces to
/// `e^{πν/2} [Re J_{iν} / cosh(πν/2) + i Im J_{iν} / sinh(πν/2)]`,
/// which is 0/0 at ν = 0. Below `nu_limit` the limit `e^{πν/2}(J₀ + iY₀)` is
/// used instead; it is exact to O(ν²).
pub fn hankel1_imag_pair(nu: f64, z: f64, prec: &Precision) -> Result<BesselPair> {
    check_order_arg("hankel1_imag", nu, z)?;
    let asymptotic = || {
        let h = hankel_asymptotic(nu, z);
        Ok(BesselPair {
            value: h.h1,
            deriv: h.dh1,
            err: h.err_h1,
            backend: Backend::Asymptotic,
        })
    };
    let pair = if nu < prec.nu_limit && z <= prec.z_switch {
        hankel_nu_zero(nu, z, prec)?
    } else if nu < prec.nu_limit {
        asymptotic()?
    } else {
        with_fallback(z, prec, || hankel_from_series(nu, z, prec), asymptotic)?
    };
    accept("hankel1_imag", nu, z, pair, prec)
}

fn hankel_nu_zero(nu: f64, z: f64, prec: &Precision) -> Result<BesselPair> {
    let (y0, dy0, y_err) = y0_series(z, prec)?;
    let j = j_series(0.0, z, prec)?.pair;
    let scale = (0.5 * PI * nu).exp();
    let value = scale * Complex64::new(j.value.re, y0);
    let deriv = scale * Complex64::new(j.deriv.re, dy0);
    // dropped O(ν²) terms are bounded by a few ν² of the local magnitude
    let err = j.err.max(y_err) + 10.0 * nu * nu;
    Ok(BesselPair {
        value,
        deriv,
        err,
        backend: Backend::NuZeroLimit,
    })
}

fn hankel_from_series(nu: f64, z: f64, prec: &Precision) -> Result<BesselPair> {
    let j = j_series(nu, z, prec)?;
    let half = 0.5 * PI * nu;
    let (ch, sh, scale) = (half.cosh(), half.sinh(), half.exp());
    let combine = |v: Complex64| scale * Complex64::new(v.re / ch, v.im / sh);
    let value = combine(j.pair.value);
    let deriv = combine(j.pair.deriv);
    let [re, im, dre, dim] = j.abs_err;
    let abs_err = scale * (re / ch + im / sh);
    let abs_derr = scale * (dre / ch + dim / sh);
    let amp = amplitude(nu, z);
    let err = (abs_err / value.norm().max(amp)).max(abs_derr / deriv.norm().max(amp * z.min(1.0)));
    Ok(BesselPair {
        value,
        deriv,
        err,
        backend: Backend::Series,
    })
}

/// `Y₀(z)` and `Y₀'(z)` for `0 < z`, real valued.
pub fn bessel_y0_pair(z: f64, prec: &Precision) -> Result<(f64, f64)> {
    check_order_arg("bessel_y0", 0.0, z)?;
    if z > prec.z_switch {
        let h = hankel_asymptotic(0.0, z);
        return Ok((h.h1.im, h.dh1.im));
    }
    let (y, dy, err) = y0_series(z, prec)?;
    if err > prec.rel_tol {
        return Err(Error::Precision {
            function: "bessel_y0",
            nu: 0.0,
            z,
            estimate: err,
            tolerance: prec.rel_tol,
        });
    }
    Ok((y, dy))
}

fn accept(
    function: &'static str,
    nu: f64,
    z: f64,
    pair: BesselPair,
    prec: &Precision,
) -> Result<BesselPair> {
    let finite = |c: Complex64| c.re.is_finite() && c.im.is_finite();
    if !finite(pair.value) || !finite(pair.deriv) || !pair.err.is_finite() {
        return Err(Error::Precision {
            function,
            nu,
            z,
            estimate: f64::INFINITY,
            tolerance: prec.rel_tol,
        });
    }
    if pair.err > prec.rel_tol {
        return Err(Error::Precision {
            function,
            nu,
            z,
            estimate: pair.err,
            tolerance: prec.rel_tol,
        });
    }
    Ok(pair)
}

/// Natural magnitude of `J_{iν}` near `z`: `1/|Γ(1+iν)|` for small
/// arguments, `sqrt(2/πz)·cosh(πν/2)` for large ones.
fn amplitude(nu: f64, z: f64) -> f64 {
    let small = if nu > 0.0 {
        ((PI * nu).sinh() / (PI * nu)).sqrt()
    } else {
        1.0
    };
    let large = (2.0 / (PI * z)).sqrt() * (0.5 * PI * nu).cosh();
    small.min(large)
}

struct SeriesValue {
    pair: BesselPair,
    /// absolute errors of `value.re`, `value.im`, `deriv.re`, `deriv.im`
    abs_err: [f64; 4],
}

/// Power series `J_{iν}(z) = (z/2)^{iν} Σ (-z²/4)^k / (k! Γ(k+1+iν))`.
///
/// Real and imaginary rounding are tracked apart: for small ν the imaginary
/// part is O(ν) and its error scales with it, which matters once `H¹` divides
/// it by `sinh(πν/2)`.
fn j_series(nu: f64, z: f64, prec: &Precision) -> Result<SeriesValue> {
    let mu = Complex64::new(0.0, nu);
    let half = 0.5 * z;
    let x = -(half * half);
    let prefactor = (mu * half.ln() - log_gamma_complex(mu + 1.0)?).exp();

    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = ComplexSum::new();
    let mut dsum = ComplexSum::new();
    // the k-th term carries about k roundings; these accumulate (k+1)|Re t|²,
    // (k+1)|Im t|² and the same for the derivative terms
    let mut abs = [CompensatedSum::<f64>::new(); 4];
    sum.add(term);
    dsum.add(mu);
    abs[0].add(1.0);
    abs[3].add(nu);

    let mut stop_at: Option<usize> = None;
    let mut k = 0usize;
    loop {
        k += 1;
        if k > MAX_SERIES_TERMS {
            return Err(Error::Precision {
                function: "bessel_j_imag",
                nu,
                z,
                estimate: f64::INFINITY,
                tolerance: prec.rel_tol,
            });
        }
        let kf = k as f64;
        term = term * x / (kf * (mu + kf));
        let dterm = term * (mu + 2.0 * kf);
        sum.add(term);
        dsum.add(dterm);
        let weight = (kf + 1.0).sqrt();
        let small = nu.min(1.0);
        abs[0].add((term.re * weight).powi(2));
        abs[1].add(((term.im.abs() + small * term.norm()) * weight).powi(2));
        abs[2].add((dterm.re * weight).powi(2));
        abs[3].add(((dterm.im.abs() + small * dterm.norm()) * weight).powi(2));

        match stop_at {
            Some(last) if k >= last => break,
            Some(_) => {}
            None => {
                let s = sum.value().norm();
                let ds = dsum.value().norm().max(s);
                if kf > half && term.norm() <= EPS * s && dterm.norm() <= EPS * ds {
                    stop_at = Some(k * prec.work_scale.max(1) as usize);
                    if prec.work_scale <= 1 {
                        break;
                    }
                }
            }
        }
    }

    let value = prefactor * sum.value();
    let deriv = prefactor * dsum.value() / z;
    let [a_re, a_im, d_re, d_im] = abs.map(|a| 2.0 * EPS * a.value().sqrt());
    let (pr, pi) = (prefactor.re.abs(), prefactor.im.abs());
    // rounding in the term recurrence, plus a few ulps from the gamma prefactor
    let abs_err = [
        pr * a_re + pi * a_im + 4.0 * EPS * value.re.abs(),
        pr * a_im + pi * a_re + 4.0 * EPS * value.im.abs(),
        (pr * d_re + pi * d_im) / z + 4.0 * EPS * deriv.re.abs(),
        (pr * d_im + pi * d_re) / z + 4.0 * EPS * deriv.im.abs(),
    ];
    let amp = amplitude(nu, z);
    let err = ((abs_err[0] + abs_err[1]) / value.norm().max(amp))
        .max((abs_err[2] + abs_err[3]) / deriv.norm().max(amp * z.min(1.0)));
    Ok(SeriesValue {
        pair: BesselPair {
            value,
            deriv,
            err,
            backend: Backend::Series,
        },
        abs_err,
    })
}

/// Series for `Y₀` and `Y₀'`, with relative error estimate.
fn y0_series(z: f64, prec: &Precision) -> Result<(f64, f64, f64)> {
    let j0 = j_series(0.0, z, prec)?.pair;
    let half = 0.5 * z;
    let x = half * half;
    let log_term = half.ln() + EULER_GAMMA;

    let mut sum = CompensatedSum::<f64>::new();
    let mut dsum = CompensatedSum::<f64>::new();
    let mut abs_sum = 0.0;
    let mut term = 1.0; // (z²/4)^k / (k!)², signed below
    let mut harmonic = 0.0;
    let mut k = 0usize;
    let mut stop_at: Option<usize> = None;
    loop {
        k += 1;
        if k > MAX_SERIES_TERMS {
            return Err(Error::Precision {
                function: "bessel_y0",
                nu: 0.0,
                z,
                estimate: f64::INFINITY,
                tolerance: prec.rel_tol,
            });
        }
        let kf = k as f64;
        term *= x / (kf * kf);
        harmonic += 1.0 / kf;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let t = sign * harmonic * term;
        sum.add(t);
        dsum.add(t * 2.0 * kf / z);
        abs_sum += t.abs() * (kf + 1.0).sqrt();
        match stop_at {
            Some(last) if k >= last => break,
            Some(_) => {}
            None => {
                if kf > half && t.abs() <= EPS * sum.value().abs().max(EPS) {
                    stop_at = Some(k * prec.work_scale.max(1) as usize);
                    if prec.work_scale <= 1 {
                        break;
                    }
                }
            }
        }
    }
    let two_over_pi = 2.0 / PI;
    let y = two_over_pi * (log_term * j0.value.re + sum.value());
    let dy = two_over_pi * (j0.value.re / z + log_term * j0.deriv.re + dsum.value());
    let amp = amplitude(0.0, z);
    let abs_err = two_over_pi * (2.0 * EPS * abs_sum + log_term.abs() * j0.err * amp);
    let err = abs_err / y.abs().max(amp) + j0.err;
    Ok((y, dy, err))
}

struct HankelAsymptotic {
    h1: Complex64,
    dh1: Complex64,
    h2: Complex64,
    dh2: Complex64,
    err_h1: f64,
    err_j: f64,
}

/// Hankel expansions `H^{(1,2)}_μ(z) ~ sqrt(2/πz) e^{±iω} Σ (±i)^k a_k(μ) / z^k`
/// with `ω = z - μπ/2 - π/4`, specialised to `μ = iν` where every `a_k` is real.
/// Summation stops at convergence or just before the smallest term.
fn hankel_asymptotic(nu: f64, z: f64) -> HankelAsymptotic {
    let four_mu_sq = -4.0 * nu * nu;
    let iz = Complex64::new(0.0, 1.0);

    // u_k = i^k a_k / z^k; the H² series is its conjugate
    let mut u = Complex64::new(1.0, 0.0);
    let mut s = ComplexSum::new();
    let mut ds = ComplexSum::new();
    s.add(u);
    ds.add(iz * u);
    let mut omitted = 0.0;
    let mut last_size = f64::INFINITY;
    for k in 1..=MAX_ASYMPTOTIC_TERMS {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = iz * u * ((four_mu_sq - odd * odd) / (8.0 * kf * z));
        // d/dz of z^{-1/2} e^{iω} Σ u_k
        let dterm = iz * next - (kf - 0.5) * u / z;
        let size = next.norm().max(dterm.norm());
        if size > last_size {
            omitted = last_size;
            break;
        }
        u = next;
        s.add(u);
        ds.add(dterm);
        last_size = size;
        omitted = size;
        if size <= 0.5 * EPS {
            break;
        }
    }
    let s = s.value();
    let ds = ds.value();

    // e^{i(z - π/4)} without forming z - π/4, which loses the phase for huge z
    let (sin_z, cos_z) = z.sin_cos();
    let phase = Complex64::new(
        (cos_z + sin_z) * FRAC_1_SQRT_2,
        (sin_z - cos_z) * FRAC_1_SQRT_2,
    );
    let p = (2.0 / (PI * z)).sqrt();
    let grow = (0.5 * PI * nu).exp();
    let e1 = phase * (p * grow);
    let e2 = phase.conj() * (p / grow);
    let h1 = e1 * s;
    let dh1 = e1 * ds;
    let h2 = e2 * s.conj();
    let dh2 = e2 * ds.conj();

    // the first omitted term understates the remainder near the switch point
    let tail = 3.0 * omitted + 4.0 * EPS;
    let err_h1 = tail / s.norm().min(ds.norm()).max(0.5);
    let j = 0.5 * (h1 + h2);
    let amp = p * (0.5 * PI * nu).cosh();
    let err_j = p * grow * tail / j.norm().max(amp);
    HankelAsymptotic {
        h1,
        dh1,
        h2,
        dh2,
        err_h1,
        err_j,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent real-order oracle: J₀ and J₁ from their plain series.
    fn j0_ref(z: f64) -> f64 {
        let x = -0.25 * z * z;
        let (mut t, mut s) = (1.0, 1.0);
        for k in 1..200 {
            t *= x / (k as f64 * k as f64);
            s += t;
        }
        s
    }

    #[test]
    fn reference_values_at_order_zero() {
        let pair = bessel_j_imag_pair(0.0, 1.0, &Precision::default()).unwrap();
        assert!((pair.value.re - 0.765_197_686_557_966_6).abs() < 1e-10);
        assert!(pair.value.im.abs() < 1e-15);
        assert!((pair.deriv.re + 0.440_050_585_744_933_5).abs() < 1e-10);
        assert!((pair.value.re - j0_ref(1.0)).abs() < 1e-14);
    }

    #[test]
    fn backends_agree_near_switch() {
        let prec = Precision::default();
        for &nu in &[0.0, 0.1, 0.3, 1.0] {
            for &z in &[11.0, 12.0, 14.0] {
                let series = j_series(nu, z, &prec).unwrap().pair;
                let h = hankel_asymptotic(nu, z);
                let asym = 0.5 * (h.h1 + h.h2);
                let dasym = 0.5 * (h.dh1 + h.dh2);
                let scale = amplitude(nu, z);
                let tol = (series.err + h.err_j).max(1e-12) * scale;
                assert!((series.value - asym).norm() < tol, "nu={nu} z={z}");
                assert!((series.deriv - dasym).norm() < tol, "nu={nu} z={z}");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(bessel_j_imag(0.1, 0.0).is_err());
        assert!(bessel_j_imag(-0.1, 1.0).is_err());
        assert!(hankel1_imag(0.1, f64::NAN).is_err());
    }

    #[test]
    fn unreachable_tolerance_reports_precision_loss() {
        let prec = Precision::with_tol(1e-17);
        match bessel_j_imag_pair(0.2, 55.0, &prec) {
            Err(Error::Precision { estimate, .. }) => assert!(estimate > 1e-17),
            other => panic!("expected a precision error, got {other:?}"),
        }
    }

    #[test]
    fn large_order_near_switch_falls_back_to_series() {
        let pair = bessel_j_imag_pair(2.5, 12.1, &Precision::default()).unwrap();
        assert_eq!(pair.backend, Backend::Series);
        assert!(pair.err < 1e-10);
    }

    #[test]
    fn hankel_zero_order_limit() {
        let h = hankel1_imag(0.0, 1.0).unwrap();
        assert!((h.re - 0.765_197_686_557_966_6).abs() < 1e-10);
        assert!((h.im - 0.088_256_964_215_676_96).abs() < 1e-10);
        // just above and below the branch threshold
        let limit = Precision {
            nu_limit: 2e-6,
            ..Precision::default()
        };
        let exact = hankel1_imag_pair(1.1e-6, 1.0, &Precision::default()).unwrap();
        let approx = hankel1_imag_pair(1.1e-6, 1.0, &limit).unwrap();
        assert_eq!(exact.backend, Backend::Series);
        assert_eq!(approx.backend, Backend::NuZeroLimit);
        assert!((exact.value - approx.value).norm() < 1e-10);
    }
}
