use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

// Lanczos coefficients for g = 671/128, fourteen terms (Numerical Recipes,
// 3rd ed.). Relative accuracy is a few ulps for Re(a) >= 1/2.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// `log Γ(a)` for complex `a`.
///
/// For `Re(a) >= 1/2` the result is the branch continuous from the positive
/// real axis; smaller real parts go through the reflection formula.
pub fn log_gamma_complex(a: Complex64) -> Result<Complex64> {
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "log_gamma_complex: non-finite argument {a}"
        )));
    }
    if a.re <= 0.0 {
        let nearest = a.re.round();
        let scale = nearest.abs().max(1.0);
        if (a.re - nearest).abs() <= f64::EPSILON * scale && a.im.abs() <= f64::EPSILON * scale {
            return Err(Error::Pole { re: a.re, im: a.im });
        }
    }
    if a.re < 0.5 {
        // Γ(a)Γ(1-a) = π / sin(πa)
        let s = (a * PI).sin();
        let reflected = log_gamma_complex(Complex64::new(1.0, 0.0) - a)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - reflected);
    }
    Ok(lanczos(a))
}

fn lanczos(x: Complex64) -> Complex64 {
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    let mut y = x;
    for c in LANCZOS_COEFFS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (ser * SQRT_TWO_PI / x).ln()
}

/// `Γ(a)` for complex `a`.
pub fn gamma_complex(a: Complex64) -> Result<Complex64> {
    Ok(log_gamma_complex(a)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert!(log_gamma_complex(Complex64::new(1.0, 0.0)).unwrap().norm() < 1e-15);
        let lg5 = log_gamma_complex(Complex64::new(5.0, 0.0)).unwrap();
        assert!((lg5.re - 24f64.ln()).abs() < 1e-14);
        assert!(lg5.im.abs() < 1e-15);
        let g = gamma_complex(Complex64::new(0.5, 0.0)).unwrap();
        assert!((g.re - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn poles_are_rejected() {
        for n in [0.0, -1.0, -2.0, -7.0] {
            assert!(matches!(
                log_gamma_complex(Complex64::new(n, 0.0)),
                Err(Error::Pole { .. })
            ));
        }
        assert!(log_gamma_complex(Complex64::new(-1.0, 1e-3)).is_ok());
    }

    #[test]
    fn reflection_matches_recurrence() {
        // Γ(a+1) = aΓ(a) across the reflection boundary
        let a = Complex64::new(-0.3, 0.7);
        let lhs = gamma_complex(a + 1.0).unwrap();
        let rhs = a * gamma_complex(a).unwrap();
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
    }

    #[test]
    fn modulus_identity_on_imaginary_line() {
        // |Γ(1+iν)|² = πν / sinh(πν)
        for &nu in &[0.01, 0.1, 0.5, 1.0, 2.5, 5.0] {
            let g = gamma_complex(Complex64::new(1.0, nu)).unwrap();
            let ratio = g.norm_sqr() * (PI * nu).sinh() / (PI * nu);
            assert!((ratio - 1.0).abs() < 1e-12, "nu = {nu}: {ratio}");
        }
    }
}
