use super::{check_order_arg, Precision};
use crate::sum::CompensatedSum;
use crate::{Error, Result};

/// Integrand cut-off relative to its peak.
const TAIL_CUTOFF: f64 = 1e-18;
const MAX_LEVELS: u32 = 14;
/// Beyond this the result underflows to zero even after rescaling by `e^{-x}`.
const UNDERFLOW_ARG: f64 = 745.0;

/// `K_{iν}(x)` with its quadrature error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MacdonaldValue {
    pub value: f64,
    /// `e^{x} K_{iν}(x)`, finite even when `value` underflows.
    pub scaled: f64,
    pub err: f64,
    /// The true value is below the smallest positive `f64`.
    pub underflow: bool,
}

/// `K_{iν}(x)` with default precision; underflow returns `0.0`.
pub fn macdonald_k_imag(nu: f64, x: f64) -> Result<f64> {
    Ok(macdonald_k_imag_with(nu, x, &Precision::default())?.value)
}

/// `K_{iν}(x) = ∫₀^∞ e^{-x cosh t} cos(νt) dt`.
///
/// The kernel already decays double-exponentially in `t`, so the trapezoid
/// rule on uniform nodes converges geometrically in the number of nodes.
/// The range is cut where `x (cosh t - 1)` exceeds `ln(1/TAIL_CUTOFF)` and the
/// step is halved until successive levels agree.
pub fn macdonald_k_imag_with(nu: f64, x: f64, prec: &Precision) -> Result<MacdonaldValue> {
    check_order_arg("macdonald_k_imag", nu, x)?;
    let cutoff = -TAIL_CUTOFF.ln();
    let t_max = (1.0 + cutoff / x).acosh();
    // e^{-x(cosh t - 1)} ≈ e^{-x t²/2} near t = 0, width 1/sqrt(x)
    let width = if x > 1.0 { x.sqrt().recip() } else { 1.0 };
    let oscillation = if nu > 0.0 { 1.0 / nu } else { f64::INFINITY };
    let mut h = (0.5 * width).min(0.5 * oscillation).min(t_max / 4.0);

    let integrand = |t: f64| {
        let c = if t < 1e-4 {
            // cosh t - 1 without cancellation
            let s = (0.5 * t).sinh();
            2.0 * s * s
        } else {
            t.cosh() - 1.0
        };
        (-x * c).exp() * (nu * t).cos()
    };

    // oscillation envelope of e^{x} K_{iν}(x); errors are measured against
    // it so that values near a zero of K are not held to a relative standard
    let envelope = {
        let large = (std::f64::consts::FRAC_PI_2 / x).sqrt();
        if nu > 0.0 && x < 700.0 {
            let pnu = std::f64::consts::PI * nu;
            ((std::f64::consts::PI / (nu * pnu.sinh())).sqrt() * x.exp()).min(large)
        } else {
            0.0
        }
    };

    let node_count = |step: f64| (t_max / step).ceil() as usize;
    let mut sum = CompensatedSum::<f64>::new();
    let mut abs_sum = 0.0;
    sum.add(0.5 * integrand(0.0));
    abs_sum += 0.5;
    for j in 1..=node_count(h) {
        let f = integrand(j as f64 * h);
        sum.add(f);
        abs_sum += f.abs();
    }
    let mut estimate = h * sum.value();
    let mut err = f64::INFINITY;
    let mut extra_levels = if prec.work_scale > 1 {
        (prec.work_scale as f64).log2().ceil() as u32
    } else {
        0
    };
    let mut converged = false;
    for _ in 0..MAX_LEVELS {
        // the new nodes sit halfway between the old ones
        let n_new = node_count(h);
        for j in 0..n_new {
            let f = integrand((j as f64 + 0.5) * h);
            sum.add(f);
            abs_sum += f.abs();
        }
        h *= 0.5;
        let refined = h * sum.value();
        err = (refined - estimate).abs();
        estimate = refined;
        let scale = estimate.abs().max(envelope).max(f64::MIN_POSITIVE);
        let floor = 4.0 * f64::EPSILON * h * abs_sum;
        if converged {
            if extra_levels == 0 {
                break;
            }
            extra_levels -= 1;
            continue;
        }
        if err <= (0.01 * prec.rel_tol * scale).max(floor) {
            converged = true;
            if extra_levels == 0 {
                break;
            }
        }
    }
    let scaled = estimate;
    let rel_err = (err + 4.0 * f64::EPSILON * h * abs_sum)
        / scaled.abs().max(envelope).max(f64::MIN_POSITIVE);
    if !converged || rel_err > prec.rel_tol {
        return Err(Error::Precision {
            function: "macdonald_k_imag",
            nu,
            z: x,
            estimate: rel_err,
            tolerance: prec.rel_tol,
        });
    }

    let value = if x >= UNDERFLOW_ARG {
        0.0
    } else {
        scaled * (-x).exp()
    };
    let underflow = value.abs() < f64::MIN_POSITIVE && scaled != 0.0;
    Ok(MacdonaldValue {
        value: if underflow { 0.0 } else { value },
        scaled,
        err: rel_err,
        underflow,
    })
}
