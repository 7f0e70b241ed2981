//! Principal branch of the Lambert W function.
//!
//! `W0(x)` is the inverse of `w -> w * exp(w)` on `[-1/e, inf)`, with range
//! `[-1, inf)`. It is the only transcendental primitive the closed-form
//! confidence needs.

use crate::error::{Error, Result};

/// -1/e, the branch point of the principal branch.
pub const NEG_INV_E: f64 = -1.0 / std::f64::consts::E;

/// Inputs this far below -1/e are treated as rounding noise and clamped.
const DOMAIN_SLACK: f64 = 1e-12;

/// Evaluates `W0(x)` for `x >= -1/e`.
///
/// Inputs within `1e-12` below `-1/e` are clamped to the branch point
/// (the confidence clamp produces exactly `-1/e` and floating-point
/// arithmetic may undershoot it); anything lower is a domain error.
///
/// The result `w` satisfies `w * exp(w) = x` to within
/// `1e-10 * max(1, |x|)` and is always `>= -1`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite {
            name: "lambert_w0 argument",
            value: x,
        });
    }
    if x < NEG_INV_E - DOMAIN_SLACK {
        return Err(Error::LambertDomain(x));
    }
    if x <= NEG_INV_E {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let mut w = initial_guess(x);
    // Halley iteration on f(w) = w e^w - x; cubic convergence from any of
    // the guesses above.
    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            break;
        }
        let df = ew * (w + 1.0);
        let d2f = ew * (w + 2.0);
        let denom = 2.0 * df * df - f * d2f;
        let step = if denom.abs() > f64::MIN_POSITIVE {
            2.0 * f * df / denom
        } else if df.abs() > f64::MIN_POSITIVE {
            f / df
        } else {
            break;
        };
        w -= step;
        if w < -1.0 {
            w = -1.0;
        }
        if step.abs() <= 1e-12 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

fn initial_guess(x: f64) -> f64 {
    if x < -0.25 {
        // Series around the branch point: W = -1 + p - p^2/3 + 11 p^3/72,
        // p = sqrt(2 (1 + e x)).
        let p = (2.0 * (1.0 + std::f64::consts::E * x)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    } else if x > std::f64::consts::E {
        let l = x.ln();
        l - l.ln()
    } else {
        x / (1.0 + x)
    }
}
