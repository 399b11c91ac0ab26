use std::f64::consts::E;

use super::domain;
use crate::error::Result;

/// Principal branch W₀ of the Lambert function, y ≥ −1/e.
pub fn lambert_w0(y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(domain("lambert_w0", y, "argument must be finite"));
    }
    let branch = -1.0 / E;
    if y < branch {
        // Tolerate rounding of −1/e itself.
        if y >= branch - 4.0 * f64::EPSILON {
            return Ok(-1.0);
        }
        return Err(domain("lambert_w0", y, "no real solution below -1/e"));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let mut w = if y < -0.25 {
        let p = (2.0 * (E * y + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if y < 3.0 {
        let l = y.ln_1p();
        l * (1.0 - l.ln_1p() / (2.0 + l))
    } else {
        let l1 = y.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - y;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let next = w - f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * next.abs().max(1e-300);
        w = next;
        if done {
            break;
        }
    }
    Ok(w)
}

/// W₀(e^L) for arguments too large to form e^L directly. Solves
/// w + ln w = L by Newton's method.
pub fn lambert_w0_of_exp(ln_y: f64) -> Result<f64> {
    if ln_y.is_nan() {
        return Err(domain("lambert_w0_of_exp", ln_y, "argument must not be NaN"));
    }
    if ln_y < 500.0 {
        return lambert_w0(ln_y.exp());
    }
    if ln_y == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let mut w = ln_y - ln_y.ln();
    for _ in 0..64 {
        let f = w + w.ln() - ln_y;
        let step = f / (1.0 + 1.0 / w);
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w {
            break;
        }
    }
    Ok(w)
}
