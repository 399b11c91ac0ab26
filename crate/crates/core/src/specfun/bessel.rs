use std::f64::consts::PI;

use super::dd::DoubleDouble;
use super::domain;
use crate::error::{Error, Result};

/// Below this |x| the J₀ power series is summed in double-double; above
/// it the Hankel asymptotic expansion is accurate to well below 1e-15.
const J0_SERIES_LIMIT: f64 = 25.0;
const I0_SERIES_LIMIT: f64 = 30.0;

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain("bessel_j0", x, "argument must be finite"));
    }
    let ax = x.abs();
    if ax <= J0_SERIES_LIMIT {
        Ok(j0_series(ax))
    } else {
        Ok(j0_hankel(ax))
    }
}

fn j0_series(x: f64) -> f64 {
    // term_m = (-(x/2)^2)^m / (m!)^2
    let step = DoubleDouble::square_of(x).scale(0.25).neg();
    let mut term = DoubleDouble::from_f64(1.0);
    let mut sum = term;
    for m in 1..400u32 {
        term = (term * step).div_f64(f64::from(m) * f64::from(m));
        sum = sum + term;
        if f64::from(m) > 0.5 * x && term.abs_hi() < 1e-20 {
            break;
        }
    }
    sum.to_f64()
}

fn j0_hankel(x: f64) -> f64 {
    // a_k = a_{k-1} * (-(2k-1)^2) / (8k), alternating into P (even k) and Q (odd k).
    let mut a = 1.0;
    let mut xpow = 1.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    for k in 1..200u32 {
        let odd = f64::from(2 * k - 1);
        a *= -(odd * odd) / (8.0 * f64::from(k));
        xpow *= x;
        let t = a / xpow;
        if t.abs() >= last {
            break;
        }
        last = t.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * t;
        } else {
            p += sign * t;
        }
        if last < 1e-18 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    let cos_w = (c + s) * std::f64::consts::FRAC_1_SQRT_2;
    let sin_w = (s - c) * std::f64::consts::FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_w - q * sin_w)
}

/// Modified Bessel function of the first kind, order zero.
///
/// Fails with [`Error::Overflow`] once the result leaves the f64 range
/// (x ≳ 713.98); use [`bessel_i0_scaled`] there.
pub fn bessel_i0(x: f64) -> Result<f64> {
    check_i0_arg("bessel_i0", x)?;
    let v = if x <= I0_SERIES_LIMIT {
        i0_series(x)
    } else {
        i0e_asymptotic(x) * x.exp()
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow {
            func: "bessel_i0",
            arg: x,
        })
    }
}

/// e^{-x}·I₀(x), finite for every x ≥ 0.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    check_i0_arg("bessel_i0_scaled", x)?;
    if x <= I0_SERIES_LIMIT {
        Ok(i0_series(x) * (-x).exp())
    } else {
        Ok(i0e_asymptotic(x))
    }
}

fn check_i0_arg(func: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(domain(func, x, "argument must be finite"));
    }
    if x < 0.0 {
        return Err(domain(func, x, "argument must be non-negative"));
    }
    Ok(())
}

fn i0_series(x: f64) -> f64 {
    let step = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500u32 {
        let kf = f64::from(k);
        term *= step / (kf * kf);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

fn i0e_asymptotic(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200u32 {
        let odd = f64::from(2 * k - 1);
        let next = term * odd * odd / (8.0 * f64::from(k) * x);
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}
