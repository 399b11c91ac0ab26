use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::domain;
use crate::error::Result;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Standard normal density.
pub fn gaussian_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Gaussian tail Q(x) = ½·erfc(x/√2).
pub fn gaussian_q(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return if x > 0.0 { 0.0 } else { 1.0 };
    }
    if x >= 0.0 {
        0.5 * erfc_nonneg(x * FRAC_1_SQRT_2)
    } else {
        1.0 - 0.5 * erfc_nonneg(-x * FRAC_1_SQRT_2)
    }
}

fn erfc_nonneg(x: f64) -> f64 {
    if x < 3.0 {
        1.0 - erf_series(x)
    } else {
        erfc_fraction(x)
    }
}

// erf(x) = 2/√π · e^{-x²} · Σ 2ⁿ x^{2n+1} / (1·3·…·(2n+1)); every term is positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..200u32 {
        term *= 2.0 * x2 / f64::from(2 * n + 1);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

// Laplace continued fraction, modified Lentz.
fn erfc_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500u32 {
        let a = 0.5 * f64::from(n);
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Inverse Gaussian tail: the x with Q(x) = p, for p ∈ (0, 1).
///
/// Starts from the Abramowitz–Stegun rational guess and polishes with
/// Halley steps against [`gaussian_q`].
pub fn gaussian_q_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("gaussian_q_inv", p, "probability must lie in (0, 1)"));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let (tail, sign) = if p < 0.5 { (p, 1.0) } else { (1.0 - p, -1.0) };
    let t = (-2.0 * tail.ln()).sqrt();
    let mut x =
        t - (2.515_517 + t * (0.802_853 + t * 0.010_328)) / (1.0 + t * (1.432_788 + t * (0.189_269 + t * 0.001_308)));
    for _ in 0..50 {
        let phi = gaussian_pdf(x);
        if phi == 0.0 {
            break;
        }
        let r = (gaussian_q(x) - tail) / phi;
        // Halley: Q'' = x φ(x)
        let step = r / (1.0 - 0.5 * x * r);
        x += step;
        if step.abs() <= 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    Ok(sign * x)
}
