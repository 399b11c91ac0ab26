use super::domain;
use crate::error::Result;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponential integral E₁(x) = ∫ₓ^∞ e^{−t}/t dt, x > 0.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    check(x)?;
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok(e1_scaled_fraction(x) * (-x).exp())
    }
}

/// e^{x}·E₁(x); stays finite where E₁ underflows and e^x overflows.
pub fn exp_integral_e1_scaled(x: f64) -> Result<f64> {
    check(x)?;
    if x <= 1.0 {
        Ok(e1_series(x) * x.exp())
    } else {
        Ok(e1_scaled_fraction(x))
    }
}

fn check(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain("exp_integral_e1", x, "argument must be positive and finite"))
    }
}

// E₁(x) = −γ − ln x − Σ_{k≥1} (−x)^k / (k·k!)
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut fact_term = 1.0;
    for k in 1..200u32 {
        let kf = f64::from(k);
        fact_term *= -x / kf;
        let term = fact_term / kf;
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

// Continued fraction for e^x E₁(x), modified Lentz.
fn e1_scaled_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000u32 {
        let an = -f64::from(i) * f64::from(i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}
