//! Special-function kernels used by the channel and finite block-length
//! closed forms.
//!
//! Every kernel is a pure function of its arguments. Series truncation is
//! governed by [`Accuracy`]; the defaults (absolute 1e-12, relative 1e-10,
//! 10⁴ terms) are what all public entry points without a `_with` suffix use.

mod bessel;
mod dd;
mod expint;
mod gamma;
mod lambert;
mod marcum;
mod normal;

pub use bessel::{bessel_i0, bessel_i0_scaled, bessel_j0};
pub use expint::{exp_integral_e1, exp_integral_e1_scaled};
pub use gamma::{gamma_p_q, gamma_upper, ln_gamma};
pub use lambert::{lambert_w0, lambert_w0_of_exp};
pub use marcum::{bocus_i, bocus_j, marcum_q1, marcum_q1_bocus, marcum_q1_pair, marcum_q1_pair_with, marcum_q1_with};
pub use normal::{gaussian_pdf, gaussian_q, gaussian_q_inv};

use crate::error::{Error, Result};

/// Truncation control for series and iterative kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Accuracy {
    pub fn new(abs_tol: f64, rel_tol: f64, max_terms: usize) -> Result<Self> {
        let valid = abs_tol >= 0.0
            && rel_tol >= 0.0
            && (abs_tol > 0.0 || rel_tol > 0.0)
            && abs_tol.is_finite()
            && rel_tol.is_finite();
        if !valid {
            return Err(Error::InvalidParameter {
                name: "accuracy tolerance",
                value: if abs_tol > 0.0 { rel_tol } else { abs_tol },
                reason: "tolerances must be finite, non-negative and not both zero",
            });
        }
        if max_terms == 0 {
            return Err(Error::InvalidParameter {
                name: "max_terms",
                value: 0.0,
                reason: "at least one term is required",
            });
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_terms,
        })
    }
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_terms: 10_000,
        }
    }
}

pub(crate) fn domain(func: &'static str, arg: f64, reason: &'static str) -> Error {
    Error::Domain { func, arg, reason }
}
