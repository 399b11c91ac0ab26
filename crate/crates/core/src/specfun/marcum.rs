//! First-order Marcum Q-function.
//!
//! Q₁(s, ρ) is the upper tail at ρ² of a non-central χ² variable with two
//! degrees of freedom and non-centrality s². Writing λ = s²/2 and y = ρ²/2,
//!
//! ```text
//! Q₁(s, ρ) = Σ_k Pois(k; λ) · Q(k + 1, y)
//! ```
//!
//! where Q is the regularized upper incomplete gamma function. The sum is
//! taken over the window of k where the Poisson weights exceed a cutoff,
//! walking out from the mode so that neither tail underflows.

use super::gamma::{gamma_p_q_with, ln_gamma};
use super::{domain, Accuracy};
use crate::error::{Error, Result};

pub fn marcum_q1(s: f64, rho: f64) -> Result<f64> {
    marcum_q1_with(s, rho, &Accuracy::default())
}

pub fn marcum_q1_with(s: f64, rho: f64, acc: &Accuracy) -> Result<f64> {
    Ok(marcum_q1_pair_with(s, rho, acc)?.0)
}

/// `(Q₁(s, ρ), 1 − Q₁(s, ρ))`. The smaller member is summed directly, so
/// both deep tails keep their relative accuracy.
pub fn marcum_q1_pair(s: f64, rho: f64) -> Result<(f64, f64)> {
    marcum_q1_pair_with(s, rho, &Accuracy::default())
}

pub fn marcum_q1_pair_with(s: f64, rho: f64, acc: &Accuracy) -> Result<(f64, f64)> {
    for (v, what) in [(s, "s"), (rho, "rho")] {
        if !v.is_finite() || v < 0.0 {
            return Err(domain(
                "marcum_q1",
                v,
                match what {
                    "s" => "s must be finite and non-negative",
                    _ => "rho must be finite and non-negative",
                },
            ));
        }
    }
    if rho == 0.0 {
        return Ok((1.0, 0.0));
    }
    let lam = 0.5 * s * s;
    let y = 0.5 * rho * rho;
    if lam == 0.0 {
        return Ok(((-y).exp(), -(-y).exp_m1()));
    }

    let ln_cut = (acc.abs_tol * 1e-4).ln();
    let ln_lam = lam.ln();
    let mode = lam.floor();
    let ln_w_mode = mode * ln_lam - lam - ln_gamma(mode + 1.0);

    let mut kmin = mode;
    let mut ln_w_min = ln_w_mode;
    while kmin > 0.0 && ln_w_min > ln_cut {
        ln_w_min += kmin.ln() - ln_lam;
        kmin -= 1.0;
    }
    let mut kmax = mode;
    let mut ln_w_max = ln_w_mode;
    while ln_w_max > ln_cut {
        kmax += 1.0;
        ln_w_max += ln_lam - kmax.ln();
    }
    let terms = (kmax - kmin) as usize + 1;
    if terms > acc.max_terms {
        return Err(Error::Convergence {
            func: "marcum_q1",
            terms: acc.max_terms,
        });
    }

    let ln_y = y.ln();
    if y > lam + 1.0 {
        // Q₁ is the small side: Σ w_k Q(k+1, y), with Q(k+2, y) = Q(k+1, y) + Pois(k+1; y).
        let (_, mut q_reg) = gamma_p_q_with(kmin + 1.0, y, acc)?;
        let mut ln_pois = (kmin + 1.0) * ln_y - y - ln_gamma(kmin + 2.0);
        let mut ln_w = ln_w_min;
        let mut sum = 0.0;
        let mut k = kmin;
        loop {
            sum += ln_w.exp() * q_reg;
            if k >= kmax {
                break;
            }
            q_reg += ln_pois.exp();
            ln_pois += ln_y - (k + 2.0).ln();
            k += 1.0;
            ln_w += ln_lam - k.ln();
        }
        let q = sum.clamp(0.0, 1.0);
        Ok((q, 1.0 - q))
    } else {
        // 1 − Q₁ is the small side: Σ w_k P(k+1, y), with P(k, y) = P(k+1, y) + Pois(k; y).
        let (mut p_reg, _) = gamma_p_q_with(kmax + 1.0, y, acc)?;
        let mut ln_pois = kmax * ln_y - y - ln_gamma(kmax + 1.0);
        let mut ln_w = ln_w_max;
        let mut sum = 0.0;
        let mut k = kmax;
        loop {
            sum += ln_w.exp() * p_reg;
            if k <= kmin {
                break;
            }
            p_reg += ln_pois.exp();
            ln_pois += k.ln() - ln_y;
            ln_w += k.ln() - ln_lam;
            k -= 1.0;
        }
        let p = sum.clamp(0.0, 1.0);
        Ok((1.0 - p, p))
    }
}

/// 𝓘(s) of the exponential-of-power Marcum approximation.
pub fn bocus_i(s: f64) -> f64 {
    -0.840 + s * (0.327 + s * (-0.740 + s * (0.083 + s * -0.004)))
}

/// 𝓙(s) of the exponential-of-power Marcum approximation.
pub fn bocus_j(s: f64) -> f64 {
    2.174 + s * (-0.592 + s * (0.593 + s * (-0.092 + s * 0.005)))
}

/// Q₁(s, ρ) ≈ exp(−e^{𝓘(s)} ρ^{𝓙(s)}), clamped to [0, 1].
pub fn marcum_q1_bocus(s: f64, rho: f64) -> f64 {
    debug_assert!(s >= 0.0 && rho >= 0.0);
    if rho == 0.0 {
        return 1.0;
    }
    (-(bocus_i(s).exp()) * rho.powf(bocus_j(s))).exp().clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pa_fbl_testkit as oracle;

    #[test]
    fn boundary_cases() {
        for s in [0.0, 0.5, 3.0, 40.0] {
            assert_eq!(marcum_q1(s, 0.0).unwrap(), 1.0);
        }
        for rho in [0.1_f64, 1.0, 2.5, 6.0] {
            let want = (-0.5 * rho * rho).exp();
            assert!((marcum_q1(0.0, rho).unwrap() - want).abs() < 1e-15);
        }
        assert!(marcum_q1(-1.0, 1.0).is_err());
        assert!(marcum_q1(1.0, f64::NAN).is_err());
    }

    #[test]
    fn quadrature_oracle_at_canonical_point() {
        let want = oracle::marcum_q1_quadrature(1.2, 0.8);
        let got = marcum_q1(1.2, 0.8).unwrap();
        assert!((got - want).abs() < 1e-12, "got={got} want={want}");
    }

    #[test]
    fn quadrature_oracle_on_grid() {
        for i in 0..10 {
            for j in 0..10 {
                let s = 0.05 + 1.2 * f64::from(i);
                let rho = 0.1 + 1.3 * f64::from(j);
                let want = oracle::marcum_q1_quadrature(s, rho);
                let (q, p) = marcum_q1_pair(s, rho).unwrap();
                assert!((q - want).abs() < 1e-12, "s={s} rho={rho} q={q} want={want}");
                assert!((p - (1.0 - want)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn small_side_keeps_relative_accuracy() {
        // deep upper tail
        let (q, _) = marcum_q1_pair(1.0, 9.0).unwrap();
        let want = oracle::marcum_q1_quadrature(1.0, 9.0);
        assert!(((q - want) / want).abs() < 1e-8, "q={q} want={want}");
        // deep lower tail of the CDF
        let (_, p) = marcum_q1_pair(9.0, 1.0).unwrap();
        let want = oracle::marcum_cdf_quadrature(9.0, 1.0);
        assert!(((p - want) / want).abs() < 1e-8, "p={p} want={want}");
    }

    #[test]
    fn large_noncentrality() {
        // λ ≈ 2000: the mixture window sits far from k = 0.
        let s = (4000.0_f64).sqrt();
        let q = marcum_q1(s, s).unwrap();
        // Rician amplitude is nearly N(s, 1): Q₁(s, s) → 1/2 + O(1/s).
        assert!((q - 0.5).abs() < 0.02, "q={q}");
        let want = oracle::marcum_q1_quadrature(s, s);
        assert!((q - want).abs() < 1e-11, "q={q} want={want}");
    }

    #[test]
    fn bocus_at_zero_s() {
        assert_eq!(marcum_q1_bocus(2.0, 0.0), 1.0);
        let v = marcum_q1_bocus(0.0, 1.0);
        assert!((v - (-(-0.840_f64).exp()).exp()).abs() < 1e-15);
        assert!((v - 0.6494).abs() < 1e-4);
    }

    #[test]
    fn bocus_deviation_from_exact() {
        let exact = marcum_q1(2.0, 1.5).unwrap();
        let approx = marcum_q1_bocus(2.0, 1.5);
        let rel = (approx - exact).abs() / exact;
        eprintln!("bocus vs exact at (2, 1.5): exact={exact:.6} approx={approx:.6} rel={rel:.3e}");
        assert!(rel < 0.05);
    }

    #[test]
    fn bocus_validity_envelope() {
        // No accuracy claim exists for the polynomial fit, so the envelope is
        // measured: worst absolute gap over ρ ∈ (0, 8] for each s.
        let mut inner = 0.0_f64;
        let mut outer = 0.0_f64;
        for i in 0..=24 {
            let s = 0.25 * f64::from(i);
            let mut worst = 0.0_f64;
            for j in 1..=64 {
                let rho = 0.125 * f64::from(j);
                worst = worst.max((marcum_q1_bocus(s, rho) - marcum_q1(s, rho).unwrap()).abs());
            }
            eprintln!("bocus envelope s={s:.2}: worst |gap| = {worst:.4}");
            if s <= 4.0 {
                inner = inner.max(worst);
            } else {
                outer = outer.max(worst);
            }
        }
        assert!(inner < 0.05, "s <= 4: {inner}");
        assert!(outer < 0.25, "4 < s <= 6: {outer}");
    }
}
