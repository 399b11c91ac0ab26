//! Finite block-length error probability under the normal approximation
//!
//! ```text
//! ε(g) = Q( √L · (ln(1+gP) − R) / √(1 − (1+gP)⁻²) )
//! ```
//!
//! and its semi-linear surrogate around the threshold gain α = (e^R − 1)/P.

use crate::error::{Error, Result};
use crate::specfun::gaussian_q;

/// Block length and rate (nats per channel use).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeSpec {
    block_length: u64,
    rate_npcu: f64,
}

impl CodeSpec {
    pub fn new(block_length: u64, rate_npcu: f64) -> Result<Self> {
        if block_length == 0 {
            return Err(Error::InvalidParameter {
                name: "block_length",
                value: 0.0,
                reason: "must be at least one channel use",
            });
        }
        if !(rate_npcu.is_finite() && rate_npcu >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "rate",
                value: rate_npcu,
                reason: "must be finite and non-negative",
            });
        }
        Ok(Self {
            block_length,
            rate_npcu,
        })
    }

    pub fn block_length(&self) -> u64 {
        self.block_length
    }

    pub fn rate(&self) -> f64 {
        self.rate_npcu
    }

    /// K = R·L information nats.
    pub fn info_nats(&self) -> f64 {
        self.rate_npcu * self.block_length as f64
    }

    pub fn with_rate(self, rate_npcu: f64) -> Result<Self> {
        Self::new(self.block_length, rate_npcu)
    }
}

/// Noise-normalised transmit power P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    power_linear: f64,
}

impl LinkBudget {
    pub fn new(power_linear: f64) -> Result<Self> {
        if !(power_linear.is_finite() && power_linear > 0.0) {
            return Err(Error::InvalidParameter {
                name: "power",
                value: power_linear,
                reason: "must be finite and positive",
            });
        }
        Ok(Self { power_linear })
    }

    pub fn from_db(snr_db: f64) -> Result<Self> {
        Self::new(10f64.powf(snr_db / 10.0))
    }

    pub fn power(&self) -> f64 {
        self.power_linear
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * self.power_linear.log10()
    }
}

/// Channel dispersion V(x) = 1 − (1+x)⁻² at x = gP, written to stay exact as x → 0.
pub fn dispersion(gp: f64) -> f64 {
    let d = 1.0 + gp;
    gp * (2.0 + gp) / (d * d)
}

/// The argument of Q in the error expression; +∞ when R = 0 and g > 0.
pub fn q_argument(g: f64, power: f64, block_length: f64, rate: f64) -> f64 {
    let gp = g * power;
    if gp <= 0.0 {
        return if rate > 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    let margin = gp.ln_1p() - rate;
    if margin == 0.0 {
        return 0.0;
    }
    block_length.sqrt() * margin / dispersion(gp).sqrt()
}

/// Block error probability at gain g.
///
/// R = 0 gives 0 for every g (nothing to decode, including g = 0);
/// g = 0 with R > 0 gives 1.
pub fn fbl_error(g: f64, budget: &LinkBudget, code: &CodeSpec) -> f64 {
    fbl_error_raw(g, budget.power(), code.block_length() as f64, code.rate())
}

pub(crate) fn fbl_error_raw(g: f64, power: f64, block_length: f64, rate: f64) -> f64 {
    if rate <= 0.0 {
        return 0.0;
    }
    gaussian_q(q_argument(g, power, block_length, rate))
}

/// Threshold α and slope μ of the semi-linear error surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiLinearApprox {
    pub alpha: f64,
    pub mu: f64,
}

impl SemiLinearApprox {
    pub fn lower(&self) -> f64 {
        self.alpha - 0.5 / self.mu
    }

    pub fn upper(&self) -> f64 {
        self.alpha + 0.5 / self.mu
    }
}

/// α = (e^R−1)/P, μ = √(L·P² / (2π(e^{2R}−1))).
pub fn make_semilinear(code: &CodeSpec, budget: &LinkBudget) -> Result<SemiLinearApprox> {
    semilinear_raw(budget.power(), code.block_length() as f64, code.rate())
}

pub(crate) fn semilinear_raw(power: f64, block_length: f64, rate: f64) -> Result<SemiLinearApprox> {
    if !(rate > 0.0) {
        return Err(Error::Domain {
            func: "make_semilinear",
            arg: rate,
            reason: "slope diverges at zero rate",
        });
    }
    let alpha = rate.exp_m1() / power;
    let mu = (block_length / (2.0 * std::f64::consts::PI * (2.0 * rate).exp_m1())).sqrt() * power;
    Ok(SemiLinearApprox { alpha, mu })
}

/// 1 below α − 1/(2μ), ½ − μ(g−α) inside the window, 0 above.
pub fn semilinear_q(g: f64, approx: &SemiLinearApprox) -> f64 {
    if g < approx.lower() {
        1.0
    } else if g > approx.upper() {
        0.0
    } else {
        0.5 - approx.mu * (g - approx.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pa_fbl_testkit as oracle;
    use proptest::prelude::*;

    fn budget(db: f64) -> LinkBudget {
        LinkBudget::from_db(db).unwrap()
    }

    #[test]
    fn db_round_trip() {
        for i in 0..=100 {
            let db = -20.0 + 0.6 * f64::from(i);
            let b = budget(db);
            assert!((b.snr_db() - db).abs() <= 1e-12 * db.abs().max(1.0));
            let back = LinkBudget::from_db(b.snr_db()).unwrap();
            assert!(((back.power() - b.power()) / b.power()).abs() < 1e-12);
        }
    }

    #[test]
    fn info_nats() {
        assert_eq!(CodeSpec::new(300, 2.0).unwrap().info_nats(), 600.0);
        assert!(CodeSpec::new(0, 1.0).is_err());
        assert!(CodeSpec::new(10, -1.0).is_err());
    }

    #[test]
    fn error_examples() {
        let b = budget(15.0);
        let code = CodeSpec::new(300, 2.0).unwrap();
        let alpha = 2f64.exp_m1() / b.power();
        assert_eq!(fbl_error(alpha, &b, &code), 0.5);
        assert_eq!(fbl_error(1.0, &b, &code.with_rate(0.0).unwrap()), 0.0);
        assert_eq!(fbl_error(0.0, &b, &code), 1.0);

        // Direct evaluation against an independent Gaussian tail.
        let p = b.power();
        let arg = (300f64).sqrt() * ((1.0 + p).ln() - 2.0) / (1.0 - (1.0 + p).powi(-2)).sqrt();
        let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let want = oracle::relative_simpson(phi, arg, arg + 40.0, 1e-13);
        let got = fbl_error(1.0, &b, &code);
        assert!(((got - want) / want).abs() < 1e-10, "got={got:e} want={want:e}");
    }

    #[test]
    fn large_block_length_approaches_step() {
        let b = budget(15.0);
        let code = CodeSpec::new(1_000_000, 1.5).unwrap();
        let alpha = 1.5f64.exp_m1() / b.power();
        for i in 0..=200 {
            let g = alpha * 3.0 * f64::from(i) / 200.0;
            if (g - alpha).abs() <= 0.05 * alpha {
                continue;
            }
            let step = if g < alpha { 1.0 } else { 0.0 };
            assert!((fbl_error(g, &b, &code) - step).abs() <= 1e-3, "g={g}");
        }
    }

    #[test]
    fn semilinear_examples() {
        let b = budget(15.0);
        let code = CodeSpec::new(300, 2.0).unwrap();
        let a = make_semilinear(&code, &b).unwrap();
        let p = b.power();
        assert!((a.alpha - 0.202_039_693_712_109).abs() < 1e-12);
        let mu = (300.0 * p * p / (2.0 * std::f64::consts::PI * (4f64.exp() - 1.0))).sqrt();
        assert!(((a.mu - mu) / mu).abs() < 1e-12 && (a.mu - 29.846_663_768).abs() < 1e-8);
        assert!(((a.alpha * b.power() + 1.0) - 2f64.exp()).abs() < 1e-12 * 2f64.exp());
        assert_eq!(semilinear_q(a.alpha, &a), 0.5);
        assert!(semilinear_q(a.upper(), &a).abs() < 1e-15);
        assert!(make_semilinear(&code.with_rate(0.0).unwrap(), &b).is_err());

        // μ = 1 by construction.
        let r: f64 = 0.7;
        let p = 3.0;
        let l = 2.0 * std::f64::consts::PI * (2.0 * r).exp_m1() / (p * p);
        let unit = semilinear_raw(p, l, r).unwrap();
        assert!((unit.mu - 1.0).abs() < 1e-12);
    }

    #[test]
    fn semilinear_area_matches_exact() {
        let b = budget(15.0);
        let code = CodeSpec::new(300, 2.0).unwrap();
        let a = make_semilinear(&code, &b).unwrap();
        let top = a.alpha + 3.0 / a.mu;
        let exact = oracle::adaptive_simpson(|g| fbl_error(g, &b, &code), 0.0, top, 1e-12);
        let approx = oracle::adaptive_simpson(|g| semilinear_q(g, &a), 0.0, top, 1e-12);
        assert!(
            (exact - approx).abs() < 5e-3 * top,
            "exact={exact} approx={approx} top={top}"
        );
    }

    #[test]
    fn semilinear_slope_matches_at_threshold() {
        let b = budget(15.0);
        let code = CodeSpec::new(300, 2.0).unwrap();
        let a = make_semilinear(&code, &b).unwrap();
        let h = 1e-6 * a.alpha;
        let slope = (fbl_error(a.alpha + h, &b, &code) - fbl_error(a.alpha - h, &b, &code)) / (2.0 * h);
        assert!(((slope + a.mu) / a.mu).abs() < 0.01);
    }

    proptest! {
        #[test]
        fn monotone_in_gain_and_rate(g in 1e-4f64..20.0, dg in 0.0f64..5.0, r in 0.01f64..6.0, dr in 0.0f64..2.0,
                                     db in -5.0f64..35.0, l in 10u64..5000) {
            let b = budget(db);
            let code = CodeSpec::new(l, r).unwrap();
            prop_assert!(fbl_error(g + dg, &b, &code) <= fbl_error(g, &b, &code));
            prop_assert!(fbl_error(g, &b, &code.with_rate(r + dr).unwrap()) >= fbl_error(g, &b, &code));
        }

        #[test]
        fn block_length_sharpens(g in 1e-3f64..20.0, r in 0.05f64..5.0, db in 0.0f64..30.0, l in 10u64..2000) {
            let b = budget(db);
            let short = CodeSpec::new(l, r).unwrap();
            let long = CodeSpec::new(2 * l, r).unwrap();
            let margin = (g * b.power()).ln_1p() - r;
            prop_assume!(margin.abs() > 1e-9);
            let (es, el) = (fbl_error(g, &b, &short), fbl_error(g, &b, &long));
            let (xs, xl) = (q_argument(g, b.power(), l as f64, r), q_argument(g, b.power(), 2.0 * l as f64, r));
            if margin > 0.0 {
                prop_assert!(xl > xs && el <= es);
            } else {
                prop_assert!(xl < xs && el >= es);
            }
        }

        #[test]
        fn error_is_a_probability(g in 0.0f64..100.0, r in 0.0f64..10.0, db in -10.0f64..40.0, l in 1u64..100_000) {
            let e = fbl_error(g, &budget(db), &CodeSpec::new(l, r).unwrap());
            prop_assert!((0.0..=1.0).contains(&e));
        }
    }
}
