//! Reference regimes: open-loop transmission without CSIT, and the genie
//! bound where the transmitter knows g exactly and targets a fixed error ε̂.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::fbl::{dispersion, semilinear_raw, LinkBudget};
use crate::optimize::brent_max;
use crate::quad::{integrate_with_breaks, QuadOptions};
use crate::rate_adapt::{marginal_error_pair, MIN_SEARCH_RATE};
use crate::specfun::{exp_integral_e1_scaled, gaussian_q, gaussian_q_inv, lambert_w0};

/// No-CSIT throughput at a fixed rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoCsitThroughput {
    /// R·(1 − E_g[ε(g)]) by quadrature.
    pub exact: f64,
    /// μR(e^{−α+1/2μ} − e^{−α−1/2μ}): the semi-linear surrogate integrated
    /// against e^{−x} in closed form.
    pub approx_linear: f64,
    /// The same with μ ≈ √(LP²/2π)e^{−R} and the second exponential dropped.
    /// Both exponentials are close to e^{−α}, so this overstates the
    /// throughput by roughly a factor μ; it is kept for comparison only.
    pub approx_final: f64,
}

pub fn no_csit_throughput(budget: &LinkBudget, block_length: u64, rate: f64) -> Result<NoCsitThroughput> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::InvalidParameter {
            name: "rate",
            value: rate,
            reason: "must be finite and positive",
        });
    }
    let (_, ok) = marginal_error_pair(budget, block_length, rate)?;
    Ok(NoCsitThroughput {
        exact: rate * ok,
        approx_linear: no_csit_throughput_linear(budget, block_length, rate)?,
        approx_final: no_csit_throughput_approx(budget, block_length, rate),
    })
}

/// R·(1 − ε̄) with the semi-linear surrogate integrated against e^{−x}:
/// μR(e^{−α+1/2μ} − e^{−α−1/2μ}) when the window lies above zero, and
/// R(½ − μα + μ(1 − e^{−α−1/2μ})) when its lower edge is clamped at zero.
pub fn no_csit_throughput_linear(budget: &LinkBudget, block_length: u64, rate: f64) -> Result<f64> {
    let a = semilinear_raw(budget.power(), block_length as f64, rate)?;
    let hi = a.upper();
    let success = if a.lower() > 0.0 {
        2.0 * a.mu * (-a.alpha).exp() * (0.5 / a.mu).sinh()
    } else {
        0.5 - a.mu * a.alpha - a.mu * (-hi).exp_m1()
    };
    Ok(rate * success.clamp(0.0, 1.0))
}

/// √(LP²/2π)·e^{−R−(e^R−1)/P}·R·e^{√(e^{2R}π/(2LP²))}.
pub fn no_csit_throughput_approx(budget: &LinkBudget, block_length: u64, rate: f64) -> f64 {
    let p = budget.power();
    let l = block_length as f64;
    let scale = (l * p * p / (2.0 * std::f64::consts::PI)).sqrt();
    let exponent = -rate - rate.exp_m1() / p + ((2.0 * rate).exp() * std::f64::consts::PI / (2.0 * l * p * p)).sqrt();
    scale * rate * exponent.exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptPath {
    ClosedForm,
    Numeric,
}

impl OptPath {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::ClosedForm => "closed-form",
            Self::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoCsitRateOpt {
    pub rate: f64,
    /// Exact throughput at `rate`.
    pub throughput: f64,
    pub path: OptPath,
    /// P / (1 − √(L/2π)), the Lambert-W argument of the closed form.
    pub lambert_argument: f64,
}

/// Optimal open-loop rate. The closed form W₀(P/(1−√(L/2π))) is used only
/// when its argument is at least −1/e (L < 2π in practice); otherwise the
/// exact throughput is maximised over [0.01, ln(1+10P)].
pub fn no_csit_rate_opt(budget: &LinkBudget, block_length: u64) -> Result<NoCsitRateOpt> {
    let p = budget.power();
    let l = block_length as f64;
    let lambert_argument = p / (1.0 - (l / (2.0 * std::f64::consts::PI)).sqrt());
    if lambert_argument.is_finite() && lambert_argument >= -1.0 / std::f64::consts::E {
        let rate = lambert_w0(lambert_argument)?;
        if rate > 0.0 {
            let throughput = no_csit_throughput(budget, block_length, rate)?.exact;
            return Ok(NoCsitRateOpt {
                rate,
                throughput,
                path: OptPath::ClosedForm,
                lambert_argument,
            });
        }
    }
    let mut failure = None;
    let best = brent_max(
        |r| match no_csit_throughput(budget, block_length, r) {
            Ok(t) => t.exact,
            Err(e) => {
                failure = Some(e);
                f64::NEG_INFINITY
            }
        },
        MIN_SEARCH_RATE,
        (10.0 * p).ln_1p(),
        1e-10,
        1e-12,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(NoCsitRateOpt {
        rate: best.x,
        throughput: best.value,
        path: OptPath::Numeric,
        lambert_argument,
    })
}

/// Instantaneous genie rate hitting error ε̂ exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenieRate {
    pub rate: f64,
    /// True when the unclamped rate was negative and was set to zero.
    pub clamped: bool,
}

/// R_ins = ln(1+gP) − Q⁻¹(ε̂)·√(1−(1+gP)⁻²)/√L, clamped at zero.
pub fn genie_rate_instant(g: f64, budget: &LinkBudget, block_length: u64, eps_hat: f64) -> Result<GenieRate> {
    if !(g.is_finite() && g >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "g",
            value: g,
            reason: "must be finite and non-negative",
        });
    }
    check_eps(eps_hat)?;
    let gp = g * budget.power();
    let raw = gp.ln_1p() - gaussian_q_inv(eps_hat)? * dispersion(gp).sqrt() / (block_length as f64).sqrt();
    Ok(if raw < 0.0 {
        GenieRate {
            rate: 0.0,
            clamped: true,
        }
    } else {
        GenieRate {
            rate: raw,
            clamped: false,
        }
    })
}

fn check_eps(eps_hat: f64) -> Result<()> {
    if eps_hat > 0.0 && eps_hat < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "eps_hat",
            value: eps_hat,
            reason: "must lie strictly inside (0, 1)",
        })
    }
}

/// R^{L→∞} = E[ln(1+gP)] = e^{1/P}E₁(1/P) for g ~ Exp(1).
pub fn genie_r_infinity(budget: &LinkBudget) -> Result<f64> {
    exp_integral_e1_scaled(1.0 / budget.power())
}

/// ζ = E[√(1 − (1+gP)⁻²)] for g ~ Exp(1), by adaptive quadrature.
pub fn genie_zeta(budget: &LinkBudget) -> Result<f64> {
    let p = budget.power();
    let mut points = vec![0.0];
    // The integrand rises on the scale 1/P.
    for k in [0.1, 1.0, 10.0] {
        let x = k / p;
        if x < 1.0 {
            points.push(x);
        }
    }
    points.extend([1.0, 5.0, 20.0, 60.0]);
    let opts = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_intervals: 2000,
    };
    let r = integrate_with_breaks(|x| (-x).exp() * dispersion(p * x).sqrt(), &points, &opts)?;
    // Tail beyond 60: integrand ≤ e^{−x}.
    Ok(r.value + (-60.0f64).exp() * dispersion(60.0 * p).sqrt())
}

/// R^{L→∞} and ζ for one budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenieTerms {
    pub r_infinity: f64,
    pub zeta: f64,
}

impl GenieTerms {
    pub fn compute(budget: &LinkBudget) -> Result<Self> {
        Ok(Self {
            r_infinity: genie_r_infinity(budget)?,
            zeta: genie_zeta(budget)?,
        })
    }

    /// Process-wide memoised [`compute`](Self::compute), keyed by the exact power value.
    pub fn cached(budget: &LinkBudget) -> Result<Self> {
        static CACHE: OnceLock<Mutex<HashMap<u64, GenieTerms>>> = OnceLock::new();
        let key = budget.power().to_bits();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().expect("genie cache poisoned").get(&key) {
            return Ok(*t);
        }
        let terms = Self::compute(budget)?;
        cache.lock().expect("genie cache poisoned").insert(key, terms);
        Ok(terms)
    }

    /// (R^{L→∞} − Q⁻¹(ε̂)ζ/√L)(1 − ε̂).
    pub fn throughput(&self, block_length: u64, eps_hat: f64) -> Result<f64> {
        check_eps(eps_hat)?;
        let x = gaussian_q_inv(eps_hat)?;
        Ok(self.objective(block_length, x))
    }

    // Throughput as a function of x = Q⁻¹(ε̂).
    fn objective(&self, block_length: u64, x: f64) -> f64 {
        (self.r_infinity - x * self.zeta / (block_length as f64).sqrt()) * (1.0 - gaussian_q(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenieEpsOpt {
    /// Q(√(−2 ln(√(2π)ζ/(√L R^{L→∞})))) when the logarithm is negative.
    pub closed_form: Option<f64>,
    /// Numerical maximiser of the exact objective.
    pub numeric: f64,
}

impl GenieEpsOpt {
    pub fn preferred(&self) -> (f64, OptPath) {
        match self.closed_form {
            Some(e) => (e, OptPath::ClosedForm),
            None => (self.numeric, OptPath::Numeric),
        }
    }
}

pub fn genie_eps_opt(budget: &LinkBudget, block_length: u64) -> Result<GenieEpsOpt> {
    genie_eps_opt_with(&GenieTerms::cached(budget)?, block_length)
}

pub fn genie_eps_opt_with(terms: &GenieTerms, block_length: u64) -> Result<GenieEpsOpt> {
    let sqrt_l = (block_length as f64).sqrt();
    let ratio = (2.0 * std::f64::consts::PI).sqrt() * terms.zeta / (sqrt_l * terms.r_infinity);
    let closed_form = (ratio > 0.0 && ratio < 1.0).then(|| gaussian_q((-2.0 * ratio.ln()).sqrt()));
    // Beyond x_max the rate term is negative.
    let x_max = (sqrt_l * terms.r_infinity / terms.zeta).min(40.0);
    let best = brent_max(|x| terms.objective(block_length, x), -3.0, x_max, 1e-12, 1e-14);
    Ok(GenieEpsOpt {
        closed_form: closed_form.filter(|e| *e > 0.0),
        numeric: gaussian_q(best.x),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenieResult {
    pub eps_hat: f64,
    pub r_infinity: f64,
    pub zeta: f64,
    pub throughput: f64,
    pub path: OptPath,
    pub numeric_eps_hat: f64,
    pub numeric_throughput: f64,
}

pub fn genie_throughput(budget: &LinkBudget, block_length: u64) -> Result<GenieResult> {
    let terms = GenieTerms::cached(budget)?;
    let opt = genie_eps_opt_with(&terms, block_length)?;
    let (eps_hat, path) = opt.preferred();
    Ok(GenieResult {
        eps_hat,
        r_infinity: terms.r_infinity,
        zeta: terms.zeta,
        throughput: terms.throughput(block_length, eps_hat)?,
        path,
        numeric_eps_hat: opt.numeric,
        numeric_throughput: terms.throughput(block_length, opt.numeric)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fbl::{fbl_error, CodeSpec};
    use crate::rate_adapt::{average_throughput, RatePolicy};
    use pa_fbl_testkit as oracle;

    fn budget(db: f64) -> LinkBudget {
        LinkBudget::from_db(db).unwrap()
    }

    #[test]
    fn no_csit_limits_and_gap() {
        let b = budget(15.0);
        assert!(no_csit_throughput(&b, 300, 1e-6).unwrap().exact < 1e-5);
        assert!(no_csit_throughput(&b, 300, 12.0).unwrap().exact < 1e-12);
        assert!(no_csit_throughput(&b, 300, 0.0).is_err());
        let t = no_csit_throughput(&b, 300, 1.0).unwrap();
        let exact = oracle::adaptive_simpson(
            |x| (-x).exp() * (1.0 - fbl_error(x, &b, &CodeSpec::new(300, 1.0).unwrap())),
            0.0,
            60.0,
            1e-12,
        );
        assert!((t.exact - exact).abs() < 1e-9);
        assert!(
            ((t.approx_linear - t.exact) / t.exact).abs() <= 0.15,
            "{} vs {}",
            t.approx_linear,
            t.exact
        );
        // Dropping e^{−α−1/2μ} removes almost all of the cancellation.
        assert!(t.approx_final > 10.0 * t.exact);
    }

    #[test]
    fn no_csit_optimum() {
        let b = budget(15.0);
        let opt = no_csit_rate_opt(&b, 300).unwrap();
        assert_eq!(opt.path, OptPath::Numeric);
        assert!(opt.lambert_argument < -1.0 / std::f64::consts::E);
        let f = |r: f64| no_csit_throughput(&b, 300, r).unwrap().exact;
        let (grid, _) = oracle::grid_argmax(f, 0.01, (10.0 * b.power()).ln_1p(), 2000);
        assert!((opt.rate - grid).abs() < 1e-3);
        assert!(opt.throughput >= f(opt.rate - 0.2) && opt.throughput >= f(opt.rate + 0.2));

        // L < 2π puts the argument on the real branch.
        let short = no_csit_rate_opt(&b, 4).unwrap();
        assert_eq!(short.path, OptPath::ClosedForm);
    }

    #[test]
    fn no_csit_unimodal() {
        let b = budget(15.0);
        let values: Vec<f64> = (0..100)
            .map(|i| 0.05 + 0.08 * f64::from(i))
            .map(|r| no_csit_throughput(&b, 300, r).unwrap().exact)
            .collect();
        assert_eq!(oracle::count_local_maxima(&values), 1);
    }

    #[test]
    fn genie_rate_examples() {
        let b = budget(15.0);
        let g = 0.8;
        let cap = (g * b.power()).ln_1p();
        assert!((genie_rate_instant(g, &b, 300, 0.5).unwrap().rate - cap).abs() < 1e-15);
        assert!((genie_rate_instant(g, &b, 100_000_000, 1e-3).unwrap().rate - cap).abs() < 1e-3);
        assert!(genie_rate_instant(1e-6, &b, 300, 1e-3).unwrap().clamped);
        for &eps in &[1e-4, 1e-3, 0.01, 0.1, 0.3] {
            for &g in &[0.05, 0.5, 2.0, 8.0] {
                let r = genie_rate_instant(g, &b, 300, eps).unwrap();
                assert!(!r.clamped);
                let back = fbl_error(g, &b, &CodeSpec::new(300, r.rate).unwrap());
                assert!((back - eps).abs() < 1e-9, "eps={eps} g={g} back={back}");
            }
        }
    }

    #[test]
    fn r_infinity_matches_quadrature() {
        let b = budget(15.0);
        let p = b.power();
        let want = oracle::adaptive_simpson(|x| (-x).exp() * (p * x).ln_1p(), 0.0, 60.0, 1e-12);
        assert!((genie_r_infinity(&b).unwrap() - want).abs() < 1e-8);
        let small = genie_r_infinity(&LinkBudget::new(1e-6).unwrap()).unwrap();
        assert!(small < 2e-6);
        let r: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&p| genie_r_infinity(&LinkBudget::new(p).unwrap()).unwrap())
            .collect();
        assert!(r[0] < r[1] && r[1] < r[2]);
    }

    #[test]
    fn zeta_examples() {
        let b = budget(15.0);
        let p = b.power();
        let z = genie_zeta(&b).unwrap();
        let want = oracle::adaptive_simpson(|x| (-x).exp() * (1.0 - (1.0 + p * x).powi(-2)).sqrt(), 0.0, 60.0, 1e-12);
        assert!((z - want).abs() < 1e-8 && z > 0.0 && z < 1.0);
        assert!(genie_zeta(&LinkBudget::new(1e9).unwrap()).unwrap() > 1.0 - 1e-3);
        assert!(genie_zeta(&LinkBudget::new(1e-9).unwrap()).unwrap() < 1e-3);
    }

    #[test]
    fn eps_opt_examples() {
        let b = budget(15.0);
        let opt = genie_eps_opt(&b, 300).unwrap();
        let cf = opt.closed_form.unwrap();
        assert!(cf > 0.0 && cf < 0.5);
        let terms = GenieTerms::cached(&b).unwrap();
        // 10⁴-point scan of the exact objective in ε̂ on a log grid.
        let mut best = (0.0, f64::MIN);
        for i in 0..10_000 {
            let eps = 10f64.powf(-8.0 + 7.7 * f64::from(i) / 9999.0);
            let v = terms.throughput(300, eps).unwrap();
            if v > best.1 {
                best = (eps, v);
            }
        }
        assert!((best.0 - cf).abs() <= 0.3 * cf, "scan={} cf={cf}", best.0);
        assert!((opt.numeric - best.0).abs() <= 0.01 * best.0);

        let e: Vec<f64> = [100, 300, 1000]
            .iter()
            .map(|&l| genie_eps_opt(&b, l).unwrap().closed_form.unwrap())
            .collect();
        assert!(e[0] > e[1] && e[1] > e[2]);
    }

    #[test]
    fn genie_large_length_limit() {
        let b = budget(15.0);
        let g = genie_throughput(&b, 100_000_000).unwrap();
        assert!(((g.throughput - g.r_infinity) / g.r_infinity).abs() < 1e-3);
    }

    #[test]
    fn genie_assembly_and_dominance() {
        let b = budget(15.0);
        let g = genie_throughput(&b, 300).unwrap();
        let x = gaussian_q_inv(g.eps_hat).unwrap();
        let assembled = (g.r_infinity - x * g.zeta / 300f64.sqrt()) * (1.0 - g.eps_hat);
        assert!(((g.throughput - assembled) / assembled).abs() < 1e-12);
        assert!(g.numeric_throughput >= g.throughput - 1e-12);
        for sigma in [0.3, 0.5, 0.8] {
            let pa = average_throughput(sigma, &b, 300, RatePolicy::NumericRefined).unwrap();
            assert!(g.throughput >= pa, "sigma={sigma}: genie {} < pa {pa}", g.throughput);
        }
    }

    #[test]
    fn genie_fixture() {
        let g = genie_throughput(&budget(15.0), 300).unwrap();
        println!("{g:?}");
        assert!((g.throughput - GENIE_15DB_300).abs() < 1e-9, "{}", g.throughput);
    }

    const GENIE_15DB_300: f64 = 2.841_889_329_055_153;
}
