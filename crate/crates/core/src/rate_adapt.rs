//! Rate adaptation from the predictor-antenna gain ĝ.
//!
//! For a given ĝ the receive-antenna gain g follows
//! [`ConditionalGainDist`], and the block error probability at rate R is
//! E_{g|ĝ}[ε(g)]. Three evaluations are offered:
//!
//! * [`Method::Theorem1`]: the semi-linear surrogate integrated exactly
//!   against the conditional law (Poisson–gamma series for the window term);
//! * [`Method::Theorem2`]: the midpoint collapse ε ≈ F_{g|ĝ}(α);
//! * [`Method::Numeric`]: adaptive quadrature of the exact expectation.
//!
//! Averages over ĝ ~ Exp(1) use Gauss–Laguerre rules.

use std::cell::Cell;

use rayon::prelude::*;

use crate::channel::ConditionalGainDist;
use crate::error::{Error, Result};
use crate::fbl::{fbl_error_raw, q_argument, semilinear_raw, LinkBudget, SemiLinearApprox};
use crate::optimize::brent_max;
use crate::quad::{integrate_with_breaks, GaussLaguerre, QuadOptions};
use crate::specfun::{bocus_i, bocus_j, gamma_p_q, gaussian_q, lambert_w0_of_exp};

/// Series length the closed form is usually quoted with.
pub const DEFAULT_SERIES_TERMS: usize = 30;

/// Lower end of every rate search, npcu.
pub const MIN_SEARCH_RATE: f64 = 0.01;

/// √ε: the position of a smooth maximum is not resolvable more finely.
const RATE_REL_TOL: f64 = 1.5e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaOperatingPoint {
    ghat: f64,
    sigma: f64,
    budget: LinkBudget,
    block_length: u64,
}

impl PaOperatingPoint {
    pub fn new(ghat: f64, sigma: f64, budget: LinkBudget, block_length: u64) -> Result<Self> {
        if !(ghat.is_finite() && ghat >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "ghat",
                value: ghat,
                reason: "must be finite and non-negative",
            });
        }
        check_sigma(sigma)?;
        if block_length == 0 {
            return Err(Error::InvalidParameter {
                name: "block_length",
                value: 0.0,
                reason: "must be at least one channel use",
            });
        }
        Ok(Self {
            ghat,
            sigma,
            budget,
            block_length,
        })
    }

    pub fn ghat(&self) -> f64 {
        self.ghat
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn budget(&self) -> LinkBudget {
        self.budget
    }

    pub fn block_length(&self) -> u64 {
        self.block_length
    }

    pub fn dist(&self) -> ConditionalGainDist {
        ConditionalGainDist::new(self.ghat, self.sigma).expect("validated at construction")
    }

    pub fn with_ghat(self, ghat: f64) -> Result<Self> {
        Self::new(ghat, self.sigma, self.budget, self.block_length)
    }

    fn power(&self) -> f64 {
        self.budget.power()
    }

    fn semilinear(&self, rate: f64) -> Result<SemiLinearApprox> {
        semilinear_raw(self.power(), self.block_length as f64, rate)
    }

    fn alpha(&self, rate: f64) -> f64 {
        rate.exp_m1() / self.power()
    }

    /// Upper end of every rate search: ln(1+ĝP) + 2.
    pub fn max_search_rate(&self) -> f64 {
        (self.ghat * self.power()).ln_1p() + 2.0
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            reason: "must lie strictly inside (0, 1)",
        })
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if rate.is_finite() && rate >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "rate",
            value: rate,
            reason: "must be finite and non-negative",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Theorem1,
    Theorem2,
    Numeric,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Theorem1 => "theorem1",
            Self::Theorem2 => "theorem2",
            Self::Numeric => "numeric",
        }
    }
}

/// Rate, error probability and throughput = rate·(1 − error_prob) at one ĝ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalResult {
    pub rate: f64,
    pub error_prob: f64,
    pub throughput: f64,
    pub method: Method,
}

impl ConditionalResult {
    fn new(rate: f64, error_prob: f64, method: Method) -> Self {
        Self {
            rate,
            error_prob,
            throughput: rate * (1.0 - error_prob),
            method,
        }
    }
}

/// How many Poisson terms the first-moment series keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesTerms {
    Fixed(usize),
    /// max(30, ⌈λ + 10√λ + 10⌉) for Poisson mean λ, which leaves a
    /// truncated mass far below double precision.
    Auto,
}

impl SeriesTerms {
    pub fn resolve(self, lambda: f64) -> usize {
        match self {
            Self::Fixed(n) => n,
            Self::Auto => {
                let n = (lambda + 10.0 * lambda.sqrt() + 10.0).ceil();
                (n as usize).max(DEFAULT_SERIES_TERMS)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Estimate {
    pub epsilon: f64,
    /// Highest series index used.
    pub terms: usize,
    /// Poisson mass of the dropped indices, P(i > N).
    pub truncated_mass: f64,
}

impl Theorem1Estimate {
    /// False when the dropped Poisson mass exceeds 1e-10, i.e. the series
    /// was cut inside the bulk of the mixture.
    pub fn converged(&self) -> bool {
        self.truncated_mass <= 1e-10
    }
}

/// Error probability from the semi-linear surrogate integrated against the
/// conditional gain law:
///
/// ```text
/// ε ≈ F(a) + (½ + μα)(F(b) − F(a)) − μ∫ₐᵇ x f(x) dx,   a = max(0, α − 1/2μ), b = α + 1/2μ
/// ∫ₐᵇ x f(x) dx = σ² Σᵢ Pois(i; λ)(i+1)[P(i+2, b/σ²) − P(i+2, a/σ²)]
/// ```
pub fn epsilon_theorem1(pt: &PaOperatingPoint, rate: f64, terms: SeriesTerms) -> Result<Theorem1Estimate> {
    check_rate(rate)?;
    if rate == 0.0 {
        return Err(Error::Domain {
            func: "epsilon_theorem1",
            arg: rate,
            reason: "semi-linear slope diverges at zero rate",
        });
    }
    let approx = pt.semilinear(rate)?;
    let dist = pt.dist();
    let s2 = pt.sigma * pt.sigma;
    let lo = approx.lower().max(0.0);
    let hi = approx.upper();
    let (f_lo, c_lo) = dist.cdf_pair(lo)?;
    let (f_hi, c_hi) = dist.cdf_pair(hi)?;
    let mass = if f_hi < 0.5 { f_hi - f_lo } else { c_lo - c_hi };
    let lambda = dist.noncentrality();
    let n = terms.resolve(lambda);
    let first_moment = s2 * window_moment_series(lambda, lo / s2, hi / s2, n)?;
    let eps = f_lo + (0.5 + approx.mu * approx.alpha) * mass - approx.mu * first_moment;
    let truncated_mass = if lambda == 0.0 {
        0.0
    } else {
        gamma_p_q((n + 1) as f64, lambda)?.0
    };
    Ok(Theorem1Estimate {
        epsilon: eps.clamp(0.0, 1.0),
        terms: n,
        truncated_mass,
    })
}

// Σ_{i=0}^{n} Pois(i; λ)(i+1)·[P(i+2, b) − P(i+2, a)], 0 ≤ a ≤ b.
fn window_moment_series(lambda: f64, a: f64, b: f64, n: usize) -> Result<f64> {
    let (pa, qa) = gamma_p_q(2.0, a)?;
    let (pb, qb) = gamma_p_q(2.0, b)?;
    // D_k = P(k, b) − P(k, a), taken from the side that avoids cancellation.
    let mut diff = if pb < 0.5 { pb - pa } else { qa - qb };
    let ln_a = a.ln();
    let ln_b = b.ln();
    let ln_lambda = lambda.ln();
    // ln k! for k = i + 2, and ln i!.
    let mut ln_fact_k = std::f64::consts::LN_2;
    let mut ln_fact_i = 0.0;
    let mut sum = 0.0;
    for i in 0..=n {
        let k = i + 2;
        let weight = if lambda == 0.0 {
            if i == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            (i as f64 * ln_lambda - lambda - ln_fact_i).exp()
        };
        sum += weight * (i + 1) as f64 * diff.max(0.0);
        if lambda == 0.0 {
            break;
        }
        // P(k+1, x) = P(k, x) − x^k e^{−x} / k!
        let kf = k as f64;
        let term = |ln_x: f64, x: f64| {
            if x == 0.0 {
                0.0
            } else {
                (kf * ln_x - x - ln_fact_k).exp()
            }
        };
        diff -= term(ln_b, b) - term(ln_a, a);
        ln_fact_k += (kf + 1.0).ln();
        ln_fact_i += ((i + 1) as f64).ln();
    }
    if !sum.is_finite() {
        return Err(Error::Convergence {
            func: "epsilon_theorem1",
            terms: n,
        });
    }
    Ok(sum)
}

/// ε ≈ F_{g|ĝ}(α), α = (e^R − 1)/P.
pub fn epsilon_theorem2(pt: &PaOperatingPoint, rate: f64) -> Result<f64> {
    check_rate(rate)?;
    pt.dist().cdf(pt.alpha(rate))
}

/// E_{g|ĝ}[ε(g)] by adaptive Gauss–Kronrod quadrature, absolute tolerance 1e-9.
pub fn conditional_error_numeric(pt: &PaOperatingPoint, rate: f64) -> Result<f64> {
    check_rate(rate)?;
    if rate == 0.0 {
        return Ok(0.0);
    }
    let dist = pt.dist();
    let sigma = pt.sigma;
    let amp = ((1.0 - sigma * sigma) * pt.ghat).sqrt();
    // |h| is Rician with amplitude amp and per-component spread σ/√2;
    // beyond amp + 7σ the density mass is below 1e-21.
    let upper = (amp + 7.0 * sigma).powi(2);
    let approx = pt.semilinear(rate)?;
    let mut points = vec![0.0, upper, dist.mean()];
    for k in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        points.push(approx.alpha + k / approx.mu);
    }
    for k in [-2.0, 0.0, 2.0] {
        let r = amp + k * sigma;
        if r > 0.0 {
            points.push(r * r);
        }
    }
    points.retain(|&x| (0.0..=upper).contains(&x));
    points.sort_by(f64::total_cmp);
    points.dedup();

    let power = pt.power();
    let length = pt.block_length as f64;
    let failure = Cell::new(None);
    let integrand = |x: f64| match dist.pdf(x) {
        Ok(density) => density * fbl_error_raw(x, power, length, rate),
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let opts = QuadOptions {
        abs_tol: 1e-9,
        rel_tol: 0.0,
        max_intervals: 4000,
    };
    let result = integrate_with_breaks(integrand, &points, &opts)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(result.value.clamp(0.0, 1.0))
}

/// Parameters of the exponential-of-power Marcum approximation in the rate
/// domain: Q₁ ≈ exp(−ω (e^R − 1)^ν).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BocusRateParams {
    pub omega: f64,
    pub nu: f64,
    /// ln ω, finite even when ω itself under- or overflows.
    pub ln_omega: f64,
    /// The Marcum first argument s = √(2(1−σ²)ĝ/σ²).
    pub s: f64,
}

pub fn bocus_rate_params(sigma: f64, ghat: f64, budget: &LinkBudget) -> Result<BocusRateParams> {
    check_sigma(sigma)?;
    let dist = ConditionalGainDist::new(ghat, sigma)?;
    let s = (2.0 * dist.noncentrality()).sqrt();
    let nu = 0.5 * bocus_j(s);
    let ln_omega = bocus_i(s) + nu * (2.0 / (budget.power() * sigma * sigma)).ln();
    Ok(BocusRateParams {
        omega: ln_omega.exp(),
        nu,
        ln_omega,
        s,
    })
}

impl BocusRateParams {
    /// R·exp(−ω e^{νR}), the approximate throughput with e^R − 1 ≈ e^R.
    pub fn approx_throughput(&self, rate: f64) -> f64 {
        rate * (-(self.ln_omega + self.nu * rate).exp()).exp()
    }

    /// W₀(1/ω)/ν, or `None` when ν ≤ 0 or the result is not finite.
    pub fn closed_form_rate(&self) -> Option<f64> {
        if !(self.nu > 0.0) {
            return None;
        }
        let w = lambert_w0_of_exp(-self.ln_omega).ok()?;
        let r = w / self.nu;
        (r.is_finite() && r > 0.0).then_some(r)
    }
}

/// Throughput R·(1 − F_{g|ĝ}(α)) with the Theorem-2 error.
pub fn throughput_given_ghat(pt: &PaOperatingPoint, rate: f64) -> Result<ConditionalResult> {
    let eps = epsilon_theorem2(pt, rate)?;
    Ok(ConditionalResult::new(rate, eps, Method::Theorem2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateOpt {
    /// W₀(1/ω)/ν, absent when the approximation has no valid root.
    pub closed_form: Option<f64>,
    pub closed_form_throughput: Option<f64>,
    /// Numerical maximiser of the Theorem-2 throughput, never worse than the
    /// closed form.
    pub refined: f64,
    pub refined_throughput: f64,
}

impl RateOpt {
    /// The closed form when it exists, the refined rate otherwise.
    pub fn preferred_closed_form(&self) -> (f64, bool) {
        match self.closed_form {
            Some(r) => (r, true),
            None => (self.refined, false),
        }
    }
}

fn maximize_rate<F>(pt: &PaOperatingPoint, mut objective: F) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let failure = Cell::new(None);
    let best = brent_max(
        |r| match objective(r) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                f64::NEG_INFINITY
            }
        },
        MIN_SEARCH_RATE,
        pt.max_search_rate(),
        RATE_REL_TOL,
        1e-10,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok((best.x, best.value))
}

pub fn rate_opt_given_ghat(pt: &PaOperatingPoint) -> Result<RateOpt> {
    let params = bocus_rate_params(pt.sigma, pt.ghat, &pt.budget)?;
    let closed_form = params.closed_form_rate();
    let closed_form_throughput = closed_form
        .map(|r| throughput_given_ghat(pt, r).map(|c| c.throughput))
        .transpose()?;
    let (mut refined, mut refined_throughput) =
        maximize_rate(pt, |r| throughput_given_ghat(pt, r).map(|c| c.throughput))?;
    if let (Some(r), Some(t)) = (closed_form, closed_form_throughput) {
        if t > refined_throughput {
            refined = r;
            refined_throughput = t;
        }
    }
    Ok(RateOpt {
        closed_form,
        closed_form_throughput,
        refined,
        refined_throughput,
    })
}

/// Maximiser of R·(1 − ε_Theorem1(R)).
pub fn rate_opt_theorem1(pt: &PaOperatingPoint) -> Result<(f64, Theorem1Estimate)> {
    let (rate, _) = maximize_rate(pt, |r| {
        epsilon_theorem1(pt, r, SeriesTerms::Auto).map(|e| r * (1.0 - e.epsilon))
    })?;
    Ok((rate, epsilon_theorem1(pt, rate, SeriesTerms::Auto)?))
}

/// How the rate is chosen for each ĝ and which error expression scores it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatePolicy {
    /// Maximise the Theorem-1 throughput; score with Theorem 1.
    Theorem1,
    /// Closed-form W₀(1/ω)/ν rate (refined rate where it is undefined);
    /// score with Theorem 2.
    Theorem2ClosedForm,
    /// Refined Theorem-2 rate; score with the exact expectation.
    NumericRefined,
    /// The same rate for every ĝ; score with the exact expectation.
    Fixed(f64),
}

impl RatePolicy {
    pub fn method(&self) -> Method {
        match self {
            Self::Theorem1 => Method::Theorem1,
            Self::Theorem2ClosedForm => Method::Theorem2,
            Self::NumericRefined | Self::Fixed(_) => Method::Numeric,
        }
    }

    /// Rate for one ĝ under this policy.
    pub fn rate(&self, pt: &PaOperatingPoint) -> Result<f64> {
        match *self {
            Self::Theorem1 => Ok(rate_opt_theorem1(pt)?.0),
            Self::Theorem2ClosedForm => match bocus_rate_params(pt.sigma, pt.ghat, &pt.budget)?.closed_form_rate() {
                Some(r) => Ok(r),
                None => Ok(rate_opt_given_ghat(pt)?.refined),
            },
            Self::NumericRefined => Ok(rate_opt_given_ghat(pt)?.refined),
            Self::Fixed(r) => {
                check_rate(r)?;
                Ok(r)
            }
        }
    }
}

/// Rate and score for one ĝ under `policy`.
pub fn adapted_result(pt: &PaOperatingPoint, policy: RatePolicy) -> Result<ConditionalResult> {
    let method = policy.method();
    match policy {
        RatePolicy::Theorem1 => {
            let (rate, est) = rate_opt_theorem1(pt)?;
            Ok(ConditionalResult::new(rate, est.epsilon, method))
        }
        _ => {
            let rate = policy.rate(pt)?;
            let eps = conditional_error(pt, rate, method)?;
            Ok(ConditionalResult::new(rate, eps, method))
        }
    }
}

/// ε at a given rate with the chosen expression. Zero rate gives zero error.
pub fn conditional_error(pt: &PaOperatingPoint, rate: f64, method: Method) -> Result<f64> {
    check_rate(rate)?;
    if rate == 0.0 {
        return Ok(0.0);
    }
    match method {
        Method::Theorem1 => Ok(epsilon_theorem1(pt, rate, SeriesTerms::Auto)?.epsilon),
        Method::Theorem2 => epsilon_theorem2(pt, rate),
        Method::Numeric => conditional_error_numeric(pt, rate),
    }
}

/// Averages over ĝ ~ Exp(1) of the adapted rate, error and throughput.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveAverage {
    pub throughput: f64,
    pub error_prob: f64,
    pub mean_rate: f64,
    pub method: Method,
}

pub fn average_adaptive(
    sigma: f64,
    budget: &LinkBudget,
    block_length: u64,
    policy: RatePolicy,
    rule: &GaussLaguerre,
) -> Result<AdaptiveAverage> {
    let base = PaOperatingPoint::new(0.0, sigma, *budget, block_length)?;
    let nodes: Vec<(f64, f64)> = rule.significant().collect();
    let per_node: Vec<Result<ConditionalResult>> = nodes
        .par_iter()
        .map(|&(ghat, _)| adapted_result(&base.with_ghat(ghat)?, policy))
        .collect();
    let mut out = AdaptiveAverage {
        throughput: 0.0,
        error_prob: 0.0,
        mean_rate: 0.0,
        method: policy.method(),
    };
    for (&(_, w), res) in nodes.iter().zip(per_node) {
        let res = res?;
        out.throughput += w * res.throughput;
        out.error_prob += w * res.error_prob;
        out.mean_rate += w * res.rate;
    }
    out.error_prob = out.error_prob.clamp(0.0, 1.0);
    Ok(out)
}

/// E_ĝ[R(ĝ)(1 − ε(ĝ))] with the 64-node rule.
pub fn average_throughput(sigma: f64, budget: &LinkBudget, block_length: u64, policy: RatePolicy) -> Result<f64> {
    Ok(average_adaptive(sigma, budget, block_length, policy, GaussLaguerre::standard())?.throughput)
}

/// E_ĝ[ε(ĝ, R(ĝ))] with the 64-node rule.
pub fn average_error_adaptive(sigma: f64, budget: &LinkBudget, block_length: u64, policy: RatePolicy) -> Result<f64> {
    Ok(average_adaptive(sigma, budget, block_length, policy, GaussLaguerre::standard())?.error_prob)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedRatePerformance {
    pub throughput: f64,
    pub error_prob: f64,
    pub method: Method,
}

/// Average error and throughput R(1 − ε̄) without rate adaptation.
///
/// `Theorem1`/`Theorem2` average the conditional surrogate over ĝ with the
/// 64-node rule. `Numeric` integrates the exact error against the marginal
/// law of g, which is Exp(1) for every σ.
pub fn fixed_rate_performance(
    sigma: f64,
    budget: &LinkBudget,
    block_length: u64,
    rate: f64,
    method: Method,
) -> Result<FixedRatePerformance> {
    check_rate(rate)?;
    let (eps, ok) = if rate == 0.0 {
        (0.0, 1.0)
    } else {
        match method {
            Method::Numeric => marginal_error_pair(budget, block_length, rate)?,
            Method::Theorem2 => {
                let base = PaOperatingPoint::new(0.0, sigma, *budget, block_length)?;
                let alpha = base.alpha(rate);
                let (mut eps, mut ok) = (0.0, 0.0);
                for (ghat, w) in GaussLaguerre::standard().significant() {
                    let (f, c) = base.with_ghat(ghat)?.dist().cdf_pair(alpha)?;
                    eps += w * f;
                    ok += w * c;
                }
                (eps, ok)
            }
            Method::Theorem1 => {
                let base = PaOperatingPoint::new(0.0, sigma, *budget, block_length)?;
                let eps = GaussLaguerre::standard()
                    .try_expect_bounded(|ghat| conditional_error(&base.with_ghat(ghat)?, rate, method))?;
                (eps, 1.0 - eps)
            }
        }
    };
    Ok(FixedRatePerformance {
        throughput: rate * ok.clamp(0.0, 1.0),
        error_prob: eps.clamp(0.0, 1.0),
        method,
    })
}

/// ∫₀^∞ e^{−x} ε(x) dx for a fixed rate: the error averaged over g ~ Exp(1).
pub fn marginal_error_numeric(budget: &LinkBudget, block_length: u64, rate: f64) -> Result<f64> {
    Ok(marginal_error_pair(budget, block_length, rate)?.0)
}

/// `(ε̄, 1 − ε̄)` for a fixed rate; the smaller member is integrated
/// directly so deep outage keeps its relative accuracy.
pub fn marginal_error_pair(budget: &LinkBudget, block_length: u64, rate: f64) -> Result<(f64, f64)> {
    check_rate(rate)?;
    if rate == 0.0 {
        return Ok((0.0, 1.0));
    }
    let power = budget.power();
    let length = block_length as f64;
    let approx = semilinear_raw(power, length, rate)?;
    let upper = 60.0_f64.max(approx.alpha + 10.0 / approx.mu);
    let mut points = vec![0.0, upper];
    for k in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        let x = approx.alpha + k / approx.mu;
        if x > 0.0 && x < upper {
            points.push(x);
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let opts = QuadOptions {
        abs_tol: 1e-11,
        rel_tol: 1e-10,
        max_intervals: 4000,
    };
    let error = integrate_with_breaks(|x| (-x).exp() * fbl_error_raw(x, power, length, rate), &points, &opts)?;
    // Beyond `upper` the weight is below e^{−60}; the error there is tiny.
    let eps = (error.value + (-upper).exp() * fbl_error_raw(upper, power, length, rate)).clamp(0.0, 1.0);
    if eps <= 0.5 {
        return Ok((eps, 1.0 - eps));
    }
    let fine = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-10,
        max_intervals: 4000,
    };
    let success = |x: f64| (-x).exp() * gaussian_q(-q_argument(x, power, length, rate));
    let ok = integrate_with_breaks(success, &points, &fine)?.value + (-upper).exp();
    let ok = ok.clamp(0.0, 1.0);
    Ok((1.0 - ok, ok))
}
