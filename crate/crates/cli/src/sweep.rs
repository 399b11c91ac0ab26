//! Grid expansion and per-point evaluation.

use std::collections::BTreeMap;

use pa_fbl::benchmarks::{genie_throughput, no_csit_rate_opt, no_csit_throughput};
use pa_fbl::channel::{mismatch_distance, CorrelationSpec};
use pa_fbl::fbl::LinkBudget;
use pa_fbl::montecarlo::{mc_average_throughput, McConfig};
use pa_fbl::quad::GaussLaguerre;
use pa_fbl::rate_adapt::{average_adaptive, fixed_rate_performance, marginal_error_numeric, Method, RatePolicy};
use rayon::prelude::*;

use crate::config::{Command, McSettings, Param, Regime, SweepSpec, DEFAULT_SEED};

/// σ is held inside [SIGMA_FLOOR, SIGMA_CEIL] for the PA regimes. Below the
/// floor the conditional law's Poisson mixture needs more terms than the
/// Marcum evaluator allows; above the ceiling it is indistinguishable from
/// independent fading.
pub const SIGMA_FLOOR: f64 = 0.02;
pub const SIGMA_CEIL: f64 = 0.999;

const KMH_PER_MPS: f64 = 3.6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub d_a: f64,
    pub v: f64,
    pub delta: f64,
    pub f_c: f64,
    pub d: f64,
}

/// One resolved grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub index: u64,
    pub snr_db: f64,
    pub length: u64,
    pub rate: Option<f64>,
    /// σ as resolved from the configuration, before any clamping.
    pub sigma: Option<f64>,
    pub geometry: Option<Geometry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub command: Command,
    pub point: GridPoint,
    pub regime: Regime,
    /// σ used for evaluation; differs from the resolved σ only when clamped.
    pub sigma_used: Option<f64>,
    pub method: Option<String>,
    pub throughput: Option<f64>,
    pub error_prob: Option<f64>,
    pub rate_opt: Option<f64>,
    pub mc_se_throughput: Option<f64>,
    pub mc_se_error_prob: Option<f64>,
    pub error: Option<String>,
}

impl SweepResult {
    pub fn v_kmh(&self) -> Option<f64> {
        self.point.geometry.map(|g| g.v * KMH_PER_MPS)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Overrides the configuration's master seed.
    pub seed: Option<u64>,
    /// Overrides the configuration's sample count.
    pub mc_samples: Option<u64>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl RunOptions {
    pub fn mc_config(&self, spec: &SweepSpec) -> Result<McConfig, String> {
        let base = spec.mc.unwrap_or_default();
        let McSettings { samples, seed, batch } = base;
        let seed = self.seed.or(seed).unwrap_or(DEFAULT_SEED);
        McConfig::new(self.mc_samples.unwrap_or(samples), seed, batch).map_err(|e| e.to_string())
    }
}

fn resolve(values: &BTreeMap<Param, f64>, index: u64) -> GridPoint {
    let get = |p: Param| values.get(&p).copied();
    let geometry = get(Param::Speed).map(|v| {
        let delta = get(Param::Delay).unwrap_or(f64::NAN);
        let f_c = get(Param::Carrier).unwrap_or(f64::NAN);
        let d_a = match get(Param::AntennaSeparation) {
            Some(d) => d,
            None => {
                get(Param::AntennaSeparationWavelengths).unwrap_or(f64::NAN) * pa_fbl::channel::SPEED_OF_LIGHT / f_c
            }
        };
        Geometry {
            d_a,
            v,
            delta,
            f_c,
            d: f64::NAN,
        }
    });
    let (sigma, geometry) = match (get(Param::Sigma), geometry) {
        (Some(s), _) => (CorrelationSpec::direct(s).and_then(|c| c.sigma()).ok(), None),
        (None, Some(mut g)) => {
            let spec = CorrelationSpec::geometry(g.d_a, g.v, g.delta, g.f_c);
            if let Ok(s) = &spec {
                g.d = mismatch_distance(s).unwrap_or(f64::NAN);
            }
            (spec.and_then(|c| c.sigma()).ok(), Some(g))
        }
        (None, None) => (None, None),
    };
    GridPoint {
        index,
        snr_db: get(Param::SnrDb).unwrap_or(f64::NAN),
        length: get(Param::Length).unwrap_or(0.0) as u64,
        rate: get(Param::Rate),
        sigma,
        geometry,
    }
}

/// Cartesian product of the axes, first axis outermost.
pub fn grid(spec: &SweepSpec) -> Vec<GridPoint> {
    let total = spec.grid_size();
    (0..total)
        .map(|flat| {
            let mut values = spec.fixed.clone();
            let mut rem = flat;
            for axis in spec.axes.iter().rev() {
                let n = axis.values.len();
                values.insert(axis.param, axis.values[rem % n]);
                rem /= n;
            }
            resolve(&values, flat as u64)
        })
        .collect()
}

struct Outcome {
    sigma_used: Option<f64>,
    method: String,
    throughput: f64,
    error_prob: f64,
    rate_opt: Option<f64>,
    mc_se: Option<(f64, f64)>,
}

fn clamp_sigma(sigma: f64) -> (f64, bool) {
    let s = sigma.clamp(SIGMA_FLOOR, SIGMA_CEIL);
    (s, s != sigma)
}

fn tagged(tag: &str, clamped: bool) -> String {
    if clamped {
        format!("{tag}+sigma-clamp")
    } else {
        tag.to_string()
    }
}

fn policy_for(regime: Regime) -> Option<RatePolicy> {
    match regime {
        Regime::PaTheorem1 => Some(RatePolicy::Theorem1),
        Regime::PaTheorem2 => Some(RatePolicy::Theorem2ClosedForm),
        Regime::PaNumeric => Some(RatePolicy::NumericRefined),
        _ => None,
    }
}

fn evaluate(point: &GridPoint, regime: Regime, mc: &Result<McConfig, String>) -> Result<Outcome, String> {
    let budget = LinkBudget::from_db(point.snr_db).map_err(|e| e.to_string())?;
    let length = point.length;
    let sigma = || {
        point
            .sigma
            .ok_or_else(|| "correlation parameters out of range".to_string())
    };
    let e = |err: pa_fbl::Error| err.to_string();

    match (regime, point.rate) {
        (Regime::PaTheorem1 | Regime::PaTheorem2 | Regime::PaNumeric, None) => {
            let (s, clamped) = clamp_sigma(sigma()?);
            let policy = policy_for(regime).expect("pa regime");
            let avg = average_adaptive(s, &budget, length, policy, GaussLaguerre::standard()).map_err(e)?;
            Ok(Outcome {
                sigma_used: Some(s),
                method: tagged(avg.method.tag(), clamped),
                throughput: avg.throughput,
                error_prob: avg.error_prob,
                rate_opt: Some(avg.mean_rate),
                mc_se: None,
            })
        }
        (Regime::PaTheorem1 | Regime::PaTheorem2 | Regime::PaNumeric, Some(rate)) => {
            let (s, clamped) = clamp_sigma(sigma()?);
            let method = policy_for(regime).expect("pa regime").method();
            let perf = fixed_rate_performance(s, &budget, length, rate, method).map_err(e)?;
            Ok(Outcome {
                sigma_used: Some(s),
                method: tagged(perf.method.tag(), clamped),
                throughput: perf.throughput,
                error_prob: perf.error_prob,
                rate_opt: None,
                mc_se: None,
            })
        }
        (Regime::NoCsit, None) => {
            let opt = no_csit_rate_opt(&budget, length).map_err(e)?;
            Ok(Outcome {
                sigma_used: None,
                method: opt.path.tag().to_string(),
                throughput: opt.throughput,
                error_prob: marginal_error_numeric(&budget, length, opt.rate).map_err(e)?,
                rate_opt: Some(opt.rate),
                mc_se: None,
            })
        }
        (Regime::NoCsit, Some(rate)) => {
            let exact = if rate == 0.0 {
                0.0
            } else {
                no_csit_throughput(&budget, length, rate).map_err(e)?.exact
            };
            Ok(Outcome {
                sigma_used: None,
                method: Method::Numeric.tag().to_string(),
                throughput: exact,
                error_prob: marginal_error_numeric(&budget, length, rate).map_err(e)?,
                rate_opt: None,
                mc_se: None,
            })
        }
        (Regime::Genie, None) => {
            let g = genie_throughput(&budget, length).map_err(e)?;
            Ok(Outcome {
                sigma_used: None,
                method: g.path.tag().to_string(),
                throughput: g.throughput,
                error_prob: g.eps_hat,
                rate_opt: None,
                mc_se: None,
            })
        }
        (Regime::Genie, Some(_)) => Err("genie regime has no fixed-rate form".into()),
        (Regime::MonteCarlo, rate) => {
            let cfg = mc.clone()?.for_point(point.index);
            let (s, clamped) = clamp_sigma(sigma()?);
            let policy = rate.map_or(RatePolicy::NumericRefined, RatePolicy::Fixed);
            let est = mc_average_throughput(s, &budget, length, policy, &cfg).map_err(e)?;
            Ok(Outcome {
                sigma_used: Some(s),
                method: tagged(&format!("mc-{}", policy.method().tag()), clamped),
                throughput: est.throughput.mean,
                error_prob: est.error_prob.mean,
                rate_opt: rate.is_none().then_some(est.mean_rate.mean),
                mc_se: Some((est.throughput.std_error, est.error_prob.std_error)),
            })
        }
    }
}

/// Evaluates every grid point under every regime. Rows are ordered by grid
/// point, then by regime in configuration order; the order and all values
/// are independent of the thread count.
pub fn run_sweep(spec: &SweepSpec, opts: &RunOptions) -> Vec<SweepResult> {
    let work = || {
        let mc = opts.mc_config(spec);
        let points = grid(spec);
        let jobs: Vec<(GridPoint, Regime)> = points
            .iter()
            .flat_map(|p| spec.regimes.iter().map(move |&r| (*p, r)))
            .collect();
        jobs.par_iter()
            .map(|&(point, regime)| {
                let mut row = SweepResult {
                    command: spec.command,
                    point,
                    regime,
                    sigma_used: None,
                    method: None,
                    throughput: None,
                    error_prob: None,
                    rate_opt: None,
                    mc_se_throughput: None,
                    mc_se_error_prob: None,
                    error: None,
                };
                match evaluate(&point, regime, &mc) {
                    Ok(out) => {
                        row.sigma_used = out.sigma_used;
                        row.method = Some(out.method);
                        row.throughput = Some(out.throughput);
                        row.error_prob = Some(out.error_prob);
                        row.rate_opt = out.rate_opt;
                        row.mc_se_throughput = out.mc_se.map(|m| m.0);
                        row.mc_se_error_prob = out.mc_se.map(|m| m.1);
                    }
                    Err(msg) => row.error = Some(msg),
                }
                row
            })
            .collect()
    };
    match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    }
}
