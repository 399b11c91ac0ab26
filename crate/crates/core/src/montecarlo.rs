//! Direct simulation of the channel model, used as an independent check on
//! every quadrature path.
//!
//! Samples are split into batches of `batch` draws. Batch `b` runs on its own
//! stream `rng::stream(master_seed, &[b])`, batches may run in parallel, and
//! their accumulators are merged in batch order, so results are
//! bit-identical for any thread count.

use rayon::prelude::*;

use crate::benchmarks::genie_rate_instant;
use crate::channel::{sample_rayleigh_gain, ConditionalGainDist};
use crate::error::{Error, Result};
use crate::fbl::{fbl_error_raw, CodeSpec, LinkBudget};
use crate::rate_adapt::{PaOperatingPoint, RatePolicy};
use crate::rng::{derive_seed, stream, Stream};
use rand::Rng;

/// Samples below this are not acceptance grade.
pub const MIN_ACCEPTANCE_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    samples: u64,
    master_seed: u64,
    batch: u64,
}

impl McConfig {
    pub fn new(samples: u64, master_seed: u64, batch: u64) -> Result<Self> {
        if samples == 0 || batch == 0 {
            return Err(Error::InvalidParameter {
                name: if samples == 0 { "samples" } else { "batch" },
                value: 0.0,
                reason: "must be positive",
            });
        }
        Ok(Self {
            samples,
            master_seed,
            batch,
        })
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn batch(&self) -> u64 {
        self.batch
    }

    pub fn is_acceptance_grade(&self) -> bool {
        self.samples >= MIN_ACCEPTANCE_SAMPLES
    }

    /// Configuration for an independent sub-experiment (e.g. one grid point).
    pub fn for_point(&self, index: u64) -> Self {
        Self {
            master_seed: derive_seed(self.master_seed, &[index]),
            ..*self
        }
    }

    pub fn with_samples(&self, samples: u64) -> Result<Self> {
        Self::new(samples, self.master_seed, self.batch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over √samples.
    pub std_error: f64,
    pub samples: u64,
}

impl McEstimate {
    /// |mean − reference| in standard errors (∞ when the error is zero and they differ).
    pub fn z_score(&self, reference: f64) -> f64 {
        let gap = (self.mean - reference).abs();
        if gap == 0.0 {
            0.0
        } else {
            gap / self.std_error
        }
    }

    fn scaled(self, factor: f64) -> Self {
        Self {
            mean: self.mean * factor,
            std_error: self.std_error * factor.abs(),
            samples: self.samples,
        }
    }
}

/// Streaming mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Pairwise combination of two accumulators.
    pub fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        self.mean += delta * nb / n as f64;
        self.m2 += other.m2 + delta * delta * na * nb / n as f64;
        self.count = n;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn estimate(&self) -> McEstimate {
        let var = if self.count > 1 {
            self.m2 / (self.count - 1) as f64
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_error: (var / self.count as f64).sqrt(),
            samples: self.count,
        }
    }
}

/// Runs `sample` once per draw and accumulates each of its `K` outputs.
fn simulate<const K: usize, F>(cfg: &McConfig, sample: F) -> Result<[Welford; K]>
where
    F: Fn(&mut Stream) -> Result<[f64; K]> + Sync,
{
    let batches = cfg.samples.div_ceil(cfg.batch);
    let partial: Vec<Result<[Welford; K]>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(cfg.master_seed, &[b]);
            let n = cfg.batch.min(cfg.samples - b * cfg.batch);
            let mut acc = [Welford::default(); K];
            for _ in 0..n {
                let values = sample(&mut rng)?;
                for (a, v) in acc.iter_mut().zip(values) {
                    a.push(v);
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = [Welford::default(); K];
    for part in partial {
        for (t, p) in total.iter_mut().zip(part?) {
            t.merge(&p);
        }
    }
    Ok(total)
}

/// Mean of ε(g) over g | ĝ. With σ = 0 every draw equals ĝ, so the estimate
/// is ε(ĝ) with zero spread.
pub fn mc_conditional_error(
    dist: &ConditionalGainDist,
    budget: &LinkBudget,
    code: &CodeSpec,
    cfg: &McConfig,
) -> Result<McEstimate> {
    let (p, l, r) = (budget.power(), code.block_length() as f64, code.rate());
    let [acc] = simulate(cfg, |rng| Ok([fbl_error_raw(dist.sample(rng), p, l, r)]))?;
    Ok(acc.estimate())
}

/// Joint estimate of throughput and block error rate with rate adaptation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McAdaptive {
    pub throughput: McEstimate,
    pub error_prob: McEstimate,
    pub mean_rate: McEstimate,
}

/// Per draw: ĝ ~ Exp(1), R = policy rate, g | ĝ, decoding succeeds with
/// probability 1 − ε(g); scores R on success and 0 otherwise.
pub fn mc_average_throughput(
    sigma: f64,
    budget: &LinkBudget,
    block_length: u64,
    policy: RatePolicy,
    cfg: &McConfig,
) -> Result<McAdaptive> {
    let base = PaOperatingPoint::new(0.0, sigma, *budget, block_length)?;
    let (p, l) = (budget.power(), block_length as f64);
    let [thr, err, rate] = simulate(cfg, |rng| {
        let ghat = sample_rayleigh_gain(rng);
        let pt = base.with_ghat(ghat)?;
        let r = policy.rate(&pt)?;
        let g = pt.dist().sample(rng);
        let failed = rng.random::<f64>() < fbl_error_raw(g, p, l, r);
        let failed = if r == 0.0 { false } else { failed };
        Ok([if failed { 0.0 } else { r }, f64::from(u8::from(failed)), r])
    })?;
    Ok(McAdaptive {
        throughput: thr.estimate(),
        error_prob: err.estimate(),
        mean_rate: rate.estimate(),
    })
}

/// E_g[R_ins]·(1 − ε̂) by sampling g ~ Exp(1).
pub fn mc_genie_throughput(budget: &LinkBudget, block_length: u64, eps_hat: f64, cfg: &McConfig) -> Result<McEstimate> {
    let [acc] = simulate(cfg, |rng| {
        let g = sample_rayleigh_gain(rng);
        Ok([genie_rate_instant(g, budget, block_length, eps_hat)?.rate])
    })?;
    Ok(acc.estimate().scaled(1.0 - eps_hat))
}

/// Open-loop throughput R·1{decoded} with g ~ Exp(1).
pub fn mc_no_csit_throughput(budget: &LinkBudget, block_length: u64, rate: f64, cfg: &McConfig) -> Result<McEstimate> {
    let (p, l) = (budget.power(), block_length as f64);
    let [acc] = simulate(cfg, |rng| {
        let g = sample_rayleigh_gain(rng);
        let failed = rng.random::<f64>() < fbl_error_raw(g, p, l, rate);
        Ok([if failed { 0.0 } else { rate }])
    })?;
    Ok(acc.estimate())
}
