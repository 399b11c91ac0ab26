//! Shared operating points for the criterion benches.

use pa_fbl::fbl::LinkBudget;

pub const BLOCK_LENGTH: u64 = 300;

/// (σ, SNR in dB) pairs spanning strong to weak correlation.
pub const OPERATING_POINTS: [(f64, f64); 3] = [(0.3, 10.0), (0.5, 20.0), (0.8, 30.0)];

pub fn budget(snr_db: f64) -> LinkBudget {
    LinkBudget::from_db(snr_db).expect("finite SNR")
}

/// `n` points evenly spaced on [lo, hi].
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
