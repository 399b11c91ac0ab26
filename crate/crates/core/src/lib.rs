// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmarks;
pub mod channel;
pub mod error;
pub mod fbl;
pub mod montecarlo;
pub mod optimize;
pub mod quad;
pub mod rate_adapt;
pub mod rng;
pub mod specfun;

pub use error::{Error, Result};
