//! Predictor-antenna spatial-mismatch channel.
//!
//! The front (predictor) antenna measures ĥ; the rear (receive) antenna sees
//!
//! ```text
//! h = √(1−σ²)·ĥ + σ·q,    q ~ CN(0, 1)
//! ```
//!
//! so g = |h|² given ĝ = |ĥ|² is a scaled non-central χ² with two degrees of
//! freedom. σ follows from the distance d between where the channel was
//! measured and where the receive antenna is when data is sent.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::specfun::{bessel_i0_scaled, bessel_j0, marcum_q1_pair};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// How the correlation parameter σ is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorrelationSpec {
    Geometry {
        /// d_a, metres between predictor and receive antenna.
        antenna_separation_m: f64,
        speed_mps: f64,
        /// δ, time between channel measurement and data transmission.
        processing_delay_s: f64,
        carrier_hz: f64,
    },
    Direct {
        sigma: f64,
    },
}

impl CorrelationSpec {
    pub fn geometry(
        antenna_separation_m: f64,
        speed_mps: f64,
        processing_delay_s: f64,
        carrier_hz: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("antenna_separation_m", antenna_separation_m),
            ("speed_mps", speed_mps),
            ("processing_delay_s", processing_delay_s),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be finite and non-negative",
                });
            }
        }
        if !(carrier_hz.is_finite() && carrier_hz > 0.0) {
            return Err(Error::InvalidParameter {
                name: "carrier_hz",
                value: carrier_hz,
                reason: "must be finite and positive",
            });
        }
        Ok(Self::Geometry {
            antenna_separation_m,
            speed_mps,
            processing_delay_s,
            carrier_hz,
        })
    }

    pub fn direct(sigma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&sigma) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                value: sigma,
                reason: "must lie in [0, 1]",
            });
        }
        Ok(Self::Direct { sigma })
    }

    pub fn wavelength_m(&self) -> Option<f64> {
        match *self {
            Self::Geometry { carrier_hz, .. } => Some(SPEED_OF_LIGHT / carrier_hz),
            Self::Direct { .. } => None,
        }
    }

    pub fn sigma(&self) -> Result<f64> {
        match *self {
            Self::Direct { sigma } => Ok(sigma),
            Self::Geometry { carrier_hz, .. } => {
                let d = mismatch_distance(self)?;
                sigma_from_rho(correlation_rho(d, SPEED_OF_LIGHT / carrier_hz)?)
            }
        }
    }
}

/// d = |d_a − v·δ|.
pub fn mismatch_distance(spec: &CorrelationSpec) -> Result<f64> {
    match *spec {
        CorrelationSpec::Geometry {
            antenna_separation_m,
            speed_mps,
            processing_delay_s,
            ..
        } => Ok((antenna_separation_m - speed_mps * processing_delay_s).abs()),
        CorrelationSpec::Direct { .. } => Err(Error::State {
            expected: "geometry-based correlation spec",
        }),
    }
}

/// ρ = J₀(2πd/λ) under isotropic (Jakes) scattering.
pub fn correlation_rho(d: f64, lambda_m: f64) -> Result<f64> {
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "must be finite and non-negative",
        });
    }
    if !(lambda_m.is_finite() && lambda_m > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda_m",
            value: lambda_m,
            reason: "must be finite and positive",
        });
    }
    bessel_j0(2.0 * std::f64::consts::PI * d / lambda_m)
}

/// σ = √(1 − ρ²): the innovation weight of the receive-antenna channel given
/// the predictor measurement when both are unit-power and correlated by ρ.
pub fn sigma_from_rho(rho: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::Domain {
            func: "sigma_from_rho",
            arg: rho,
            reason: "correlation must lie in [-1, 1]",
        });
    }
    let r = rho.abs();
    Ok(((1.0 - r) * (1.0 + r)).sqrt())
}

/// Law of g = |h|² given ĝ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalGainDist {
    ghat: f64,
    sigma: f64,
}

impl ConditionalGainDist {
    pub fn new(ghat: f64, sigma: f64) -> Result<Self> {
        if !(ghat.is_finite() && ghat >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "ghat",
                value: ghat,
                reason: "must be finite and non-negative",
            });
        }
        if !(0.0..=1.0).contains(&sigma) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                value: sigma,
                reason: "must lie in [0, 1]",
            });
        }
        Ok(Self { ghat, sigma })
    }

    pub fn ghat(&self) -> f64 {
        self.ghat
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn is_degenerate(&self) -> bool {
        self.sigma == 0.0 || self.sigma == 1.0
    }

    /// E[g | ĝ] = (1−σ²)ĝ + σ².
    pub fn mean(&self) -> f64 {
        let s2 = self.sigma * self.sigma;
        (1.0 - s2) * self.ghat + s2
    }

    /// λ = (1−σ²)ĝ/σ², the Poisson mean of the mixture representation.
    pub fn noncentrality(&self) -> f64 {
        let s2 = self.sigma * self.sigma;
        (1.0 - s2) * self.ghat / s2
    }

    /// Marcum arguments (s, ρ) with F(x) = 1 − Q₁(s, ρ).
    pub fn marcum_args(&self, x: f64) -> (f64, f64) {
        let s2 = self.sigma * self.sigma;
        ((2.0 * self.noncentrality()).sqrt(), (2.0 * x / s2).sqrt())
    }

    fn require_interior(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::Degenerate { sigma: self.sigma })
        } else {
            Ok(())
        }
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.require_interior()?;
        if x < 0.0 {
            return Ok(0.0);
        }
        let s2 = self.sigma * self.sigma;
        let c = (1.0 - s2) * self.ghat;
        let z = 2.0 * (x * c).sqrt() / s2;
        // exp(−(x+c)/σ²)·I₀(z) = exp(−(√x−√c)²/σ²)·e^{−z}I₀(z)
        let gap = x.sqrt() - c.sqrt();
        Ok((-gap * gap / s2).exp() * bessel_i0_scaled(z)? / s2)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.cdf_pair(x)?.0)
    }

    /// `(F(x), 1 − F(x))`, each computed without cancellation.
    pub fn cdf_pair(&self, x: f64) -> Result<(f64, f64)> {
        self.require_interior()?;
        if x <= 0.0 {
            return Ok((0.0, 1.0));
        }
        let (s, rho) = self.marcum_args(x);
        let (q, p) = marcum_q1_pair(s, rho)?;
        Ok((p, q))
    }

    /// F(x) including the σ = 0 point mass and the σ = 1 exponential.
    pub fn cdf_any(&self, x: f64) -> Result<f64> {
        if self.sigma == 0.0 {
            Ok(if x >= self.ghat { 1.0 } else { 0.0 })
        } else if self.sigma == 1.0 {
            Ok(if x <= 0.0 { 0.0 } else { -(-x).exp_m1() })
        } else {
            self.cdf(x)
        }
    }

    /// Draws g = |√(1−σ²)ĥ + σq|² with ĥ = √ĝ·e^{iθ}, θ uniform.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.sigma == 0.0 {
            return self.ghat;
        }
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        let amp = ((1.0 - self.sigma * self.sigma) * self.ghat).sqrt();
        let scale = self.sigma * std::f64::consts::FRAC_1_SQRT_2;
        let q_re: f64 = StandardNormal.sample(rng);
        let q_im: f64 = StandardNormal.sample(rng);
        let re = amp * theta.cos() + scale * q_re;
        let im = amp * theta.sin() + scale * q_im;
        re * re + im * im
    }
}

pub fn sample_conditional<R: Rng + ?Sized>(dist: &ConditionalGainDist, rng: &mut R) -> f64 {
    dist.sample(rng)
}

/// ĝ (or g without CSIT) ~ Exp(1).
pub fn sample_rayleigh_gain<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}
