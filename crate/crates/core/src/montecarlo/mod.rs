//! Monte Carlo simulation of the RIS link.
//!
//! Every estimator splits its trials into chunks of [`CHUNK_TRIALS`]; chunk
//! `c` draws from `ChaCha8Rng` seeded with the user seed on stream `c`, so
//! results are bit-identical for a given `(config, seed, trials)` regardless of
//! the number of worker threads.

mod estimate;
mod sampler;

pub use estimate::{
    adaptive_outage, ber_curve, choose_tilt, estimate_ber, estimate_ber_bits, estimate_ber_with, estimate_outage,
    estimate_outage_with, outage_curve, AdaptiveOptions, McOptions,
};
pub use sampler::{simulate_envelope, simulate_snr, Sampler, Tilt};

use crate::channel::ChannelError;
use statrs::distribution::{ContinuousCDF, Normal};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const CHUNK_TRIALS: u64 = 1 << 16;
pub const MIN_OUTAGE_TRIALS: u64 = 10_000;
pub const MIN_BER_TRIALS: u64 = 100_000;
pub const MAX_TRIALS: u64 = 100_000_000;

/// How the per-element terms are combined into the received envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Composition {
    /// `|Σ Z_i e^{jθ_i}|`.
    ComplexSum,
    /// `|Σ Z_i cos θ_i|`, the in-phase projection.
    RealEffective,
}

impl Composition {
    pub fn label(&self) -> &'static str {
        match self {
            Self::ComplexSum => "complex-sum",
            Self::RealEffective => "real-effective",
        }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Composition {
    type Err = McError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "complex-sum" => Ok(Self::ComplexSum),
            "real-effective" => Ok(Self::RealEffective),
            _ => Err(McError::InvalidInput(format!(
                "unknown composition mode {s:?}, expected complex-sum or real-effective"
            ))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McError {
    #[error("{got} trials requested, at least {required} needed")]
    TooFewTrials { required: u64, got: u64 },
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A Monte Carlo probability estimate and its confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    pub seed: u64,
}

impl McEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }
}

/// Two-sided standard normal quantile for `confidence`.
pub fn normal_quantile(confidence: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + 0.5 * confidence)
}

/// Wilson score interval for `successes` out of `n`.
pub fn wilson_interval(successes: u64, n: u64, confidence: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = normal_quantile(confidence);
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// Kolmogorov–Smirnov distance between the empirical law of `samples` and `cdf`.
///
/// Sorts `samples` in place.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
