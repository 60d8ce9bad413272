//! Per-element channel statistics and the deterministic THz link budget.

mod alpha_mu;
mod budget;
mod phase;
mod tpe;

pub use alpha_mu::{alpha_mu_cdf, alpha_mu_pdf, alpha_mu_sample, AlphaMuParams};
pub use budget::{path_gain, LinkBudget, SPEED_OF_LIGHT};
pub use phase::{phase_sample, PhaseNoiseParams};
pub(crate) use tpe::sample_order;
pub use tpe::{tpe_cdf, tpe_pdf, tpe_sample, TpeParams, MIXTURE_SUM_TOLERANCE, TAIL_TOLERANCE};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("x = {x} outside the support [{lo}, {hi}]")]
    DomainError { x: f64, lo: f64, hi: f64 },
    #[error("invalid pointing-error mixture: {reason}{}", suggested_order.map(|k| format!(" (try series_order = {k})")).unwrap_or_default())]
    InvalidMixture { reason: String, suggested_order: Option<usize> },
}

pub(crate) fn require_positive(name: &str, v: f64) -> Result<(), ChannelError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ChannelError::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}
