//! Closed-form statistics of the RIS link, evaluated through [`crate::foxh`].
//!
//! Conventions used throughout:
//!
//! - `Z = Σ_i Z_i` is the combined envelope, `γ = γ̄ Z²` the instantaneous SNR.
//! - Per element, `ψ_i = 1 / (G₀ A₁ A₂)` with `A_j = Ω_j / μ_j^{1/α_j}`.
//! - The pointing-error series is folded into one [`VariableBlock`] per
//!   element, one [`KernelTerm`] per retained order `k`.
//!
//! [`VariableBlock`]: crate::foxh::VariableBlock
//! [`KernelTerm`]: crate::foxh::KernelTerm

mod kernels;
mod metrics;

pub use kernels::{
    ber_kernel, cdf_kernel_raw, double_fading_kernel, element_block, element_cdf_kernel, element_mgf_kernel,
    element_pdf_kernel, outage_kernel, sum_pdf_kernel,
};
pub use metrics::{
    ber_asymptotic, ber_asymptotic_expansion, ber_exact, ber_from_cdf, conditional_ber, diversity_order,
    double_fading_pdf, element_cdf, element_mgf, element_pdf, envelope_threshold, outage_asymptotic,
    outage_asymptotic_expansion, outage_exact, outage_exact_curve, outage_exact_metric, sum_cdf, sum_pdf, Metric,
    ber_exact_curve, ber_exact_metric,
};

use crate::channel::{AlphaMuParams, ChannelError, LinkBudget, PhaseNoiseParams, TpeParams};
use crate::foxh::FoxHError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    FoxH(#[from] FoxHError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("result {value:e} is outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Channel of one RIS element: both fading hops, pointing error, phase error.
///
/// `tpe = None` means perfect alignment, `h_p = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementParams {
    pub hop1: AlphaMuParams,
    pub hop2: AlphaMuParams,
    pub tpe: Option<TpeParams>,
    pub phase: PhaseNoiseParams,
}

impl ElementParams {
    pub fn new(hop1: AlphaMuParams, hop2: AlphaMuParams, tpe: Option<TpeParams>, phase: PhaseNoiseParams) -> Self {
        Self { hop1, hop2, tpe, phase }
    }

    /// Both hops α-μ with the same parameters.
    pub fn symmetric(alpha: f64, mu: f64, omega: f64, tpe: Option<TpeParams>, q: f64) -> Result<Self, AnalysisError> {
        let hop = AlphaMuParams::new(alpha, mu, omega)?;
        Ok(Self::new(hop, hop, tpe, PhaseNoiseParams::new(q)?))
    }

    pub fn g0(&self) -> f64 {
        self.tpe.as_ref().map_or(1.0, |t| t.g0())
    }

    pub fn psi(&self) -> f64 {
        1.0 / (self.g0() * self.hop1.scale() * self.hop2.scale())
    }

    /// `p = min(α₁μ₁, α₂μ₂, 1/β₁)`: the envelope CDF behaves like `x^p` near zero.
    pub fn fading_exponent(&self) -> f64 {
        let fading = (self.hop1.alpha() * self.hop1.mu()).min(self.hop2.alpha() * self.hop2.mu());
        match &self.tpe {
            Some(t) => fading.min(1.0 / t.beta1()),
            None => fading,
        }
    }

    pub fn with_phase(&self, phase: PhaseNoiseParams) -> Self {
        Self { phase, ..self.clone() }
    }
}

/// `N` elements and the deterministic budget used to map transmit power to `γ̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct RisLinkConfig {
    pub elements: Vec<ElementParams>,
    pub budget: LinkBudget,
}

impl RisLinkConfig {
    pub fn new(elements: Vec<ElementParams>, budget: LinkBudget) -> Result<Self, AnalysisError> {
        if elements.is_empty() {
            return Err(AnalysisError::InvalidInput("at least one RIS element is required".into()));
        }
        budget.validate()?;
        Ok(Self { elements, budget })
    }

    /// `n` copies of `element`.
    pub fn identical(element: ElementParams, n: usize, budget: LinkBudget) -> Result<Self, AnalysisError> {
        Self::new(vec![element; n], budget)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `γ̄ = P_t (H G)² / σ²`, transmit power in watts.
    pub fn average_snr(&self, tx_power_w: f64) -> f64 {
        self.budget.average_snr(tx_power_w)
    }

    pub fn with_phase(&self, phase: PhaseNoiseParams) -> Self {
        Self {
            elements: self.elements.iter().map(|e| e.with_phase(phase)).collect(),
            budget: self.budget,
        }
    }
}

/// Modulation constants of the averaged error kernel `Γ(p, qγ) / (2Γ(p))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerModParams {
    pub p: f64,
    pub q_mod: f64,
}

impl BerModParams {
    pub fn new(p: f64, q_mod: f64) -> Result<Self, AnalysisError> {
        if !(p > 0.0 && q_mod > 0.0 && p.is_finite() && q_mod.is_finite()) {
            return Err(AnalysisError::InvalidInput(format!(
                "modulation constants must be positive, got p = {p}, q = {q_mod}"
            )));
        }
        Ok(Self { p, q_mod })
    }

    /// Coherent BPSK, `Q(√(2γ))`.
    pub const BPSK: Self = Self { p: 0.5, q_mod: 1.0 };
    /// Coherent orthogonal BFSK, `Q(√γ)`.
    pub const BFSK: Self = Self { p: 0.5, q_mod: 0.5 };
    /// Differential BPSK, `e^{-γ}/2`.
    pub const DBPSK: Self = Self { p: 1.0, q_mod: 1.0 };
    /// Non-coherent BFSK, `e^{-γ/2}/2`.
    pub const NCFSK: Self = Self { p: 1.0, q_mod: 0.5 };

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "bpsk" => Some(Self::BPSK),
            "bfsk" => Some(Self::BFSK),
            "dbpsk" => Some(Self::DBPSK),
            "ncfsk" => Some(Self::NCFSK),
            _ => None,
        }
    }

    pub const PRESET_NAMES: [&'static str; 4] = ["bpsk", "bfsk", "dbpsk", "ncfsk"];
}
