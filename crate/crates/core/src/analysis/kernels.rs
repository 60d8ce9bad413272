//! Assembly of [`FoxHParams`] for the link statistics.

use super::{BerModParams, ElementParams, RisLinkConfig};
use crate::channel::TpeParams;
use crate::foxh::{FoxHError, FoxHParams, GammaFactor, JointFactor, KernelTerm, Location, Side, VariableBlock};
use statrs::function::gamma::gamma;

fn fading_factors(alpha1: f64, mu1: f64, alpha2: f64, mu2: f64) -> Vec<GammaFactor> {
    vec![
        GammaFactor::lower_numerator(mu1, 1.0 / alpha1),
        GammaFactor::lower_numerator(mu2, 1.0 / alpha2),
    ]
}

/// Mellin kernel `Θ(s) = E[(ψZ_i)^s]` of one element, written against `(ψx)^{-s}`-type arguments.
fn raw_block(alpha1: f64, mu1: f64, alpha2: f64, mu2: f64, tpe: Option<&TpeParams>, q: f64) -> VariableBlock {
    let norm = 1.0 / (gamma(mu1) * gamma(mu2));
    let norm = if norm.is_finite() { norm } else { 1.0 };
    let mut base = fading_factors(alpha1, mu1, alpha2, mu2);
    if q > 0.0 {
        // 1 / (Γ(1 + qs) Γ(1 - qs))
        base.push(GammaFactor::upper_denominator(1.0, q));
        base.push(GammaFactor::lower_denominator(0.0, q));
    }
    match tpe {
        None => VariableBlock::from_terms(vec![KernelTerm::new(norm, base)]),
        Some(t) => {
            let b = t.beta1();
            let terms = t
                .weights()
                .iter()
                .enumerate()
                .map(|(k, w)| {
                    let mut f = base.clone();
                    for _ in 0..k + 2 {
                        // Γ(1/β + s) / Γ(1 + 1/β + s) = 1 / (1/β + s)
                        f.push(GammaFactor::lower_numerator(1.0 / b, 1.0));
                        f.push(GammaFactor::upper_denominator(1.0 + 1.0 / b, 1.0));
                    }
                    KernelTerm::new(norm * w / b.powi(k as i32 + 2), f)
                })
                .collect();
            VariableBlock::from_terms(terms)
        }
    }
}

/// Per-element Mellin kernel including pointing error and phase noise.
pub fn element_block(e: &ElementParams) -> VariableBlock {
    raw_block(
        e.hop1.alpha(),
        e.hop1.mu(),
        e.hop2.alpha(),
        e.hop2.mu(),
        e.tpe.as_ref(),
        e.phase.q(),
    )
}

/// `Γ(-s)`: turns a density kernel into the kernel of an integral over `(0, x)` or a Laplace transform.
fn minus_s() -> GammaFactor {
    GammaFactor::upper_numerator(1.0, 1.0)
}

/// `1 / Γ(1 - s)`.
fn one_minus_s_den() -> GammaFactor {
    GammaFactor::lower_denominator(0.0, 1.0)
}

/// Product of the two fading envelopes only; `x⁻¹ H[x/(A₁A₂)]` is its density.
pub fn double_fading_kernel(e: &ElementParams, x: f64) -> Result<FoxHParams, FoxHError> {
    let block = raw_block(e.hop1.alpha(), e.hop1.mu(), e.hop2.alpha(), e.hop2.mu(), None, 0.0);
    FoxHParams::new(vec![block], vec![], vec![x / (e.hop1.scale() * e.hop2.scale())])
}

/// `x⁻¹ H[ψx]` is the element density.
pub fn element_pdf_kernel(e: &ElementParams, x: f64) -> Result<FoxHParams, FoxHError> {
    FoxHParams::new(vec![element_block(e)], vec![], vec![e.psi() * x])
}

pub fn element_cdf_kernel(e: &ElementParams, x: f64) -> Result<FoxHParams, FoxHError> {
    let block = element_block(e).with_factor(minus_s()).with_factor(one_minus_s_den());
    FoxHParams::new(vec![block], vec![], vec![e.psi() * x])
}

/// Element CDF kernel from unvalidated numbers, used to diagnose configurations.
pub fn cdf_kernel_raw(
    alpha1: f64,
    mu1: f64,
    alpha2: f64,
    mu2: f64,
    tpe: Option<&TpeParams>,
    q: f64,
) -> Result<FoxHParams, FoxHError> {
    let block = raw_block(alpha1, mu1, alpha2, mu2, tpe, q)
        .with_factor(minus_s())
        .with_factor(one_minus_s_den());
    FoxHParams::new(vec![block], vec![], vec![1.0])
}

/// `M(s) = E[e^{-sZ}] = H[ψ/s]` with an extra `Γ(-u)`.
pub fn element_mgf_kernel(e: &ElementParams, s: f64) -> Result<FoxHParams, FoxHError> {
    FoxHParams::new(vec![element_block(e).with_factor(minus_s())], vec![], vec![e.psi() / s])
}

fn sum_blocks(cfg: &RisLinkConfig) -> Vec<VariableBlock> {
    cfg.elements.iter().map(|e| element_block(e).with_factor(minus_s())).collect()
}

fn ones(n: usize, w: f64) -> Vec<f64> {
    vec![w; n]
}

/// `x⁻¹ H_N[{ψ_i x}]` is the density of `Z = Σ Z_i`; the joint factor is `1/Γ(-Σs)`.
pub fn sum_pdf_kernel(cfg: &RisLinkConfig, x: f64) -> Result<FoxHParams, FoxHError> {
    let n = cfg.len();
    let joint = JointFactor::new(1.0, ones(n, 1.0), Location::Denominator, Side::Lower);
    let args = cfg.elements.iter().map(|e| e.psi() * x).collect();
    FoxHParams::new(sum_blocks(cfg), vec![joint], args)
}

/// CDF of `Z` at `x`; the joint factor is `1/Γ(1 - Σs)`.
pub fn outage_kernel(cfg: &RisLinkConfig, x: f64) -> Result<FoxHParams, FoxHError> {
    let n = cfg.len();
    let joint = JointFactor::new(0.0, ones(n, 1.0), Location::Denominator, Side::Lower);
    let args = cfg.elements.iter().map(|e| e.psi() * x).collect();
    FoxHParams::new(sum_blocks(cfg), vec![joint], args)
}

/// Averaged error rate without its `1/(2Γ(p))` prefactor; adds `Γ(p - Σs/2)`.
pub fn ber_kernel(cfg: &RisLinkConfig, m: &BerModParams, gamma_bar: f64) -> Result<FoxHParams, FoxHError> {
    let n = cfg.len();
    let cdf = JointFactor::new(0.0, ones(n, 1.0), Location::Denominator, Side::Lower);
    let kernel = JointFactor::new(1.0 - m.p, ones(n, 0.5), Location::Numerator, Side::Upper);
    let scale = 1.0 / (m.q_mod * gamma_bar).sqrt();
    let args = cfg.elements.iter().map(|e| e.psi() * scale).collect();
    FoxHParams::new(sum_blocks(cfg), vec![cdf, kernel], args)
}
