//! Densities, outage probability and error rates.

use super::kernels::{
    ber_kernel, double_fading_kernel, element_cdf_kernel, element_mgf_kernel, element_pdf_kernel, outage_kernel,
    sum_pdf_kernel,
};
use super::{AnalysisError, BerModParams, ElementParams, RisLinkConfig};
use crate::foxh::{
    eval_foxh, eval_foxh_batch, leading_residue, pole_expansion, validate_contour, validate_contour_batch,
    ContourOptions, EvalOptions, FoxHParams,
};
use crate::quadrature::GaussLegendre;
use statrs::function::gamma::{gamma, gamma_ur};

/// Slack allowed on probabilities before a result is reported as out of range.
const RANGE_SLACK: f64 = 1e-6;

/// A probability as computed, and after clipping to its admissible range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    pub value: f64,
    pub raw: f64,
    pub error: f64,
}

impl Metric {
    fn checked(raw: f64, error: f64, lo: f64, hi: f64) -> Result<Self, AnalysisError> {
        if !(raw >= lo - RANGE_SLACK && raw <= hi + RANGE_SLACK) {
            return Err(AnalysisError::OutOfRange { value: raw, lo, hi });
        }
        Ok(Self {
            value: raw.clamp(lo, hi),
            raw,
            error,
        })
    }
}

fn evaluate(params: &FoxHParams) -> Result<(f64, f64), AnalysisError> {
    let contour = validate_contour(params)?;
    let e = eval_foxh(params, &contour, &EvalOptions::for_dimension(params.dimension()))?;
    Ok((e.value, e.error))
}

fn evaluate_many(params: &FoxHParams, args: Vec<Vec<f64>>) -> Result<Vec<Result<(f64, f64), AnalysisError>>, AnalysisError> {
    let contour = validate_contour_batch(params, &args, &ContourOptions::default())?;
    let opts = EvalOptions::for_dimension(params.dimension());
    Ok(eval_foxh_batch(params, &contour, &args, &opts)?
        .into_iter()
        .map(|r| r.map(|e| (e.value, e.error)).map_err(AnalysisError::from))
        .collect())
}

fn require_positive(name: &str, v: f64) -> Result<(), AnalysisError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(AnalysisError::InvalidInput(format!("{name} must be positive, got {v}")))
    }
}

/// Envelope level `√(γ/γ̄)` at which the SNR equals `γ`.
///
/// Every SNR threshold enters the envelope kernels through this map.
pub fn envelope_threshold(gamma: f64, gamma_bar: f64) -> f64 {
    (gamma / gamma_bar).sqrt()
}

/// Density of `|h₁||h₂|` without pointing or phase error.
pub fn double_fading_pdf(e: &ElementParams, x: f64) -> Result<f64, AnalysisError> {
    require_positive("x", x)?;
    Ok(evaluate(&double_fading_kernel(e, x)?)?.0 / x)
}

pub fn element_pdf(e: &ElementParams, x: f64) -> Result<f64, AnalysisError> {
    require_positive("x", x)?;
    Ok(evaluate(&element_pdf_kernel(e, x)?)?.0 / x)
}

/// Signed for the effective phase model with `q > 0`; see [`crate::montecarlo::Composition`].
pub fn element_cdf(e: &ElementParams, x: f64) -> Result<f64, AnalysisError> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    Ok(evaluate(&element_cdf_kernel(e, x)?)?.0)
}

/// `E[e^{-sZ_i}]`.
pub fn element_mgf(e: &ElementParams, s: f64) -> Result<f64, AnalysisError> {
    require_positive("s", s)?;
    Ok(evaluate(&element_mgf_kernel(e, s)?)?.0)
}

/// Density of the combined envelope `Z`.
pub fn sum_pdf(cfg: &RisLinkConfig, x: f64) -> Result<f64, AnalysisError> {
    require_positive("x", x)?;
    Ok(evaluate(&sum_pdf_kernel(cfg, x)?)?.0 / x)
}

/// `P(Z ≤ x)`, unclipped.
pub fn sum_cdf(cfg: &RisLinkConfig, x: f64) -> Result<f64, AnalysisError> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    Ok(evaluate(&outage_kernel(cfg, x)?)?.0)
}

/// `P(γ < γ_th)`.
pub fn outage_exact(cfg: &RisLinkConfig, gamma_th: f64, gamma_bar: f64) -> Result<f64, AnalysisError> {
    Ok(outage_exact_metric(cfg, gamma_th, gamma_bar)?.value)
}

pub fn outage_exact_metric(cfg: &RisLinkConfig, gamma_th: f64, gamma_bar: f64) -> Result<Metric, AnalysisError> {
    require_positive("gamma_th", gamma_th)?;
    require_positive("gamma_bar", gamma_bar)?;
    let (v, err) = evaluate(&outage_kernel(cfg, envelope_threshold(gamma_th, gamma_bar))?)?;
    Metric::checked(v, err, 0.0, 1.0)
}

/// Outage probability over a grid of `γ̄`, sharing one contour.
pub fn outage_exact_curve(
    cfg: &RisLinkConfig,
    gamma_th: f64,
    gamma_bars: &[f64],
) -> Result<Vec<Result<Metric, AnalysisError>>, AnalysisError> {
    require_positive("gamma_th", gamma_th)?;
    if gamma_bars.is_empty() {
        return Ok(Vec::new());
    }
    for g in gamma_bars {
        require_positive("gamma_bar", *g)?;
    }
    let args: Vec<Vec<f64>> = gamma_bars
        .iter()
        .map(|g| {
            let x = envelope_threshold(gamma_th, *g);
            cfg.elements.iter().map(|e| e.psi() * x).collect()
        })
        .collect();
    let params = outage_kernel(cfg, envelope_threshold(gamma_th, gamma_bars[0]))?;
    Ok(evaluate_many(&params, args)?
        .into_iter()
        .map(|r| r.and_then(|(v, err)| Metric::checked(v, err, 0.0, 1.0)))
        .collect())
}

fn outage_args(cfg: &RisLinkConfig, gamma_th: f64, gamma_bar: f64) -> Result<(FoxHParams, Vec<f64>), AnalysisError> {
    require_positive("gamma_th", gamma_th)?;
    require_positive("gamma_bar", gamma_bar)?;
    let params = outage_kernel(cfg, envelope_threshold(gamma_th, gamma_bar))?;
    let args = params.arguments().to_vec();
    Ok((params, args))
}

/// High-SNR outage from the simple dominant pole of each element.
pub fn outage_asymptotic(cfg: &RisLinkConfig, gamma_th: f64, gamma_bar: f64) -> Result<f64, AnalysisError> {
    let (params, args) = outage_args(cfg, gamma_th, gamma_bar)?;
    Ok(leading_residue(&params, &args)?)
}

/// High-SNR outage from the full residue at the dominant poles, valid for repeated poles.
pub fn outage_asymptotic_expansion(cfg: &RisLinkConfig, gamma_th: f64, gamma_bar: f64) -> Result<f64, AnalysisError> {
    let (params, args) = outage_args(cfg, gamma_th, gamma_bar)?;
    Ok(pole_expansion(&params, &args)?)
}

fn ber_args(cfg: &RisLinkConfig, m: &BerModParams, gamma_bar: f64) -> Result<(FoxHParams, f64), AnalysisError> {
    require_positive("gamma_bar", gamma_bar)?;
    Ok((ber_kernel(cfg, m, gamma_bar)?, 0.5 / gamma(m.p)))
}

/// Average error rate `E[Γ(p, qγ)/(2Γ(p))]`.
pub fn ber_exact(cfg: &RisLinkConfig, m: &BerModParams, gamma_bar: f64) -> Result<f64, AnalysisError> {
    Ok(ber_exact_metric(cfg, m, gamma_bar)?.value)
}

pub fn ber_exact_metric(cfg: &RisLinkConfig, m: &BerModParams, gamma_bar: f64) -> Result<Metric, AnalysisError> {
    let (params, pre) = ber_args(cfg, m, gamma_bar)?;
    let (v, err) = evaluate(&params)?;
    Metric::checked(pre * v, pre * err, 0.0, 0.5)
}

pub fn ber_exact_curve(
    cfg: &RisLinkConfig,
    m: &BerModParams,
    gamma_bars: &[f64],
) -> Result<Vec<Result<Metric, AnalysisError>>, AnalysisError> {
    if gamma_bars.is_empty() {
        return Ok(Vec::new());
    }
    for g in gamma_bars {
        require_positive("gamma_bar", *g)?;
    }
    let args: Vec<Vec<f64>> = gamma_bars
        .iter()
        .map(|g| {
            let s = 1.0 / (m.q_mod * g).sqrt();
            cfg.elements.iter().map(|e| e.psi() * s).collect()
        })
        .collect();
    let (params, pre) = ber_args(cfg, m, gamma_bars[0])?;
    Ok(evaluate_many(&params, args)?
        .into_iter()
        .map(|r| r.and_then(|(v, err)| Metric::checked(pre * v, pre * err, 0.0, 0.5)))
        .collect())
}

pub fn ber_asymptotic(cfg: &RisLinkConfig, m: &BerModParams, gamma_bar: f64) -> Result<f64, AnalysisError> {
    let (params, pre) = ber_args(cfg, m, gamma_bar)?;
    Ok(pre * leading_residue(&params, params.arguments())?)
}

pub fn ber_asymptotic_expansion(cfg: &RisLinkConfig, m: &BerModParams, gamma_bar: f64) -> Result<f64, AnalysisError> {
    let (params, pre) = ber_args(cfg, m, gamma_bar)?;
    Ok(pre * pole_expansion(&params, params.arguments())?)
}

/// `Σ_i p_i / 2`, the high-SNR slope of outage and error rate.
pub fn diversity_order(cfg: &RisLinkConfig) -> f64 {
    cfg.elements.iter().map(|e| e.fading_exponent() / 2.0).sum()
}

/// Error rate at fixed SNR `γ`: `Γ(p, qγ) / (2Γ(p))`.
pub fn conditional_ber(m: &BerModParams, gamma: f64) -> f64 {
    if gamma <= 0.0 {
        return 0.5;
    }
    0.5 * gamma_ur(m.p, m.q_mod * gamma)
}

/// Average error rate by direct integration against an SNR distribution function.
///
/// Evaluates `q^p/(2Γ(p)) ∫ γ^{p-1} e^{-qγ} F(γ) dγ` on Gauss–Legendre panels in
/// `log(qγ)`. `cdf` receives a batch of SNR values and returns `F` at each.
pub fn ber_from_cdf<F>(m: &BerModParams, mut cdf: F) -> Result<f64, AnalysisError>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>, AnalysisError>,
{
    let gl = GaussLegendre::new(16);
    let pre = 0.5 / gamma(m.p);
    let width = 0.5;
    let top = 60f64.ln();
    // F ≤ 1 bounds the tail below `t` by `e^{pt}/p`
    let floor = (1e-14 * m.p).ln() / m.p;
    let mut total = 0.0;
    let mut hi = top;
    let batch = 8;
    while hi > floor {
        let mut ts = Vec::with_capacity(batch * 16);
        let mut ws = Vec::with_capacity(batch * 16);
        for j in 0..batch {
            let b = hi - j as f64 * width;
            for (t, w) in gl.mapped(b - width, b) {
                ts.push(t);
                ws.push(w);
            }
        }
        let gammas: Vec<f64> = ts.iter().map(|t| t.exp() / m.q_mod).collect();
        let f = cdf(&gammas)?;
        if f.len() != gammas.len() {
            return Err(AnalysisError::InvalidInput("distribution function returned wrong length".into()));
        }
        let part: f64 = ts
            .iter()
            .zip(&ws)
            .zip(&f)
            .map(|((t, w), f)| w * (m.p * t - t.exp()).exp() * f)
            .sum::<f64>()
            * pre;
        total += part;
        hi -= batch as f64 * width;
        if total > 0.0 && part.abs() < 1e-12 * total {
            break;
        }
    }
    Ok(total)
}
