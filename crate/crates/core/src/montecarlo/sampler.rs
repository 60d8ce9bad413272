use super::{Composition, McError};
use crate::analysis::RisLinkConfig;
use crate::channel::{sample_order, AlphaMuParams, TpeParams};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use std::f64::consts::PI;

/// Change of measure for rare-event estimation.
///
/// Each hop gamma variate is drawn from an equal mixture of gamma laws whose
/// scales run geometrically from one down to `fading_scale ≤ 1`, and each
/// pointing variate likewise up to `pointing_scale ≥ 1`; both push mass
/// towards deep fades. The mixture has about one member per decade of scale,
/// and the unit-scale member bounds each variate's likelihood ratio by the
/// number of members.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tilt {
    pub fading_scale: f64,
    pub pointing_scale: f64,
}

impl Tilt {
    pub const NONE: Self = Self {
        fading_scale: 1.0,
        pointing_scale: 1.0,
    };

    pub fn new(fading_scale: f64, pointing_scale: f64) -> Result<Self, McError> {
        if !(fading_scale > 0.0 && fading_scale <= 1.0) || !(pointing_scale >= 1.0 && pointing_scale.is_finite()) {
            return Err(McError::InvalidInput(format!(
                "tilt needs fading_scale in (0, 1] and pointing_scale >= 1, got {fading_scale}, {pointing_scale}"
            )));
        }
        Ok(Self {
            fading_scale,
            pointing_scale,
        })
    }

    pub fn is_none(&self) -> bool {
        *self == Self::NONE
    }
}

impl Default for Tilt {
    fn default() -> Self {
        Self::NONE
    }
}

/// Gamma laws with scales `scale^{m/(L-1)}`, `m = 0..L`, about one per decade.
#[derive(Debug, Clone)]
struct Ladder {
    laws: Vec<Gamma<f64>>,
    inv_scales: Vec<f64>,
    ln_norms: Vec<f64>,
}

impl Ladder {
    fn new(shape: f64, scale: f64) -> Self {
        let levels = if scale == 1.0 { 1 } else { 2 + scale.log10().abs().floor() as usize };
        let scales: Vec<f64> = (0..levels)
            .map(|m| if levels == 1 { 1.0 } else { scale.powf(m as f64 / (levels - 1) as f64) })
            .collect();
        Self {
            laws: scales.iter().map(|&t| Gamma::new(shape, t).expect("positive shape")).collect(),
            inv_scales: scales.iter().map(|t| 1.0 / t).collect(),
            ln_norms: scales.iter().map(|t| -shape * t.ln()).collect(),
        }
    }

    /// Draws from the equal-weight mixture and adds `ln(plain / mixture)` at the draw to `log_w`.
    #[inline]
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R, log_w: &mut f64) -> f64 {
        let levels = self.laws.len();
        if levels == 1 {
            return self.laws[0].sample(rng);
        }
        let g = self.laws[rng.random_range(0..levels)].sample(rng);
        // mixture over plain density, relative to the deepest term for stability
        let ln_terms = |m: usize| self.ln_norms[m] - g * (self.inv_scales[m] - 1.0);
        let top = (0..levels).map(ln_terms).fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = (0..levels).map(|m| (ln_terms(m) - top).exp()).sum();
        *log_w -= top + (sum / levels as f64).ln();
        g
    }
}

#[derive(Debug, Clone)]
struct Hop {
    omega: f64,
    mu: f64,
    inv_alpha: f64,
    gamma: Ladder,
}

impl Hop {
    fn new(p: &AlphaMuParams, scale: f64) -> Self {
        Self {
            omega: p.omega(),
            mu: p.mu(),
            inv_alpha: 1.0 / p.alpha(),
            gamma: Ladder::new(p.mu(), scale),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R, log_w: &mut f64) -> f64 {
        let g = self.gamma.draw(rng, log_w);
        self.omega * (g / self.mu).powf(self.inv_alpha)
    }
}

#[derive(Debug, Clone)]
struct Pointing {
    params: TpeParams,
    orders: Vec<Ladder>,
}

impl Pointing {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R, log_w: &mut f64) -> f64 {
        let k = sample_order(&self.params, rng);
        let t = self.orders[k].draw(rng, log_w);
        self.params.g0() * (-self.params.beta1() * t).exp()
    }
}

#[derive(Debug, Clone)]
struct Element {
    hop1: Hop,
    hop2: Hop,
    pointing: Option<Pointing>,
    q: f64,
}

/// Draws received envelopes for one configuration.
#[derive(Debug, Clone)]
pub struct Sampler {
    elements: Vec<Element>,
    mode: Composition,
    tilt: Tilt,
}

impl Sampler {
    /// Fails on a pointing-error mixture that is not a probability distribution.
    pub fn new(cfg: &RisLinkConfig, mode: Composition, tilt: Tilt) -> Result<Self, McError> {
        let mut elements = Vec::with_capacity(cfg.len());
        for e in &cfg.elements {
            let pointing = match &e.tpe {
                Some(t) => {
                    t.check_mixture()?;
                    Some(Pointing {
                        params: t.clone(),
                        orders: (0..t.weights().len())
                            .map(|k| Ladder::new(k as f64 + 2.0, tilt.pointing_scale))
                            .collect(),
                    })
                }
                None => None,
            };
            elements.push(Element {
                hop1: Hop::new(&e.hop1, tilt.fading_scale),
                hop2: Hop::new(&e.hop2, tilt.fading_scale),
                pointing,
                q: e.phase.q(),
            });
        }
        Ok(Self { elements, mode, tilt })
    }

    pub fn mode(&self) -> Composition {
        self.mode
    }

    pub fn tilt(&self) -> Tilt {
        self.tilt
    }

    /// One envelope `|Z|` and the log likelihood ratio of the draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let mut log_w = 0.0;
        let mut acc = Complex64::new(0.0, 0.0);
        for e in &self.elements {
            let mut z = e.hop1.draw(rng, &mut log_w) * e.hop2.draw(rng, &mut log_w);
            if let Some(p) = &e.pointing {
                z *= p.draw(rng, &mut log_w);
            }
            if e.q == 0.0 {
                acc.re += z;
                continue;
            }
            let theta = e.q * PI * (2.0 * rng.random::<f64>() - 1.0);
            match self.mode {
                Composition::ComplexSum => acc += Complex64::from_polar(z, theta),
                Composition::RealEffective => acc.re += z * theta.cos(),
            }
        }
        (acc.norm(), log_w)
    }
}

/// One draw of the received envelope `|Z|`, without tilting.
pub fn simulate_envelope<R: Rng + ?Sized>(cfg: &RisLinkConfig, mode: Composition, rng: &mut R) -> Result<f64, McError> {
    Ok(Sampler::new(cfg, mode, Tilt::NONE)?.draw(rng).0)
}

/// One draw of the instantaneous SNR `γ̄ |Z|²`.
pub fn simulate_snr<R: Rng + ?Sized>(
    cfg: &RisLinkConfig,
    gamma_bar: f64,
    mode: Composition,
    rng: &mut R,
) -> Result<f64, McError> {
    let z = simulate_envelope(cfg, mode, rng)?;
    Ok(gamma_bar * z * z)
}
