//! TOML schema of a run configuration.
//!
//! Decibel quantities are converted to linear units here and nowhere else.

use super::CliError;
use crate::analysis::{BerModParams, ElementParams, RisLinkConfig};
use crate::channel::{AlphaMuParams, LinkBudget, PhaseNoiseParams, TpeParams};
use crate::montecarlo::Composition;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

pub const MAX_SWEEP_POINTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Outage,
    Ber,
}

impl MetricKind {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Outage => "outage",
            Self::Ber => "ber",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Asymptotic,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Transmit power in dBm, mapped to `γ̄` by the link budget.
    PtDbm,
    /// Average SNR `γ̄` in dB.
    SnrDb,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepConfig {
    /// Axis values from `start` to `stop` inclusive.
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        let bad = |m: String| CliError::Config {
            path: "sweep".into(),
            message: m,
        };
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(bad("start, stop and step must be finite".into()));
        }
        if self.step <= 0.0 {
            return Err(bad(format!("step must be positive, got {}", self.step)));
        }
        if self.stop < self.start {
            return Err(bad(format!("empty range: stop {} is below start {}", self.stop, self.start)));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        if n > MAX_SWEEP_POINTS {
            return Err(bad(format!("{n} points exceed the limit of {MAX_SWEEP_POINTS}")));
        }
        Ok((0..n).map(|i| self.start + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopConfig {
    pub alpha: f64,
    pub mu: f64,
    #[serde(default = "one")]
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TpeConfig {
    pub betas: [f64; 4],
    #[serde(default = "one")]
    pub g0: f64,
    #[serde(default = "default_series_order")]
    pub series_order: usize,
}

/// Every element gets the same parameters; `hop2` defaults to the first hop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementsConfig {
    pub count: usize,
    pub alpha: f64,
    pub mu: f64,
    #[serde(default = "one")]
    pub omega: f64,
    #[serde(default)]
    pub hop2: Option<HopConfig>,
    /// Phase error half-width as a fraction of π.
    #[serde(default)]
    pub q: Option<f64>,
    /// Quantizer resolution; sets `q = 2^-bits`.
    #[serde(default)]
    pub phase_bits: Option<u32>,
    #[serde(default)]
    pub tpe: Option<TpeConfig>,
}

impl ElementsConfig {
    pub fn hop1(&self) -> HopConfig {
        HopConfig {
            alpha: self.alpha,
            mu: self.mu,
            omega: self.omega,
        }
    }

    pub fn hop2(&self) -> HopConfig {
        self.hop2.clone().unwrap_or_else(|| self.hop1())
    }

    pub fn phase_q(&self) -> Result<f64, CliError> {
        match (self.q, self.phase_bits) {
            (Some(_), Some(_)) => Err(CliError::Config {
                path: "elements".into(),
                message: "set either q or phase_bits, not both".into(),
            }),
            (Some(q), None) => Ok(q),
            (None, Some(b)) => Ok(PhaseNoiseParams::from_bits(b).q()),
            (None, None) => Ok(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    #[serde(default = "default_carrier")]
    pub carrier_ghz: f64,
    #[serde(default = "default_gain")]
    pub gain_tx_dbi: f64,
    #[serde(default = "default_gain")]
    pub gain_rx_dbi: f64,
    #[serde(default = "default_d1")]
    pub d1_m: f64,
    #[serde(default = "default_d2")]
    pub d2_m: f64,
    #[serde(default = "default_absorption")]
    pub absorption_per_m: f64,
    #[serde(default = "default_noise")]
    pub noise_dbm: f64,
    #[serde(default = "default_bandwidth")]
    pub bandwidth_ghz: f64,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self {
            carrier_ghz: default_carrier(),
            gain_tx_dbi: default_gain(),
            gain_rx_dbi: default_gain(),
            d1_m: default_d1(),
            d2_m: default_d2(),
            absorption_per_m: default_absorption(),
            noise_dbm: default_noise(),
            bandwidth_ghz: default_bandwidth(),
        }
    }
}

impl BudgetConfig {
    pub fn to_budget(&self) -> LinkBudget {
        LinkBudget {
            carrier_hz: self.carrier_ghz * 1e9,
            gain_tx: db_to_linear(self.gain_tx_dbi),
            gain_rx: db_to_linear(self.gain_rx_dbi),
            d1_m: self.d1_m,
            d2_m: self.d2_m,
            absorption_per_m: self.absorption_per_m,
            noise_w: dbm_to_watts(self.noise_dbm),
            bandwidth_hz: self.bandwidth_ghz * 1e9,
        }
    }
}

/// A named preset or explicit `(p, q)` constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModulationConfig {
    Named(String),
    Custom { p: f64, q: f64 },
}

impl Default for ModulationConfig {
    fn default() -> Self {
        Self::Named("bpsk".into())
    }
}

impl ModulationConfig {
    pub fn resolve(&self) -> Result<BerModParams, CliError> {
        let err = |m: String| CliError::Config {
            path: "modulation".into(),
            message: m,
        };
        match self {
            Self::Named(n) => BerModParams::preset(n).ok_or_else(|| {
                err(format!(
                    "unknown modulation {n:?}, expected one of {}",
                    BerModParams::PRESET_NAMES.join(", ")
                ))
            }),
            Self::Custom { p, q } => BerModParams::new(*p, *q).map_err(|e| err(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_mode")]
    pub mode: String,
    /// Grow outage trials per point until the CI half-width is 10% of the estimate.
    #[serde(default)]
    pub adaptive: bool,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            trials: default_trials(),
            mode: default_mode(),
            adaptive: false,
            confidence: default_confidence(),
        }
    }
}

impl McConfig {
    pub fn composition(&self) -> Result<Composition, CliError> {
        self.mode.parse().map_err(|e: crate::montecarlo::McError| CliError::Config {
            path: "mc.mode".into(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    pub elements: ElementsConfig,
    #[serde(default)]
    pub budget: BudgetConfig,
    pub sweep: SweepConfig,
    pub metrics: Vec<MetricKind>,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub gamma_th_db: f64,
    #[serde(default)]
    pub modulation: ModulationConfig,
    #[serde(default)]
    pub mc: McConfig,
    /// Output directory; CSV files and the manifest are named after the scenario.
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let de = toml::Deserializer::parse(text).map_err(|e| CliError::Config {
            path: String::new(),
            message: e.to_string(),
        })?;
        serde_path_to_error::deserialize(de).map_err(|e| CliError::Config {
            path: e.path().to_string(),
            message: e.inner().message().to_string(),
        })
    }

    pub fn gamma_th(&self) -> f64 {
        db_to_linear(self.gamma_th_db)
    }

    /// Average SNR at each sweep point.
    pub fn gamma_bars(&self, budget: &LinkBudget) -> Result<Vec<f64>, CliError> {
        Ok(self
            .sweep
            .points()?
            .into_iter()
            .map(|v| match self.sweep.axis {
                Axis::PtDbm => budget.average_snr(dbm_to_watts(v)),
                Axis::SnrDb => db_to_linear(v),
            })
            .collect())
    }

    /// Typed link configuration; fails on the first invalid parameter.
    pub fn link(&self) -> Result<RisLinkConfig, CliError> {
        let e = &self.elements;
        let err = |path: &str, m: String| CliError::Config {
            path: path.into(),
            message: m,
        };
        if e.count == 0 {
            return Err(err("elements.count", "at least one element is required".into()));
        }
        let hop = |h: &HopConfig, path: &str| {
            AlphaMuParams::new(h.alpha, h.mu, h.omega).map_err(|x| err(path, x.to_string()))
        };
        let hop1 = hop(&e.hop1(), "elements")?;
        let hop2 = hop(&e.hop2(), "elements.hop2")?;
        let tpe = match &e.tpe {
            Some(t) => Some(TpeParams::new(t.betas, t.g0, t.series_order).map_err(|x| err("elements.tpe", x.to_string()))?),
            None => None,
        };
        let phase = PhaseNoiseParams::new(e.phase_q()?).map_err(|x| err("elements.q", x.to_string()))?;
        let element = ElementParams::new(hop1, hop2, tpe, phase);
        RisLinkConfig::identical(element, e.count, self.budget.to_budget()).map_err(|x| err("budget", x.to_string()))
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

fn one() -> f64 {
    1.0
}
fn default_series_order() -> usize {
    10
}
fn default_carrier() -> f64 {
    300.0
}
fn default_gain() -> f64 {
    40.0
}
fn default_d1() -> f64 {
    20.0
}
fn default_d2() -> f64 {
    50.0
}
fn default_absorption() -> f64 {
    3.18e-4
}
fn default_noise() -> f64 {
    -74.0
}
fn default_bandwidth() -> f64 {
    10.0
}
fn default_seed() -> u64 {
    1
}
fn default_trials() -> u64 {
    1_000_000
}
fn default_mode() -> String {
    Composition::ComplexSum.label().into()
}
fn default_confidence() -> f64 {
    0.99
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}
