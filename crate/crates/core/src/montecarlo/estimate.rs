use super::{
    normal_quantile, wilson_interval, Composition, McError, McEstimate, Sampler, Tilt, CHUNK_TRIALS, MAX_TRIALS,
    MIN_BER_TRIALS, MIN_OUTAGE_TRIALS,
};
use crate::analysis::{conditional_ber, BerModParams, RisLinkConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Confidence level and change of measure of an estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub confidence: f64,
    pub tilt: Tilt,
}

impl Default for McOptions {
    fn default() -> Self {
        Self {
            confidence: 0.99,
            tilt: Tilt::NONE,
        }
    }
}

/// Trial budgeting for [`adaptive_outage`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    /// Target CI half-width relative to the estimate.
    pub rel_half_width: f64,
    pub initial_trials: u64,
    pub max_trials: u64,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            rel_half_width: 0.1,
            initial_trials: 1 << 17,
            max_trials: MAX_TRIALS,
        }
    }
}

/// Running sums of one estimated quantity.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Acc {
    hits: u64,
    sum: f64,
    sum_sq: f64,
}

impl Acc {
    #[inline]
    fn add(&mut self, x: f64) {
        if x != 0.0 {
            self.hits += 1;
        }
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, o: &Acc) {
        self.hits += o.hits;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
    }
}

/// Runs `trials` draws as chunks `first_chunk..`, calling `body` per draw.
fn run_chunks<F>(trials: u64, first_chunk: u64, seed: u64, width: usize, body: F) -> Vec<Acc>
where
    F: Fn(&mut ChaCha8Rng, &mut [Acc]) + Sync,
{
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let parts: Vec<Vec<Acc>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(first_chunk + c);
            let n = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
            let mut acc = vec![Acc::default(); width];
            for _ in 0..n {
                body(&mut rng, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![Acc::default(); width];
    for p in &parts {
        for (t, a) in total.iter_mut().zip(p) {
            t.merge(a);
        }
    }
    total
}

/// Indicator estimates use the Wilson interval; weighted ones a normal interval on the sample mean.
fn finish(acc: &Acc, trials: u64, binomial: bool, confidence: f64, seed: u64) -> McEstimate {
    let n = trials as f64;
    let mean = acc.sum / n;
    let (lo, hi) = if binomial {
        wilson_interval(acc.hits, trials, confidence)
    } else {
        let var = ((acc.sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
        let half = normal_quantile(confidence) * (var / n).sqrt();
        ((mean - half).max(0.0), mean + half)
    };
    McEstimate {
        estimate: mean,
        trials,
        ci_low: lo.min(mean),
        ci_high: hi.max(mean),
        confidence,
        seed,
    }
}

fn check_options(opts: &McOptions) -> Result<(), McError> {
    if !(opts.confidence > 0.0 && opts.confidence < 1.0) {
        return Err(McError::InvalidInput(format!("confidence must lie in (0, 1), got {}", opts.confidence)));
    }
    Ok(())
}

fn check_trials(trials: u64, required: u64) -> Result<(), McError> {
    if trials < required {
        return Err(McError::TooFewTrials { required, got: trials });
    }
    if trials > MAX_TRIALS {
        return Err(McError::InvalidInput(format!("{trials} trials exceed the cap of {MAX_TRIALS}")));
    }
    Ok(())
}

fn check_positive(name: &str, values: &[f64], allow_zero: bool) -> Result<(), McError> {
    for v in values {
        let ok = v.is_finite() && (*v > 0.0 || (allow_zero && *v == 0.0));
        if !ok {
            return Err(McError::InvalidInput(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}

/// Outage probabilities `P(γ̄|Z|² ≤ γ_th)` at every `γ̄`, from one set of draws.
pub fn outage_curve(
    cfg: &RisLinkConfig,
    gamma_th: f64,
    gamma_bars: &[f64],
    trials: u64,
    mode: Composition,
    seed: u64,
    opts: &McOptions,
) -> Result<Vec<McEstimate>, McError> {
    check_trials(trials, MIN_OUTAGE_TRIALS)?;
    check_options(opts)?;
    check_positive("gamma_th", &[gamma_th], true)?;
    check_positive("gamma_bar", gamma_bars, false)?;
    let sampler = Sampler::new(cfg, mode, opts.tilt)?;
    let thresholds: Vec<f64> = gamma_bars.iter().map(|g| gamma_th / g).collect();
    let weighted = !opts.tilt.is_none();
    let acc = outage_chunks(&sampler, &thresholds, trials, 0, seed, weighted);
    Ok(acc.iter().map(|a| finish(a, trials, !weighted, opts.confidence, seed)).collect())
}

fn outage_chunks(sampler: &Sampler, thresholds: &[f64], trials: u64, first: u64, seed: u64, weighted: bool) -> Vec<Acc> {
    run_chunks(trials, first, seed, thresholds.len(), |rng, acc| {
        let (z, log_w) = sampler.draw(rng);
        let z2 = z * z;
        let w = if weighted { log_w.exp() } else { 1.0 };
        for (a, t) in acc.iter_mut().zip(thresholds) {
            a.add(if z2 <= *t { w } else { 0.0 });
        }
    })
}

pub fn estimate_outage(
    cfg: &RisLinkConfig,
    gamma_th: f64,
    gamma_bar: f64,
    trials: u64,
    mode: Composition,
    seed: u64,
) -> Result<McEstimate, McError> {
    estimate_outage_with(cfg, gamma_th, gamma_bar, trials, mode, seed, &McOptions::default())
}

pub fn estimate_outage_with(
    cfg: &RisLinkConfig,
    gamma_th: f64,
    gamma_bar: f64,
    trials: u64,
    mode: Composition,
    seed: u64,
    opts: &McOptions,
) -> Result<McEstimate, McError> {
    Ok(outage_curve(cfg, gamma_th, &[gamma_bar], trials, mode, seed, opts)?[0])
}

/// Keeps doubling the trial count until the CI half-width is within the target or the cap is hit.
///
/// Earlier chunks are reused, so the result equals a single run at the final count.
pub fn adaptive_outage(
    cfg: &RisLinkConfig,
    gamma_th: f64,
    gamma_bar: f64,
    mode: Composition,
    seed: u64,
    opts: &McOptions,
    budget: &AdaptiveOptions,
) -> Result<McEstimate, McError> {
    check_options(opts)?;
    check_positive("gamma_th", &[gamma_th], true)?;
    check_positive("gamma_bar", &[gamma_bar], false)?;
    let max = budget.max_trials.min(MAX_TRIALS);
    let mut trials = budget.initial_trials.max(MIN_OUTAGE_TRIALS).div_ceil(CHUNK_TRIALS) * CHUNK_TRIALS;
    let sampler = Sampler::new(cfg, mode, opts.tilt)?;
    let weighted = !opts.tilt.is_none();
    let t = [gamma_th / gamma_bar];
    let mut acc = outage_chunks(&sampler, &t, trials.min(max), 0, seed, weighted)[0];
    loop {
        let done = trials.min(max);
        let est = finish(&acc, done, !weighted, opts.confidence, seed);
        let ok = est.estimate > 0.0 && est.half_width() <= budget.rel_half_width * est.estimate;
        if ok || done >= max {
            return Ok(est);
        }
        let next = (2 * trials).min(max);
        let more = outage_chunks(&sampler, &t, next - done, done / CHUNK_TRIALS, seed, weighted)[0];
        acc.merge(&more);
        trials = next;
    }
}

/// Error rates `E[P_b(γ̄|Z|²)]` at every `γ̄`, averaging the conditional error probability.
pub fn ber_curve(
    cfg: &RisLinkConfig,
    m: &BerModParams,
    gamma_bars: &[f64],
    trials: u64,
    mode: Composition,
    seed: u64,
    opts: &McOptions,
) -> Result<Vec<McEstimate>, McError> {
    check_trials(trials, MIN_BER_TRIALS)?;
    check_options(opts)?;
    check_positive("gamma_bar", gamma_bars, false)?;
    let sampler = Sampler::new(cfg, mode, opts.tilt)?;
    let weighted = !opts.tilt.is_none();
    let acc = run_chunks(trials, 0, seed, gamma_bars.len(), |rng, acc| {
        let (z, log_w) = sampler.draw(rng);
        let z2 = z * z;
        let w = if weighted { log_w.exp() } else { 1.0 };
        for (a, g) in acc.iter_mut().zip(gamma_bars) {
            a.add(w * conditional_ber(m, g * z2));
        }
    });
    Ok(acc.iter().map(|a| finish(a, trials, false, opts.confidence, seed)).collect())
}

pub fn estimate_ber(
    cfg: &RisLinkConfig,
    m: &BerModParams,
    gamma_bar: f64,
    trials: u64,
    mode: Composition,
    seed: u64,
) -> Result<McEstimate, McError> {
    estimate_ber_with(cfg, m, gamma_bar, trials, mode, seed, &McOptions::default())
}

pub fn estimate_ber_with(
    cfg: &RisLinkConfig,
    m: &BerModParams,
    gamma_bar: f64,
    trials: u64,
    mode: Composition,
    seed: u64,
    opts: &McOptions,
) -> Result<McEstimate, McError> {
    Ok(ber_curve(cfg, m, &[gamma_bar], trials, mode, seed, opts)?[0])
}

/// Bit-level simulation for the coherent kernels `p = 1/2`: one antipodal bit per channel draw,
/// detected in unit-variance Gaussian noise at amplitude `√(2 q_mod γ)`.
pub fn estimate_ber_bits(
    cfg: &RisLinkConfig,
    m: &BerModParams,
    gamma_bar: f64,
    bits: u64,
    mode: Composition,
    seed: u64,
) -> Result<McEstimate, McError> {
    if m.p != 0.5 {
        return Err(McError::InvalidInput(format!(
            "bit-level simulation needs a coherent kernel with p = 1/2, got p = {}",
            m.p
        )));
    }
    check_trials(bits, MIN_BER_TRIALS)?;
    check_positive("gamma_bar", &[gamma_bar], false)?;
    let sampler = Sampler::new(cfg, mode, Tilt::NONE)?;
    let acc = run_chunks(bits, 0, seed, 1, |rng, acc| {
        let (z, _) = sampler.draw(rng);
        let amp = (2.0 * m.q_mod * gamma_bar).sqrt() * z;
        let n: f64 = StandardNormal.sample(rng);
        acc[0].add(if amp + n < 0.0 { 1.0 } else { 0.0 });
    });
    Ok(finish(&acc[0], bits, true, 0.99, seed))
}

/// Deepest fading scales tried: `10^{-k}`, `k = 0..=20`.
const FADING_DECADES: i32 = 20;
const POINTING_SCALES: [f64; 6] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];

/// Picks the tilt with the smallest relative variance on short pilot runs.
///
/// Pilots use chunk streams disjoint from the main run's low streams.
pub fn choose_tilt(
    cfg: &RisLinkConfig,
    gamma_th: f64,
    gamma_bar: f64,
    mode: Composition,
    seed: u64,
    pilot_trials: u64,
) -> Result<Tilt, McError> {
    check_positive("gamma_bar", &[gamma_bar], false)?;
    check_positive("gamma_th", &[gamma_th], false)?;
    let has_tpe = cfg.elements.iter().any(|e| e.tpe.is_some());
    let pointing: &[f64] = if has_tpe { &POINTING_SCALES } else { &[1.0] };
    let t = [gamma_th / gamma_bar];
    let mut best = (Tilt::NONE, f64::INFINITY);
    for i in 0..=FADING_DECADES as usize {
        let fs = 10f64.powi(-(i as i32));
        for (j, &ps) in pointing.iter().enumerate() {
            let tilt = Tilt::new(fs, ps)?;
            let sampler = Sampler::new(cfg, mode, tilt)?;
            let stream = (1 << 40) + ((i * POINTING_SCALES.len() + j) as u64) * (1 << 20);
            let a = outage_chunks(&sampler, &t, pilot_trials, stream, seed, true)[0];
            if a.hits < 50 {
                continue;
            }
            let n = pilot_trials as f64;
            let mean = a.sum / n;
            let rel = (a.sum_sq / n - mean * mean) / (mean * mean);
            if rel < best.1 {
                best = (tilt, rel);
            }
        }
    }
    Ok(best.0)
}
