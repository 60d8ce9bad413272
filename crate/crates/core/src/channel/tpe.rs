use super::{require_positive, ChannelError};
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use statrs::function::gamma::{gamma_ur, ln_gamma};

/// A mixture weight below this fraction of the running sum counts as negligible.
pub const TAIL_TOLERANCE: f64 = 1e-8;
/// Allowed deviation of the total mixture weight from one.
pub const MIXTURE_SUM_TOLERANCE: f64 = 1e-4;

const MAX_SUGGESTED_ORDER: usize = 2000;

/// THz pointing-error gain on `[0, G₀]`.
///
/// The density is a mixture over `k = 0..=K` of the laws of
/// `G₀·exp(-β₁ T_k)`, `T_k ~ Gamma(k + 2, 1)`, with weights `C·Δ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TpeParams {
    betas: [f64; 4],
    g0: f64,
    series_order: usize,
    c: f64,
    gammas: Vec<f64>,
    deltas: Vec<f64>,
    weights: Vec<f64>,
}

/// `C` and `Δ_0..=Δ_K` for the given beam parameters.
fn series(betas: &[f64; 4], order: usize) -> (f64, Vec<f64>, Vec<f64>) {
    let b1 = betas[0];
    let c: f64 = betas.iter().map(|b| (b1 / b).sqrt()).product();
    let mut gammas = vec![0.0; order + 1];
    for (k, g) in gammas.iter_mut().enumerate().skip(1) {
        *g = betas.iter().map(|b| (1.0 - b1 / b).powi(k as i32)).sum::<f64>() / (2.0 * k as f64);
    }
    // Δ = exp(Σ γ_k z^k) coefficientwise
    let mut deltas = vec![0.0; order + 1];
    deltas[0] = 1.0;
    for k in 1..=order {
        let s: f64 = (1..=k).map(|j| j as f64 * gammas[j] * deltas[k - j]).sum();
        deltas[k] = s / k as f64;
    }
    (c, gammas, deltas)
}

impl TpeParams {
    pub fn new(betas: [f64; 4], g0: f64, series_order: usize) -> Result<Self, ChannelError> {
        for (j, b) in betas.iter().enumerate() {
            require_positive(&format!("beta_{}", j + 1), *b)?;
        }
        require_positive("g0", g0)?;
        let (c, gammas, deltas) = series(&betas, series_order);
        let weights = deltas.iter().map(|d| c * d).collect();
        Ok(Self {
            betas,
            g0,
            series_order,
            c,
            gammas,
            deltas,
            weights,
        })
    }

    /// All four beam parameters equal: a single `k = 0` component.
    pub fn symmetric(beta: f64, g0: f64) -> Result<Self, ChannelError> {
        Self::new([beta; 4], g0, 0)
    }

    /// Approximate pointing-error setting of the reference scenario:
    /// `β₁ = 1/12` with mildly asymmetric remaining beam parameters.
    pub fn reference() -> Self {
        Self::new([1.0 / 12.0, 1.0 / 11.0, 1.0 / 11.0, 1.0 / 10.0], 1.0, 10).expect("valid constants")
    }

    pub fn betas(&self) -> [f64; 4] {
        self.betas
    }

    pub fn beta1(&self) -> f64 {
        self.betas[0]
    }

    pub fn g0(&self) -> f64 {
        self.g0
    }

    pub fn series_order(&self) -> usize {
        self.series_order
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `γ_1..=γ_K` (index 0 unused).
    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    /// Mixture weights `C·Δ_k`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Weights must be nonnegative and sum to one within [`MIXTURE_SUM_TOLERANCE`].
    pub fn check_mixture(&self) -> Result<(), ChannelError> {
        if let Some((k, w)) = self.weights.iter().enumerate().find(|(_, w)| **w < -1e-15) {
            return Err(ChannelError::InvalidMixture {
                reason: format!("weight {k} is negative ({w:e})"),
                suggested_order: None,
            });
        }
        let m = self.mass();
        if (m - 1.0).abs() > MIXTURE_SUM_TOLERANCE {
            return Err(ChannelError::InvalidMixture {
                reason: format!("weights sum to {m}"),
                suggested_order: self.suggested_order(),
            });
        }
        Ok(())
    }

    /// Fails when the last retained weight exceeds [`TAIL_TOLERANCE`] of the total.
    pub fn check_tail(&self) -> Result<(), ChannelError> {
        self.check_mixture()?;
        let last = *self.weights.last().unwrap();
        if last.abs() > TAIL_TOLERANCE * self.mass() {
            return Err(ChannelError::InvalidMixture {
                reason: format!("last series term carries {:.2e} of the mass", last / self.mass()),
                suggested_order: self.suggested_order(),
            });
        }
        Ok(())
    }

    /// Smallest order passing both the sum and tail tests, if any up to a cap.
    pub fn suggested_order(&self) -> Option<usize> {
        let (c, _, deltas) = series(&self.betas, MAX_SUGGESTED_ORDER);
        let mut sum = 0.0;
        for (k, d) in deltas.iter().enumerate() {
            let w = c * d;
            if w < -1e-15 {
                return None;
            }
            sum += w;
            if (sum - 1.0).abs() <= MIXTURE_SUM_TOLERANCE && w <= TAIL_TOLERANCE * sum {
                return Some(k);
            }
        }
        None
    }

    pub fn pdf(&self, x: f64) -> Result<f64, ChannelError> {
        tpe_pdf(self, x)
    }

    pub fn cdf(&self, x: f64) -> Result<f64, ChannelError> {
        tpe_cdf(self, x)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64, ChannelError> {
        tpe_sample(self, rng)
    }

    /// `E[h_p^s] = Σ_k C Δ_k G₀^s (1 + β₁ s)^{-(k+2)}` for `s > -1/β₁`.
    pub fn moment(&self, s: f64) -> f64 {
        let b = self.beta1();
        self.weights
            .iter()
            .enumerate()
            .map(|(k, w)| w * (1.0 + b * s).powi(-(k as i32 + 2)))
            .sum::<f64>()
            * self.g0.powf(s)
    }
}

fn check_support(p: &TpeParams, x: f64) -> Result<(), ChannelError> {
    if !(0.0..=p.g0).contains(&x) {
        return Err(ChannelError::DomainError { x, lo: 0.0, hi: p.g0 });
    }
    Ok(())
}

pub fn tpe_pdf(p: &TpeParams, x: f64) -> Result<f64, ChannelError> {
    check_support(p, x)?;
    let b = p.beta1();
    if x == 0.0 {
        return Ok(if 1.0 / b > 1.0 { 0.0 } else { f64::INFINITY });
    }
    let l = -(x / p.g0).ln();
    if l == 0.0 {
        return Ok(0.0);
    }
    // ln of x^{1/β-1} / G₀^{1/β}
    let base = (1.0 / b - 1.0) * x.ln() - p.g0.ln() / b;
    let mut total = 0.0;
    for (k, w) in p.weights.iter().enumerate() {
        let kf = k as f64;
        let ln_term = base + (kf + 1.0) * l.ln() - ln_gamma(kf + 2.0) - (kf + 2.0) * b.ln();
        total += w * ln_term.exp();
    }
    Ok(total)
}

pub fn tpe_cdf(p: &TpeParams, x: f64) -> Result<f64, ChannelError> {
    check_support(p, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let t = -(x / p.g0).ln() / p.beta1();
    Ok(p.weights
        .iter()
        .enumerate()
        .map(|(k, w)| if t == 0.0 { *w } else { w * gamma_ur(k as f64 + 2.0, t) })
        .sum())
}

/// `G₀·exp(-β₁ T)` with `T ~ Gamma(k + 2, 1)` and `k` drawn from the weights.
pub fn tpe_sample<R: Rng + ?Sized>(p: &TpeParams, rng: &mut R) -> Result<f64, ChannelError> {
    p.check_mixture()?;
    let k = sample_order(p, rng);
    let t = Gamma::new(k as f64 + 2.0, 1.0).expect("positive shape").sample(rng);
    Ok(p.g0 * (-p.beta1() * t).exp())
}

/// Mixture component `k` with probability `w_k / Σ w`; weights must be non-negative.
pub(crate) fn sample_order<R: Rng + ?Sized>(p: &TpeParams, rng: &mut R) -> usize {
    if p.weights.len() == 1 {
        return 0;
    }
    let u: f64 = rng.random::<f64>() * p.mass();
    let mut acc = 0.0;
    for (k, w) in p.weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return k;
        }
    }
    p.weights.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::ks_statistic;
    use crate::quadrature::adaptive;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mass_by_quadrature(p: &TpeParams) -> f64 {
        // integrate in u = -ln(x/G₀) to resolve the endpoint behavior
        adaptive(
            |u: f64| {
                let x = p.g0() * (-u).exp();
                p.pdf(x).unwrap() * x
            },
            0.0,
            80.0 * p.beta1(),
            1e-12,
            1e-15,
        )
        .value
    }

    #[test]
    fn symmetric_beam_collapses() {
        let b = 0.2;
        let p = TpeParams::symmetric(b, 2.0).unwrap();
        assert_eq!(p.deltas(), &[1.0]);
        assert_eq!(p.c(), 1.0);
        let x: f64 = 0.7;
        let want = x.powf(1.0 / b - 1.0) * (-(x / 2.0).ln()) / (b * b * 2.0f64.powf(1.0 / b));
        assert!((p.pdf(x).unwrap() - want).abs() < 1e-14 * want);
        assert_eq!(p.pdf(2.0).unwrap(), 0.0);
        assert!(p.pdf(2.1).is_err());
    }

    #[test]
    fn recursion_matches_generating_function() {
        // Σ Δ_k z^k = Π_j (1 - r_j z)^{-1/2}; here r = (0, 1/2, 1/2, 0) gives (1 - z/2)^{-1}
        let p = TpeParams::new([1.0, 2.0, 2.0, 1.0], 1.0, 12).unwrap();
        for (k, d) in p.deltas().iter().enumerate() {
            assert!((d - 0.5f64.powi(k as i32)).abs() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn reference_mixture_normalizes() {
        let p = TpeParams::reference();
        p.check_tail().unwrap();
        assert!((p.mass() - 1.0).abs() < 1e-6);
        assert!((mass_by_quadrature(&p) - 1.0).abs() < 1e-6);
        assert!((p.cdf(1.0).unwrap() - p.mass()).abs() < 1e-15);
    }

    #[test]
    fn short_series_is_flagged() {
        let p = TpeParams::new([0.1, 0.5, 0.7, 1.0], 1.0, 2).unwrap();
        match p.check_tail() {
            Err(ChannelError::InvalidMixture { suggested_order: Some(k), .. }) => {
                assert!(k > 2);
                TpeParams::new([0.1, 0.5, 0.7, 1.0], 1.0, k).unwrap().check_tail().unwrap();
            }
            other => panic!("{other:?}"),
        }
        // β₁ much larger than the rest makes the series alternate and diverge
        let bad = TpeParams::new([1.0, 0.1, 0.1, 0.1], 1.0, 8).unwrap();
        assert!(bad.check_mixture().is_err());
        assert!(bad.sample(&mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn sampler_matches_cdf() {
        let p = TpeParams::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut xs: Vec<f64> = (0..100_000).map(|_| p.sample(&mut rng).unwrap()).collect();
        assert!(xs.iter().all(|x| *x > 0.0 && *x <= 1.0));
        assert!(ks_statistic(&mut xs, |x| p.cdf(x).unwrap()) < 0.006);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - p.moment(1.0)).abs() < 0.01 * p.moment(1.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]
        #[test]
        fn mass_grows_with_order(b1 in 0.05f64..0.5, r2 in 0.0f64..0.6, r3 in 0.0f64..0.6, r4 in 0.0f64..0.6) {
            let betas = [b1, b1 / (1.0 - r2), b1 / (1.0 - r3), b1 / (1.0 - r4)];
            let mut last = 0.0;
            for k in 0..12 {
                let m = TpeParams::new(betas, 1.0, k).unwrap().mass();
                prop_assert!(m >= last);
                last = m;
            }
            prop_assert!(last <= 1.0 + 1e-12);
        }
    }
}
