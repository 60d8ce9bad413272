use super::{require_positive, ChannelError};
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use statrs::function::gamma::{gamma_lr, ln_gamma};

/// α-μ envelope. `omega` is the α-root mean value, `E[X^α] = Ω^α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaMuParams {
    alpha: f64,
    mu: f64,
    omega: f64,
}

impl AlphaMuParams {
    pub fn new(alpha: f64, mu: f64, omega: f64) -> Result<Self, ChannelError> {
        require_positive("alpha", alpha)?;
        require_positive("mu", mu)?;
        require_positive("omega", omega)?;
        Ok(Self { alpha, mu, omega })
    }

    pub fn rayleigh(omega: f64) -> Result<Self, ChannelError> {
        Self::new(2.0, 1.0, omega)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `A = Ω / μ^{1/α}`, the scale of `X = A·G^{1/α}` with `G ~ Gamma(μ, 1)`.
    pub fn scale(&self) -> f64 {
        self.omega / self.mu.powf(1.0 / self.alpha)
    }

    /// `E[X^n] = A^n Γ(μ + n/α) / Γ(μ)`.
    pub fn moment(&self, n: f64) -> f64 {
        self.scale().powf(n) * (ln_gamma(self.mu + n / self.alpha) - ln_gamma(self.mu)).exp()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        alpha_mu_pdf(self, x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        alpha_mu_cdf(self, x)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        alpha_mu_sample(self, rng)
    }
}

pub fn alpha_mu_pdf(p: &AlphaMuParams, x: f64) -> f64 {
    if x <= 0.0 {
        let am = p.alpha * p.mu;
        return if x < 0.0 || am > 1.0 {
            0.0
        } else if am == 1.0 {
            p.alpha * p.mu.powf(p.mu) / (p.omega.powf(am) * ln_gamma(p.mu).exp())
        } else {
            f64::INFINITY
        };
    }
    let r = x / p.omega;
    let ln = p.alpha.ln() + p.mu * p.mu.ln() + (p.alpha * p.mu - 1.0) * x.ln()
        - p.alpha * p.mu * p.omega.ln()
        - ln_gamma(p.mu)
        - p.mu * r.powf(p.alpha);
    ln.exp()
}

pub fn alpha_mu_cdf(p: &AlphaMuParams, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    gamma_lr(p.mu, p.mu * (x / p.omega).powf(p.alpha))
}

/// `X = Ω (G/μ)^{1/α}` with `G ~ Gamma(μ, 1)`.
pub fn alpha_mu_sample<R: Rng + ?Sized>(p: &AlphaMuParams, rng: &mut R) -> f64 {
    let g = Gamma::new(p.mu, 1.0).expect("shape validated at construction").sample(rng);
    p.omega * (g / p.mu).powf(1.0 / p.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::ks_statistic;
    use crate::quadrature::adaptive;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rayleigh_value() {
        let p = AlphaMuParams::rayleigh(1.0).unwrap();
        assert!((p.pdf(1.0) - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!((p.pdf(1.0) - 0.7357589).abs() < 1e-7);
    }

    #[test]
    fn zero_for_large_alpha_mu() {
        let p = AlphaMuParams::new(2.0, 4.0, 1.0).unwrap();
        assert_eq!(p.pdf(0.0), 0.0);
        assert!(AlphaMuParams::new(2.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn mode_of_mu_four() {
        // x^7 e^{-4x^2} peaks at sqrt(7/8)
        let p = AlphaMuParams::new(2.0, 4.0, 1.0).unwrap();
        let m = (7.0f64 / 8.0).sqrt();
        assert!(p.pdf(m) > p.pdf(m + 1e-4) && p.pdf(m) > p.pdf(m - 1e-4));
    }

    #[test]
    fn second_moment() {
        for mu in [1.0, 4.0] {
            let p = AlphaMuParams::new(2.0, mu, 1.3).unwrap();
            let m2 = adaptive(|x| x * x * p.pdf(x), 0.0, 20.0, 1e-12, 1e-14).value;
            assert!((m2 - 1.69).abs() < 1e-9, "mu={mu}: {m2}");
            assert!((p.moment(2.0) - 1.69).abs() < 1e-12);
        }
    }

    #[test]
    fn sampler_matches_cdf() {
        let p = AlphaMuParams::new(2.5, 1.7, 0.8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut xs: Vec<f64> = (0..100_000).map(|_| p.sample(&mut rng)).collect();
        assert!(ks_statistic(&mut xs, |x| p.cdf(x)) < 0.006);
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(p.sample(&mut a), p.sample(&mut b));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn pdf_normalizes(alpha in 1.0f64..4.0, mu in 1.0f64..6.0, omega in 0.3f64..3.0) {
            let p = AlphaMuParams::new(alpha, mu, omega).unwrap();
            let hi = omega * 40.0f64.powf(1.0 / alpha) * (1.0 + 4.0 / mu);
            let mass = adaptive(|x| p.pdf(x), 0.0, hi, 1e-11, 1e-13).value;
            prop_assert!((mass - 1.0).abs() < 1e-6, "mass {}", mass);
            let x = omega * 0.9;
            let cdf_num = adaptive(|t| p.pdf(t), 0.0, x, 1e-12, 1e-14).value;
            prop_assert!((cdf_num - p.cdf(x)).abs() < 1e-8);
        }
    }
}
