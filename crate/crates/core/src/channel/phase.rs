use super::ChannelError;
use rand::Rng;
use std::f64::consts::PI;

/// Residual phase error uniform on `(-qπ, qπ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseNoiseParams {
    q: f64,
}

impl PhaseNoiseParams {
    pub fn new(q: f64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&q) {
            return Err(ChannelError::InvalidParameter(format!("q must lie in [0, 1], got {q}")));
        }
        Ok(Self { q })
    }

    pub fn perfect() -> Self {
        Self { q: 0.0 }
    }

    /// A `bits`-bit phase quantizer leaves `q = 2^{-bits}`.
    pub fn from_bits(bits: u32) -> Self {
        Self {
            q: 0.5f64.powi(bits as i32),
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `E[e^{jθ}] = sin(qπ)/(qπ)`.
    pub fn mean_phasor(&self) -> f64 {
        if self.q == 0.0 {
            1.0
        } else {
            (self.q * PI).sin() / (self.q * PI)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        phase_sample(self, rng)
    }
}

pub fn phase_sample<R: Rng + ?Sized>(p: &PhaseNoiseParams, rng: &mut R) -> f64 {
    if p.q == 0.0 {
        return 0.0;
    }
    p.q * PI * (2.0 * rng.random::<f64>() - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mean_cos(q: f64) -> (f64, f64) {
        let p = PhaseNoiseParams::new(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 400_000;
        let (mut c, mut s) = (0.0, 0.0);
        for _ in 0..n {
            let t = p.sample(&mut rng);
            c += t.cos();
            s += t.sin();
        }
        (c / n as f64, s / n as f64)
    }

    #[test]
    fn perfect_compensation_is_exact_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(PhaseNoiseParams::perfect().sample(&mut rng), 0.0);
        assert_eq!(PhaseNoiseParams::from_bits(1).q(), 0.5);
        assert_eq!(PhaseNoiseParams::from_bits(2).q(), 0.25);
        assert!(PhaseNoiseParams::new(1.5).is_err());
    }

    #[test]
    fn phasor_means() {
        let (c, s) = mean_cos(1.0);
        assert!(c.abs() < 5e-3 && s.abs() < 5e-3);
        let (c, _) = mean_cos(0.5);
        assert!((c - 2.0 / PI).abs() < 5e-3);
        assert!((PhaseNoiseParams::new(0.5).unwrap().mean_phasor() - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn support() {
        let p = PhaseNoiseParams::new(0.25).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let t = p.sample(&mut rng);
            assert!(t.abs() < 0.25 * PI);
        }
    }
}
