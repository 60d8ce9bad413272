use super::{require_positive, ChannelError};
use std::f64::consts::PI;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Deterministic line-of-sight THz budget, in linear units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub carrier_hz: f64,
    /// Transmit antenna gain (linear power ratio).
    pub gain_tx: f64,
    pub gain_rx: f64,
    /// Source to RIS distance in meters.
    pub d1_m: f64,
    /// RIS to destination distance in meters.
    pub d2_m: f64,
    /// Molecular absorption coefficient in 1/m (power).
    pub absorption_per_m: f64,
    /// Noise power in watts over `bandwidth_hz`.
    pub noise_w: f64,
    pub bandwidth_hz: f64,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<(), ChannelError> {
        require_positive("carrier frequency", self.carrier_hz)?;
        require_positive("transmit gain", self.gain_tx)?;
        require_positive("receive gain", self.gain_rx)?;
        require_positive("d1", self.d1_m)?;
        require_positive("d2", self.d2_m)?;
        require_positive("noise power", self.noise_w)?;
        require_positive("bandwidth", self.bandwidth_hz)?;
        if !(self.absorption_per_m >= 0.0 && self.absorption_per_m.is_finite()) {
            return Err(ChannelError::InvalidParameter(format!(
                "absorption must be nonnegative, got {}",
                self.absorption_per_m
            )));
        }
        Ok(())
    }

    /// 300 GHz, 40 dBi at both ends, k = 3.18e-4 /m, 20 m and 50 m hops,
    /// -74 dBm of noise over 10 GHz.
    pub fn reference() -> Self {
        Self {
            carrier_hz: 300e9,
            gain_tx: 1e4,
            gain_rx: 1e4,
            d1_m: 20.0,
            d2_m: 50.0,
            absorption_per_m: 3.18e-4,
            noise_w: 10f64.powf(-7.4) * 1e-3,
            bandwidth_hz: 10e9,
        }
    }

    /// Amplitude gain product `H·G` of the two hops.
    pub fn cascade_gain(&self) -> f64 {
        path_gain(self, self.d1_m) * path_gain(self, self.d2_m)
    }

    /// `γ̄ = P_t (H G)² / σ²` for transmit power in watts.
    pub fn average_snr(&self, tx_power_w: f64) -> f64 {
        tx_power_w * self.cascade_gain().powi(2) / self.noise_w
    }

    /// Inverse of [`Self::average_snr`].
    pub fn tx_power_for_snr(&self, snr: f64) -> f64 {
        snr * self.noise_w / self.cascade_gain().powi(2)
    }
}

/// Amplitude gain of one hop of length `d`: free-space spreading, a quarter of
/// the end-to-end antenna gain in dB, and half the absorption exponent.
pub fn path_gain(lb: &LinkBudget, d: f64) -> f64 {
    SPEED_OF_LIGHT / (4.0 * PI * lb.carrier_hz * d) * (lb.gain_tx * lb.gain_rx).powf(0.25) * (-lb.absorption_per_m * d / 2.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_distance() {
        let lb = LinkBudget {
            absorption_per_m: 0.0,
            ..LinkBudget::reference()
        };
        assert!((path_gain(&lb, 10.0) / path_gain(&lb, 20.0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn absorption_ratio() {
        let lb = LinkBudget::reference();
        let free = LinkBudget {
            absorption_per_m: 0.0,
            ..lb
        };
        let r = path_gain(&lb, 50.0) / path_gain(&free, 50.0);
        assert!((r - (-3.18e-4f64 * 25.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn reference_regression() {
        let lb = LinkBudget::reference();
        lb.validate().unwrap();
        // (c / 4πf d) · 100 · e^{-k d / 2}
        assert!((path_gain(&lb, 20.0) - 3.963_497_0e-4).abs() < 1e-10);
        assert!((path_gain(&lb, 50.0) - 1.577_854_4e-4).abs() < 1e-10);
        // γ̄ in dB relative to P_t in dBm
        let offset_db = 10.0 * lb.average_snr(1e-3).log10();
        assert!((offset_db + 70.0771).abs() < 1e-3, "{offset_db}");
        let p = lb.tx_power_for_snr(123.0);
        assert!((lb.average_snr(p) - 123.0).abs() < 1e-9);
    }
}
