//! Transmit power lost to quantized phase compensation on a ten-element surface.

use risthz::analysis::{ElementParams, RisLinkConfig};
use risthz::channel::{LinkBudget, PhaseNoiseParams};
use risthz::cli::linear_to_db;
use risthz::montecarlo::{outage_curve, Composition, McOptions};

fn power_at(cfg: &RisLinkConfig, target: f64) -> f64 {
    let db: Vec<f64> = (0..=200).map(|i| -40.0 + 0.25 * i as f64).collect();
    let bars: Vec<f64> = db.iter().map(|d| 10f64.powf(d / 10.0)).collect();
    let est = outage_curve(cfg, 1.0, &bars, 500_000, Composition::ComplexSum, 3, &McOptions::default()).unwrap();
    let j = est.iter().position(|e| e.estimate < target).unwrap();
    let (p0, p1) = (est[j - 1].estimate.log10(), est[j].estimate.log10());
    let g_db = db[j - 1] + 0.25 * (p0 - target.log10()) / (p0 - p1);
    linear_to_db(cfg.budget.tx_power_for_snr(10f64.powf(g_db / 10.0))) + 30.0
}

fn main() {
    let e = ElementParams::symmetric(2.0, 1.0, 1.0, None, 0.0).unwrap();
    let base = RisLinkConfig::identical(e, 10, LinkBudget::reference()).unwrap();
    let reference = power_at(&base, 1e-3);
    println!("perfect phase: {reference:.2} dBm for outage 1e-3");
    for bits in [3, 2, 1] {
        let cfg = base.with_phase(PhaseNoiseParams::from_bits(bits));
        let p = power_at(&cfg, 1e-3);
        println!("{bits}-bit phase: {p:.2} dBm, {:.2} dB more", p - reference);
    }
}
