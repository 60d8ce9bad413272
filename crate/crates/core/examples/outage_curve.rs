//! Outage probability of a two-element surface: exact, asymptotic and simulated.

use risthz::analysis::*;
use risthz::channel::{LinkBudget, TpeParams};
use risthz::montecarlo::{outage_curve, Composition, McOptions};

fn main() {
    let e = ElementParams::symmetric(2.0, 1.0, 1.0, Some(TpeParams::reference()), 0.0).unwrap();
    let cfg = RisLinkConfig::identical(e, 2, LinkBudget::reference()).unwrap();
    let gamma_th = 1.0;
    let db: Vec<f64> = (0..=8).map(|i| 4.0 * i as f64).collect();
    let bars: Vec<f64> = db.iter().map(|d| 10f64.powf(d / 10.0)).collect();

    let exact = outage_exact_curve(&cfg, gamma_th, &bars).unwrap();
    let mc = outage_curve(&cfg, gamma_th, &bars, 1_000_000, Composition::ComplexSum, 1, &McOptions::default()).unwrap();
    println!("diversity order {}", diversity_order(&cfg));
    println!("{:>6} {:>12} {:>12} {:>12} {:>26}", "dB", "exact", "asymptote", "MC", "99% CI");
    for (i, g) in bars.iter().enumerate() {
        let asym = outage_asymptotic_expansion(&cfg, gamma_th, *g).unwrap();
        let ex = exact[i].as_ref().map(|m| m.value).unwrap_or(f64::NAN);
        let m = &mc[i];
        println!(
            "{:>6} {ex:>12.4e} {asym:>12.4e} {:>12.4e}   [{:.4e}, {:.4e}]",
            db[i], m.estimate, m.ci_low, m.ci_high
        );
    }
}
