//! Measured outage slope at deep fades against the predicted diversity order.

use risthz::analysis::*;
use risthz::channel::{LinkBudget, TpeParams};
use risthz::montecarlo::{choose_tilt, estimate_outage_with, Composition, McOptions};

fn outage(cfg: &RisLinkConfig, g: f64) -> f64 {
    let tilt = choose_tilt(cfg, 1.0, g, Composition::ComplexSum, 5, 20_000).unwrap();
    let opts = McOptions { tilt, ..Default::default() };
    estimate_outage_with(cfg, 1.0, g, 500_000, Composition::ComplexSum, 5, &opts)
        .unwrap()
        .estimate
}

fn main() {
    let cases = [
        ("rayleigh", ElementParams::symmetric(2.0, 1.0, 1.0, None, 0.0).unwrap()),
        ("mu 4", ElementParams::symmetric(2.0, 4.0, 1.0, None, 0.0).unwrap()),
        (
            "pointing limited",
            ElementParams::symmetric(2.0, 1.0, 1.0, Some(TpeParams::symmetric(1.0, 1.0).unwrap()), 0.0).unwrap(),
        ),
    ];
    println!("{:>18} {:>3} {:>10} {:>10}", "element", "N", "predicted", "measured");
    for (name, e) in cases {
        for n in [1, 2] {
            let cfg = RisLinkConfig::identical(e.clone(), n, LinkBudget::reference()).unwrap();
            let d = diversity_order(&cfg);
            // two points a few decades into the tail of the asymptote
            let g = 10f64.powf(10.0 / d);
            let (a, b) = (outage(&cfg, g), outage(&cfg, 100.0 * g));
            println!("{name:>18} {n:>3} {d:>10.3} {:>10.3}", -(b / a).log10() / 2.0);
        }
    }
}
