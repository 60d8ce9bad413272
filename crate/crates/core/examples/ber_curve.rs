//! Average bit error rate for coherent and differential binary signalling.

use risthz::analysis::*;
use risthz::channel::{LinkBudget, TpeParams};
use risthz::montecarlo::{estimate_ber, Composition};

fn main() {
    let e = ElementParams::symmetric(2.0, 1.0, 1.0, Some(TpeParams::reference()), 0.0).unwrap();
    let cfg = RisLinkConfig::identical(e, 2, LinkBudget::reference()).unwrap();
    for (name, m) in [("bpsk", BerModParams::BPSK), ("dbpsk", BerModParams::DBPSK)] {
        println!("{name}");
        println!("{:>6} {:>12} {:>12} {:>12}", "dB", "exact", "asymptote", "MC");
        for db in [0.0, 5.0, 10.0, 15.0] {
            let g = 10f64.powf(db / 10.0);
            let exact = ber_exact(&cfg, &m, g).unwrap();
            let asym = ber_asymptotic_expansion(&cfg, &m, g).unwrap();
            let mc = estimate_ber(&cfg, &m, g, 200_000, Composition::ComplexSum, 2).unwrap();
            println!("{db:>6} {exact:>12.4e} {asym:>12.4e} {:>12.4e}", mc.estimate);
        }
    }
}
