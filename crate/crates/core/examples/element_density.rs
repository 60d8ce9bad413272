//! Density and distribution of one element's cascaded gain, against samples.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use risthz::analysis::{element_cdf, element_pdf, ElementParams, RisLinkConfig};
use risthz::channel::{LinkBudget, TpeParams};
use risthz::montecarlo::{Composition, Sampler, Tilt};

fn main() {
    let e = ElementParams::symmetric(2.0, 1.0, 1.0, Some(TpeParams::reference()), 0.0).unwrap();
    let cfg = RisLinkConfig::identical(e.clone(), 1, LinkBudget::reference()).unwrap();
    let sampler = Sampler::new(&cfg, Composition::ComplexSum, Tilt::NONE).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 200_000;
    let mut xs: Vec<f64> = (0..n).map(|_| sampler.draw(&mut rng).0).collect();
    xs.sort_by(|a, b| a.total_cmp(b));

    println!("{:>6} {:>12} {:>12} {:>12}", "x", "pdf", "cdf", "empirical");
    for x in [0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0, 1.5, 2.0] {
        let emp = xs.partition_point(|v| *v <= x) as f64 / n as f64;
        println!(
            "{x:>6} {:>12.6} {:>12.6} {emp:>12.6}",
            element_pdf(&e, x).unwrap(),
            element_cdf(&e, x).unwrap()
        );
    }
}
