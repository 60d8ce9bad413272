//! Evaluates a few H-functions with known closed forms.

use risthz::foxh::{eval_foxh, validate_contour, EvalOptions, FoxHParams};

fn h(m: usize, n: usize, upper: &[(f64, f64)], lower: &[(f64, f64)], z: f64) -> f64 {
    let p = FoxHParams::univariate(m, n, upper, lower, z).unwrap();
    let c = validate_contour(&p).unwrap();
    eval_foxh(&p, &c, &EvalOptions::univariate()).unwrap().value
}

fn main() {
    println!("{:>6} {:>14} {:>14} {:>14}", "z", "H[z;(0,1)]", "exp(-z)", "H[z;(1,1);(0,1)]");
    for z in [0.1, 0.5, 1.0, 2.0, 5.0] {
        // H^{1,0}_{0,1} is e^{-z}; H^{1,1}_{1,1} with (0,1),(0,1) is 1/(1+z)
        let e = h(1, 0, &[], &[(0.0, 1.0)], z);
        let r = h(1, 1, &[(0.0, 1.0)], &[(0.0, 1.0)], z);
        println!("{z:>6} {e:>14.10} {:>14.10} {r:>14.10}  (1/(1+z) = {:.10})", (-z).exp(), 1.0 / (1.0 + z));
    }
    let p = FoxHParams::univariate(1, 0, &[], &[(0.0, 1.0)], 1.0).unwrap();
    let c = validate_contour(&p).unwrap();
    println!("contour: abscissa {:?}, half length {:?}, nodes {:?}", c.abscissa, c.half_length, c.nodes);
}
