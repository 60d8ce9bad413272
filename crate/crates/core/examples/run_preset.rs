//! Runs a bundled preset through the library entry point and lists its sweep.
//!
//! `cargo run --release --example run_preset -- outage-n2 /tmp/out`

use risthz::cli::{load, run_config, PRESETS};

fn main() {
    let mut args = std::env::args().skip(1);
    let Some(name) = args.next() else {
        for p in PRESETS {
            println!("{:<24} {}", p.name, p.description);
        }
        return;
    };
    let mut cfg = load(&name).unwrap_or_else(|e| panic!("{e}"));
    if let Some(dir) = args.next() {
        cfg.output = dir.into();
    }
    let summary = run_config(&cfg, &name).unwrap_or_else(|e| panic!("{e}"));
    for c in &summary.curves {
        println!("{:?} over {:?}", c.metric, c.axis);
        for p in &c.points {
            let mc = p.mc.map(|m| m.estimate);
            println!("  {:>8} exact {:?} asymptote {:?} mc {:?}", p.axis, p.exact, p.asymptotic, mc);
        }
    }
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
}
