use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use risthz::analysis::*;
use risthz::channel::{AlphaMuParams, LinkBudget, PhaseNoiseParams, TpeParams};
use risthz::montecarlo::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn element(mu: f64, tpe: Option<TpeParams>, q: f64) -> ElementParams {
    ElementParams::symmetric(2.0, mu, 1.0, tpe, q).unwrap()
}

fn link(e: ElementParams, n: usize) -> RisLinkConfig {
    RisLinkConfig::identical(e, n, LinkBudget::reference()).unwrap()
}

#[test]
fn deterministic_channels_combine_coherently() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [1, 3] {
        let cfg = link(element(1e7, None, 0.0), n);
        let g = simulate_snr(&cfg, 2.0, Composition::ComplexSum, &mut rng).unwrap();
        let want = 2.0 * (n * n) as f64;
        assert!((g / want - 1.0).abs() < 1e-2, "{g} vs {want}");
    }
}

#[test]
fn uniform_phase_combines_incoherently() {
    let n = 32;
    let cfg = link(element(1.0, None, 1.0), n);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let draws = 1_000_000 / n;
    let mean: f64 = (0..draws)
        .map(|_| simulate_snr(&cfg, 1.0, Composition::ComplexSum, &mut rng).unwrap())
        .sum::<f64>()
        / draws as f64;
    assert!((mean / n as f64 - 1.0).abs() < 0.03, "{mean}");
}

#[test]
fn zero_threshold_never_outages() {
    let cfg = link(element(1.0, None, 0.0), 2);
    let e = estimate_outage(&cfg, 0.0, 10.0, 20_000, Composition::ComplexSum, 1).unwrap();
    assert_eq!(e.estimate, 0.0);
    assert!(e.ci_low <= e.estimate && e.estimate <= e.ci_high);
}

#[test]
fn estimates_are_reproducible() {
    let cfg = link(element(1.0, Some(TpeParams::reference()), 0.25), 2);
    let a = estimate_outage(&cfg, 1.0, 10.0, 200_000, Composition::ComplexSum, 42).unwrap();
    let b = estimate_outage(&cfg, 1.0, 10.0, 200_000, Composition::ComplexSum, 42).unwrap();
    assert_eq!(a, b);
    let c = estimate_ber(&cfg, &BerModParams::BPSK, 10.0, 200_000, Composition::RealEffective, 7).unwrap();
    let d = estimate_ber(&cfg, &BerModParams::BPSK, 10.0, 200_000, Composition::RealEffective, 7).unwrap();
    assert_eq!(c.estimate.to_bits(), d.estimate.to_bits());
}

#[test]
fn ci_shrinks_with_trials() {
    let cfg = link(element(1.0, None, 0.0), 2);
    let a = estimate_outage(&cfg, 1.0, 10.0, 1 << 18, Composition::ComplexSum, 5).unwrap();
    let b = estimate_outage(&cfg, 1.0, 10.0, 1 << 19, Composition::ComplexSum, 5).unwrap();
    let ratio = b.half_width() / a.half_width();
    assert!((ratio - 0.5f64.sqrt()).abs() < 0.05, "{ratio}");
}

#[test]
fn preconditions_are_enforced() {
    let cfg = link(element(1.0, None, 0.0), 1);
    assert!(matches!(
        estimate_outage(&cfg, 1.0, 1.0, 100, Composition::ComplexSum, 0),
        Err(McError::TooFewTrials { .. })
    ));
    assert!(matches!(
        estimate_ber(&cfg, &BerModParams::BPSK, 1.0, 50_000, Composition::ComplexSum, 0),
        Err(McError::TooFewTrials { .. })
    ));
    assert!(estimate_ber_bits(&cfg, &BerModParams::DBPSK, 1.0, 200_000, Composition::ComplexSum, 0).is_err());
}

#[test]
fn ber_limits_and_monotonicity() {
    let cfg = link(element(1.0, None, 0.5), 2);
    let bars = [1e-8, 0.1, 1.0, 10.0, 100.0];
    let c = ber_curve(&cfg, &BerModParams::BPSK, &bars, 200_000, Composition::ComplexSum, 9, &McOptions::default()).unwrap();
    assert!((c[0].estimate - 0.5).abs() < 1e-3);
    assert!(c.windows(2).all(|w| w[1].estimate < w[0].estimate));
}

#[test]
fn bit_level_agrees_with_conditional_averaging() {
    let cfg = link(element(1.0, None, 0.0), 2);
    let m = BerModParams::BPSK;
    let a = estimate_ber(&cfg, &m, 3.0, 1_000_000, Composition::ComplexSum, 1).unwrap();
    let b = estimate_ber_bits(&cfg, &m, 3.0, 2_000_000, Composition::ComplexSum, 2).unwrap();
    let sigma = (a.half_width().powi(2) + b.half_width().powi(2)).sqrt();
    assert!((a.estimate - b.estimate).abs() < sigma, "{a:?} {b:?}");
}

#[test]
fn matches_analysis_without_phase_noise() {
    let tpe = TpeParams::symmetric(1e-4, 1.0).unwrap();
    for n in [1, 2] {
        let cfg = link(element(1.0, Some(tpe.clone()), 0.0), n);
        let exact = outage_exact(&cfg, 1.0, 5.0).unwrap();
        let mc = estimate_outage(&cfg, 1.0, 5.0, 1_000_000, Composition::ComplexSum, 17).unwrap();
        assert!(mc.contains(exact), "N = {n}: {exact} not in {mc:?}");
    }
}

#[test]
fn importance_sampling_is_unbiased() {
    let cfg = link(element(1.0, None, 0.0), 2);
    let plain = estimate_outage(&cfg, 1.0, 1e3, 4_000_000, Composition::ComplexSum, 1).unwrap();
    let tilt = choose_tilt(&cfg, 1.0, 1e3, Composition::ComplexSum, 1, 20_000).unwrap();
    assert!(!tilt.is_none());
    let opts = McOptions { tilt, ..McOptions::default() };
    let is = estimate_outage_with(&cfg, 1.0, 1e3, 200_000, Composition::ComplexSum, 2, &opts).unwrap();
    let exact = outage_exact(&cfg, 1.0, 1e3).unwrap();
    assert!(is.contains(exact), "{exact} not in {is:?}");
    assert!(plain.contains(exact), "{exact} not in {plain:?}");
    assert!(is.half_width() < plain.half_width());
}

#[test]
fn adaptive_budget_meets_target() {
    let cfg = link(element(1.0, None, 0.0), 1);
    let e = adaptive_outage(&cfg, 1.0, 100.0, Composition::ComplexSum, 3, &McOptions::default(), &AdaptiveOptions::default())
        .unwrap();
    assert!(e.half_width() <= 0.1 * e.estimate, "{e:?}");
    assert!(e.trials <= MAX_TRIALS);
    // earlier chunks are reused, so the same count from scratch is identical
    let again = estimate_outage(&cfg, 1.0, 100.0, e.trials, Composition::ComplexSum, 3).unwrap();
    assert_eq!(e, again);
}

#[test]
fn seeds_give_independent_estimates() {
    let cfg = link(element(1.0, None, 0.0), 1);
    let trials = 20_000u64;
    let hits: Vec<f64> = (0..40)
        .map(|s| estimate_outage(&cfg, 1.0, 4.0, trials, Composition::ComplexSum, s).unwrap().estimate * trials as f64)
        .collect();
    let p = hits.iter().sum::<f64>() / (hits.len() as f64 * trials as f64);
    let np = p * trials as f64;
    let chi2: f64 = hits.iter().map(|h| (h - np).powi(2) / (np * (1.0 - p))).sum();
    let pval = 1.0 - ChiSquared::new((hits.len() - 1) as f64).unwrap().cdf(chi2);
    assert!(pval > 1e-3 && pval < 1.0 - 1e-3, "chi2 = {chi2}, p = {pval}");
}

/// CDF tabulated on a log grid and linearly interpolated.
fn tabulate(cdf: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> impl Fn(f64) -> f64 {
    let xs: Vec<f64> = (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect();
    let fs: Vec<f64> = xs.iter().map(|x| cdf(*x)).collect();
    move |x: f64| {
        if x <= xs[0] {
            return fs[0] * x / xs[0];
        }
        if x >= xs[n - 1] {
            return 1.0;
        }
        let j = xs.partition_point(|v| *v <= x) - 1;
        let t = (x - xs[j]) / (xs[j + 1] - xs[j]);
        fs[j] + t * (fs[j + 1] - fs[j])
    }
}

#[test]
fn asymmetric_double_fading_matches_sampler() {
    let e = ElementParams::new(
        AlphaMuParams::new(2.0, 1.0, 1.0).unwrap(),
        AlphaMuParams::new(2.0, 4.0, 1.0).unwrap(),
        None,
        PhaseNoiseParams::perfect(),
    );
    let cfg = link(e.clone(), 1);
    let cdf = tabulate(|x| element_cdf(&e, x).unwrap(), 1e-4, 8.0, 600);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut xs: Vec<f64> = (0..1_000_000)
        .map(|_| simulate_envelope(&cfg, Composition::ComplexSum, &mut rng).unwrap())
        .collect();
    let d = ks_statistic(&mut xs, cdf);
    assert!(d < 3e-3, "{d}");
}

#[test]
fn phase_error_never_lowers_outage() {
    let bars = [1.0, 10.0, 100.0];
    let coherent = link(element(1.0, Some(TpeParams::reference()), 0.0), 4);
    let base = outage_curve(&coherent, 1.0, &bars, 200_000, Composition::ComplexSum, 9, &McOptions::default()).unwrap();
    for q in [0.25, 0.5] {
        let cfg = coherent.with_phase(PhaseNoiseParams::new(q).unwrap());
        let est = outage_curve(&cfg, 1.0, &bars, 200_000, Composition::ComplexSum, 9, &McOptions::default()).unwrap();
        for (b, e) in base.iter().zip(&est) {
            assert!(e.ci_high >= b.ci_low, "q {q}: {e:?} below {b:?}");
        }
    }
}
