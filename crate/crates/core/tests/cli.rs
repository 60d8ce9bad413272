use risthz::cli::*;
use std::path::Path;
use std::process::Command;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const SMALL: &str = r#"
scenario = "small"
metrics = ["outage", "ber"]
methods = ["exact", "asymptotic", "mc"]
output = "OUT"

[elements]
count = 1
alpha = 2.0
mu = 1.0
hop2 = { alpha = 2.0, mu = 2.0 }

[sweep]
axis = "snr_db"
start = 0.0
stop = 20.0
step = 10.0

[mc]
seed = 4
trials = 100000
"#;

fn small(dir: &Path) -> String {
    write(dir, "small.toml", &SMALL.replace("OUT", &dir.join("out").to_string_lossy()))
}

#[test]
fn every_preset_validates_cleanly() {
    assert!(PRESETS.len() >= 5);
    for p in PRESETS {
        let issues = validate(p.name).unwrap();
        assert!(issues.is_empty(), "{}: {issues:?}", p.name);
    }
}

#[test]
fn reference_preset_resolves_link_constants() {
    let cfg = load("paper-sec4").unwrap();
    let b = cfg.link().unwrap().budget;
    assert_eq!(b.carrier_hz, 300e9);
    assert!((b.gain_tx - 1e4).abs() < 1e-9 && (b.gain_rx - 1e4).abs() < 1e-9);
    assert_eq!(b.absorption_per_m, 3.18e-4);
    assert_eq!((b.d1_m, b.d2_m), (20.0, 50.0));
    assert!((b.noise_w / 10f64.powf(-10.4) - 1.0).abs() < 1e-12);
    assert_eq!(b.bandwidth_hz, 10e9);
}

#[test]
fn empty_sweep_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("stop = 20.0", "stop = -5.0").replace("OUT", "x");
    let path = write(dir.path(), "empty.toml", &text);
    let err = run(&path).unwrap_err();
    assert!(matches!(err, CliError::Config { ref path, .. } if path == "sweep"), "{err}");
    assert_eq!(err.exit_code(), EXIT_CONFIG);
}

#[test]
fn schema_errors_carry_the_field_path() {
    let err = RunConfig::from_toml(&SMALL.replace("alpha = 2.0\nmu = 1.0", "alpha = \"two\"\nmu = 1.0")).unwrap_err();
    match err {
        CliError::Config { path, .. } => assert_eq!(path, "elements.alpha"),
        e => panic!("{e}"),
    }
    let err = RunConfig::from_toml(&SMALL.replace("seed = 4", "seed = 4\nsed = 5")).unwrap_err();
    assert!(matches!(err, CliError::Config { ref path, .. } if path.starts_with("mc")), "{err}");
}

#[test]
fn negative_mu_names_the_element() {
    let text = SMALL.replace("count = 1\nalpha = 2.0\nmu = 1.0", "count = 2\nalpha = 2.0\nmu = -1.0");
    let issues = validate_config(&RunConfig::from_toml(&text).unwrap());
    for i in 0..2 {
        let path = format!("elements[{i}]");
        assert!(
            issues.iter().any(|x| x.path == path && x.message.contains("contour") && x.severity == Severity::Error),
            "{issues:?}"
        );
    }
}

#[test]
fn short_series_suggests_an_order() {
    let text = SMALL.replace(
        "hop2 = { alpha = 2.0, mu = 2.0 }",
        "hop2 = { alpha = 2.0, mu = 2.0 }\ntpe = { betas = [1.0, 8.0, 8.0, 8.0], series_order = 2 }",
    );
    let issues = validate_config(&RunConfig::from_toml(&text).unwrap());
    let w = issues
        .iter()
        .find(|i| i.severity == Severity::Warning && i.message.contains("InvalidMixture"))
        .expect("mixture warning");
    assert!(w.message.contains("series_order to at least"), "{w}");
}

#[test]
fn exact_mode_is_capped() {
    let text = SMALL.replace("count = 1", "count = 5");
    let issues = validate_config(&RunConfig::from_toml(&text).unwrap());
    assert!(issues.iter().any(|i| i.path == "methods" && i.message.contains("at most 3")), "{issues:?}");
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = small(dir.path());
    let a = run(&path).unwrap();
    let csv = std::fs::read(&a.files[0]).unwrap();
    run(&path).unwrap();
    assert_eq!(csv, std::fs::read(&a.files[0]).unwrap());

    let text = String::from_utf8(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(lines.count(), 3);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.files.last().unwrap()).unwrap()).unwrap();
    assert_eq!(manifest["schema_version"], MANIFEST_SCHEMA_VERSION);
    assert_eq!(manifest["mc_seed"], 4);
    assert_eq!(manifest["curves"][0]["points"].as_array().unwrap().len(), 3);
    for c in &a.curves {
        for p in &c.points {
            for v in [p.exact, p.asymptotic, p.mc.map(|m| m.estimate)].into_iter().flatten() {
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_risthz");
    let dir = tempfile::tempdir().unwrap();
    let ok = Command::new(bin).arg("presets").output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("outage-n2"));

    let missing = Command::new(bin).args(["run", "/nonexistent/cfg.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(EXIT_CONFIG));

    // exact evaluation needs a decaying contour integrand; a 1-bit quantizer at N = 2 has none
    let text = SMALL
        .replace("count = 1", "count = 2\nphase_bits = 1")
        .replace("OUT", &dir.path().join("o").to_string_lossy());
    let path = write(dir.path(), "phase.toml", &text);
    let compute = Command::new(bin).args(["run", &path]).output().unwrap();
    assert_eq!(compute.status.code(), Some(EXIT_COMPUTE), "{}", String::from_utf8_lossy(&compute.stderr));
    let check = Command::new(bin).args(["validate", &path]).output().unwrap();
    assert_eq!(check.status.code(), Some(EXIT_CONFIG));

    let good = Command::new(bin).args(["validate", &small(dir.path())]).output().unwrap();
    assert_eq!(good.status.code(), Some(EXIT_OK));
}

#[test]
fn two_element_preset_cross_validates() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = load("outage-n2").unwrap();
    cfg.output = dir.path().to_path_buf();
    let s = run_config(&cfg, "outage-n2").unwrap();
    for p in &s.curves[0].points {
        let mc = p.mc.unwrap();
        assert!(mc.contains(p.exact.unwrap()), "{p:?}");
    }
}
