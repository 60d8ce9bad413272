use super::config::{Axis, Method, MetricKind, RunConfig};
use super::{load, CliError};
use crate::analysis::{
    ber_asymptotic, ber_asymptotic_expansion, ber_exact_metric, outage_asymptotic, outage_asymptotic_expansion,
    outage_exact_metric, AnalysisError, BerModParams, RisLinkConfig,
};
use crate::foxh::{FoxHError, DEFAULT_MAX_DIMENSION};
use crate::montecarlo::{
    adaptive_outage, estimate_ber_with, estimate_outage_with, AdaptiveOptions, Composition, McEstimate, McOptions,
};
use rayon::prelude::*;
use serde::Serialize;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

pub const CSV_HEADER: [&str; 7] = ["axis", "exact", "asymptotic", "mc", "mc_ci_low", "mc_ci_high", "mc_mode"];
pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub axis: f64,
    pub gamma_bar: f64,
    pub exact: Option<f64>,
    pub asymptotic: Option<f64>,
    #[serde(skip)]
    pub mc: Option<McEstimate>,
    pub mc_trials: Option<u64>,
    pub seconds_exact: f64,
    pub seconds_asymptotic: f64,
    pub seconds_mc: f64,
}

/// One metric over the sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerfCurve {
    pub metric: MetricKind,
    pub axis: Axis,
    /// `leading-residue`, `pole-expansion`, or absent.
    pub asymptotic_method: Option<String>,
    pub mc_mode: Option<String>,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub curves: Vec<PerfCurve>,
    pub files: Vec<PathBuf>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    source: &'a str,
    started_unix_s: u64,
    total_seconds: f64,
    config: &'a RunConfig,
    mc_seed: u64,
    csv_schema: [&'static str; 7],
    curves: &'a [PerfCurve],
}

/// Loads `source` (path or preset name), computes every curve and writes the artifacts.
pub fn run(source: &str) -> Result<RunSummary, CliError> {
    let cfg = load(source)?;
    run_config(&cfg, source)
}

pub fn run_config(cfg: &RunConfig, source: &str) -> Result<RunSummary, CliError> {
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let link = cfg.link()?;
    let gamma_bars = cfg.gamma_bars(&link.budget)?;
    let axis = cfg.sweep.points()?;
    let m = cfg.modulation.resolve()?;
    let mode = cfg.mc.composition()?;
    check_requests(cfg, &link)?;

    let mut curves = Vec::new();
    for metric in dedup(&cfg.metrics) {
        curves.push(curve(cfg, &link, metric, &m, mode, &axis, &gamma_bars)?);
    }

    std::fs::create_dir_all(&cfg.output).map_err(|e| CliError::Output(format!("{}: {e}", cfg.output.display())))?;
    let mut files = Vec::new();
    for c in &curves {
        let path = cfg.output.join(format!("{}_{}.csv", cfg.scenario, c.metric.label()));
        write_csv(&path, c)?;
        files.push(path);
    }
    let manifest = Manifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        source,
        started_unix_s: started,
        total_seconds: clock.elapsed().as_secs_f64(),
        config: cfg,
        mc_seed: cfg.mc.seed,
        csv_schema: CSV_HEADER,
        curves: &curves,
    };
    let path = cfg.output.join(format!("{}_manifest.json", cfg.scenario));
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Output(e.to_string()))?;
    std::fs::write(&path, json).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
    files.push(path);
    Ok(RunSummary { curves, files })
}

fn dedup<T: PartialEq + Copy>(xs: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for x in xs {
        if !out.contains(x) {
            out.push(*x);
        }
    }
    out
}

pub(super) fn check_requests(cfg: &RunConfig, link: &RisLinkConfig) -> Result<(), CliError> {
    if cfg.metrics.is_empty() {
        return Err(CliError::Config {
            path: "metrics".into(),
            message: "request at least one of \"outage\", \"ber\"".into(),
        });
    }
    if cfg.methods.is_empty() {
        return Err(CliError::Config {
            path: "methods".into(),
            message: "request at least one of \"exact\", \"asymptotic\", \"mc\"".into(),
        });
    }
    if cfg.methods.contains(&Method::Exact) && link.len() > DEFAULT_MAX_DIMENSION {
        return Err(CliError::Config {
            path: "methods".into(),
            message: format!(
                "the exact method supports at most {DEFAULT_MAX_DIMENSION} elements but elements.count = {}; \
                 drop \"exact\" and use \"mc\" (and \"asymptotic\") for this size",
                link.len()
            ),
        });
    }
    Ok(())
}

fn axis_label(a: Axis) -> &'static str {
    match a {
        Axis::PtDbm => "pt_dbm",
        Axis::SnrDb => "snr_db",
    }
}

fn curve(
    cfg: &RunConfig,
    link: &RisLinkConfig,
    metric: MetricKind,
    m: &BerModParams,
    mode: Composition,
    axis: &[f64],
    gamma_bars: &[f64],
) -> Result<PerfCurve, CliError> {
    let wants = |x: Method| cfg.methods.contains(&x);
    let gamma_th = cfg.gamma_th();
    let opts = McOptions {
        confidence: cfg.mc.confidence,
        ..McOptions::default()
    };
    let results: Vec<Result<(CurvePoint, Option<&'static str>), CliError>> = axis
        .par_iter()
        .zip(gamma_bars)
        .map(|(&a, &g)| {
            let fail = |msg: String| CliError::Compute {
                metric: metric.label().into(),
                axis: axis_label(cfg.sweep.axis).into(),
                value: a,
                message: msg,
            };
            let mut p = CurvePoint {
                axis: a,
                gamma_bar: g,
                exact: None,
                asymptotic: None,
                mc: None,
                mc_trials: None,
                seconds_exact: 0.0,
                seconds_asymptotic: 0.0,
                seconds_mc: 0.0,
            };
            let mut asym_method = None;
            if wants(Method::Exact) {
                let t = Instant::now();
                let r = match metric {
                    MetricKind::Outage => outage_exact_metric(link, gamma_th, g),
                    MetricKind::Ber => ber_exact_metric(link, m, g),
                };
                p.exact = Some(r.map_err(|e| fail(e.to_string()))?.value);
                p.seconds_exact = t.elapsed().as_secs_f64();
            }
            if wants(Method::Asymptotic) {
                let t = Instant::now();
                let (v, how) = asymptote(link, metric, m, gamma_th, g).map_err(|e| fail(e.to_string()))?;
                let cap = if metric == MetricKind::Ber { 0.5 } else { 1.0 };
                // above the cap the power law is outside its regime, not a probability
                p.asymptotic = (v.is_finite() && (0.0..=cap).contains(&v)).then_some(v);
                asym_method = Some(how);
                p.seconds_asymptotic = t.elapsed().as_secs_f64();
            }
            if wants(Method::Mc) {
                let t = Instant::now();
                let r = match metric {
                    MetricKind::Outage if cfg.mc.adaptive => adaptive_outage(
                        link,
                        gamma_th,
                        g,
                        mode,
                        cfg.mc.seed,
                        &opts,
                        &AdaptiveOptions {
                            max_trials: cfg.mc.trials.max(AdaptiveOptions::default().initial_trials),
                            ..AdaptiveOptions::default()
                        },
                    ),
                    MetricKind::Outage => estimate_outage_with(link, gamma_th, g, cfg.mc.trials, mode, cfg.mc.seed, &opts),
                    MetricKind::Ber => estimate_ber_with(link, m, g, cfg.mc.trials, mode, cfg.mc.seed, &opts),
                };
                let e = r.map_err(|e| fail(e.to_string()))?;
                p.mc_trials = Some(e.trials);
                p.mc = Some(e);
                p.seconds_mc = t.elapsed().as_secs_f64();
            }
            Ok((p, asym_method))
        })
        .collect();
    let mut points = Vec::with_capacity(results.len());
    let mut methods = Vec::new();
    for r in results {
        let (p, how) = r?;
        if let Some(h) = how {
            if !methods.contains(&h) {
                methods.push(h);
            }
        }
        points.push(p);
    }
    Ok(PerfCurve {
        metric,
        axis: cfg.sweep.axis,
        asymptotic_method: (!methods.is_empty()).then(|| methods.join("+")),
        mc_mode: wants(Method::Mc).then(|| mode.label().to_string()),
        points,
    })
}

/// The simple-pole product form where it applies, the full dominant residue otherwise.
fn asymptote(
    link: &RisLinkConfig,
    metric: MetricKind,
    m: &BerModParams,
    gamma_th: f64,
    g: f64,
) -> Result<(f64, &'static str), AnalysisError> {
    let simple = match metric {
        MetricKind::Outage => outage_asymptotic(link, gamma_th, g),
        MetricKind::Ber => ber_asymptotic(link, m, g),
    };
    match simple {
        Ok(v) => Ok((v, "leading-residue")),
        Err(AnalysisError::FoxH(FoxHError::DegeneratePole { .. })) => {
            let v = match metric {
                MetricKind::Outage => outage_asymptotic_expansion(link, gamma_th, g)?,
                MetricKind::Ber => ber_asymptotic_expansion(link, m, g)?,
            };
            Ok((v, "pole-expansion"))
        }
        Err(e) => Err(e),
    }
}

fn write_csv(path: &std::path::Path, c: &PerfCurve) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Output(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(CSV_HEADER).map_err(err)?;
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for p in &c.points {
        w.write_record([
            p.axis.to_string(),
            opt(p.exact),
            opt(p.asymptotic),
            opt(p.mc.map(|e| e.estimate)),
            opt(p.mc.map(|e| e.ci_low)),
            opt(p.mc.map(|e| e.ci_high)),
            c.mc_mode.clone().unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
    Ok(())
}
