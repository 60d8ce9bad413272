use super::config::{Method, MetricKind, RunConfig};
use super::run::check_requests;
use super::{load, CliError};
use crate::analysis::{ber_kernel, cdf_kernel_raw, envelope_threshold, outage_kernel};
use crate::channel::{ChannelError, TpeParams};
use crate::foxh::validate_contour;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    pub severity: Severity,
    pub path: String,
    pub message: String,
}

impl Issue {
    fn error(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        }
    }

    fn warning(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{s}: {}: {}", self.path, self.message)
    }
}

/// Dry run of `source`: an unreadable or schema-invalid file is an `Err`;
/// everything else found is collected as issues.
pub fn validate(source: &str) -> Result<Vec<Issue>, CliError> {
    match load(source) {
        Ok(cfg) => Ok(validate_config(&cfg)),
        Err(CliError::Config { path, message }) => Ok(vec![Issue::error(path, message)]),
        Err(e) => Err(e),
    }
}

pub fn validate_config(cfg: &RunConfig) -> Vec<Issue> {
    let mut issues = Vec::new();
    let note = |r: Result<(), CliError>, issues: &mut Vec<Issue>| {
        if let Err(CliError::Config { path, message }) = r {
            issues.push(Issue::error(path, message));
        }
    };
    note(cfg.sweep.points().map(|_| ()), &mut issues);
    note(cfg.modulation.resolve().map(|_| ()), &mut issues);
    note(cfg.mc.composition().map(|_| ()), &mut issues);
    if !(cfg.mc.confidence > 0.0 && cfg.mc.confidence < 1.0) {
        issues.push(Issue::error("mc.confidence", format!("must lie in (0, 1), got {}", cfg.mc.confidence)));
    }
    if let Err(e) = cfg.budget.to_budget().validate() {
        issues.push(Issue::error("budget", e.to_string()));
    }
    let e = &cfg.elements;
    if e.count == 0 {
        issues.push(Issue::error("elements.count", "at least one element is required"));
    }
    let q = match e.phase_q() {
        Ok(q) if (0.0..=1.0).contains(&q) => Some(q),
        Ok(q) => {
            issues.push(Issue::error("elements.q", format!("q must lie in [0, 1], got {q}")));
            None
        }
        Err(CliError::Config { path, message }) => {
            issues.push(Issue::error(path, message));
            None
        }
        Err(_) => None,
    };
    let tpe = match &e.tpe {
        Some(t) => match TpeParams::new(t.betas, t.g0, t.series_order) {
            Ok(p) => {
                if let Err(ChannelError::InvalidMixture { reason, suggested_order }) = p.check_tail() {
                    let hint = suggested_order
                        .map(|k| format!("; increase series_order to at least {k}"))
                        .unwrap_or_default();
                    issues.push(Issue::warning("elements.tpe", format!("InvalidMixture: {reason}{hint}")));
                }
                Some(p)
            }
            Err(err) => {
                issues.push(Issue::error("elements.tpe", err.to_string()));
                None
            }
        },
        None => None,
    };
    let (h1, h2) = (e.hop1(), e.hop2());
    for i in 0..e.count {
        let result = cdf_kernel_raw(h1.alpha, h1.mu, h2.alpha, h2.mu, tpe.as_ref(), q.unwrap_or(0.0))
            .and_then(|p| validate_contour(&p).map(|_| ()));
        if let Err(err) = result {
            issues.push(Issue::error(format!("elements[{i}]"), format!("contour: {err}")));
        }
    }
    for (path, h) in [("elements", &h1), ("elements.hop2", &h2)] {
        for (name, v) in [("alpha", h.alpha), ("mu", h.mu), ("omega", h.omega)] {
            if !(v.is_finite() && v > 0.0) {
                issues.push(Issue::error(format!("{path}.{name}"), format!("must be positive, got {v}")));
            }
        }
    }
    if issues.iter().any(|i| i.severity == Severity::Error) {
        return issues;
    }

    // the scalar checks passed; now look at the requested computations
    let link = match cfg.link() {
        Ok(l) => l,
        Err(err) => {
            issues.push(Issue::error("elements", err.to_string()));
            return issues;
        }
    };
    if let Err(CliError::Config { path, message }) = check_requests(cfg, &link) {
        issues.push(Issue::error(path, message));
        return issues;
    }
    if cfg.methods.contains(&Method::Exact) {
        let g = cfg.gamma_bars(&link.budget).ok().and_then(|v| v.first().copied()).unwrap_or(1.0);
        let m = cfg.modulation.resolve().expect("checked above");
        for metric in &cfg.metrics {
            let kernel = match metric {
                MetricKind::Outage => outage_kernel(&link, envelope_threshold(cfg.gamma_th(), g)),
                MetricKind::Ber => ber_kernel(&link, &m, g),
            };
            if let Err(err) = kernel.and_then(|k| validate_contour(&k).map(|_| ())) {
                issues.push(Issue::error(
                    "methods",
                    format!("exact {} is not computable for this link: {err}", metric.label()),
                ));
            }
        }
    }
    issues
}
