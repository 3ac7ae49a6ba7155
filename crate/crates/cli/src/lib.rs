//! Orchestration behind the `halfweyl` binary: configuration, the identity
//! suite over the model catalog, the certifier run, and JSON reports.

pub mod config;
pub mod report;
pub mod suite;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use halfweyl::certify::{sample_certify, symbolic_certificates};
use halfweyl::geometry::make_model;
use rayon::prelude::*;

pub use config::{CertifierConfig, ConfigError, ModelSpec, RunConfig, ToleranceTiers, DEFAULT_REPORT, REPORT_ENV};
pub use report::{Aggregate, Command, IdentityEntry, RunReport, Scheme, SkipEntry, Tier, SCHEMA};
pub use suite::{IdentitySpec, REGISTRY};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const IO: i32 = 3;
}

/// Runs every registered identity on every configured `(model, point)`.
/// Points are evaluated in parallel; entries are sorted by
/// `(model, lambda, point, identity, scheme)` so the report does not depend
/// on scheduling.
pub fn run_verify(config: &RunConfig) -> Result<RunReport, ConfigError> {
    config.validate()?;
    let mut tasks = Vec::new();
    for spec in &config.models {
        let model = make_model(spec.model_id()?, spec.lambda).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        for (index, x) in model.sample_points(config.points_per_model, config.seed).into_iter().enumerate() {
            tasks.push((spec, model.clone(), index, x));
        }
    }
    let tiers = config.tolerance_tiers;
    let results: Vec<_> = tasks
        .par_iter()
        .map(|(spec, model, index, x)| {
            (*spec, *index, *x, suite::evaluate_point(model, x, *index, config.seed, &tiers))
        })
        .collect();

    let mut report = RunReport::new(Command::Verify, config);
    let mut skips: BTreeMap<(String, u64, &str, Scheme, &str), (f64, usize)> = BTreeMap::new();
    for (spec, index, x, outcomes) in results {
        for o in outcomes {
            match o {
                suite::Outcome::Checked { id, scheme, residual, error } => {
                    let s = suite::lookup(id).expect("outcomes use registered ids");
                    let tier = suite::tier_for(s, scheme);
                    let tolerance = suite::tolerance(&tiers, tier);
                    report.identities.push(IdentityEntry {
                        model: spec.id.clone(),
                        lambda: spec.lambda,
                        point_index: index,
                        point: x,
                        identity_id: id.to_string(),
                        scheme,
                        tier,
                        residual,
                        tolerance,
                        pass: error.is_none() && residual <= tolerance,
                        error,
                    });
                }
                suite::Outcome::Skipped { id, scheme, reason } => {
                    skips
                        .entry((spec.id.clone(), spec.lambda.to_bits(), id, scheme, reason))
                        .or_insert((spec.lambda, 0))
                        .1 += 1;
                }
            }
        }
    }
    report.identities.sort_by(|a, b| {
        (&a.model, a.point_index, &a.identity_id, a.scheme)
            .cmp(&(&b.model, b.point_index, &b.identity_id, b.scheme))
            .then(a.lambda.total_cmp(&b.lambda))
    });
    report.skipped = skips
        .into_iter()
        .map(|((model, _, id, scheme, reason), (lambda, count))| SkipEntry {
            model,
            lambda,
            identity_id: id.to_string(),
            scheme,
            reason: reason.to_string(),
            count,
        })
        .collect();
    report.finish();
    Ok(report)
}

/// The symbolic certificates in proof order followed by the sampling
/// certificate. A symbolic identity that fails to hold is recorded in
/// `errors` under the name of its step.
pub fn run_certify(config: &RunConfig) -> Result<RunReport, ConfigError> {
    config.validate()?;
    let mut report = RunReport::new(Command::Certify, config);
    match symbolic_certificates() {
        Ok(certs) => report.certificates = certs,
        Err(e) => report.errors.push(e.to_string()),
    }
    let c = &config.certifier;
    report.certificates.push(sample_certify(c.samples, config.seed, c.bound));
    report.finish();
    Ok(report)
}

/// Report location: an explicit flag, else [`REPORT_ENV`], else the config.
pub fn resolve_report_path(flag: Option<&Path>, config: &RunConfig) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(REPORT_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => config.report_path.clone(),
    }
}

pub fn write_report(report: &RunReport, path: &Path) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, report.to_json())
}

/// One line per registered identity: id, tier, schemes and description.
pub fn identity_listing() -> String {
    let mut out = String::new();
    for s in REGISTRY {
        let schemes = if s.fd { "analytic,finite_difference" } else { "analytic" };
        let tier = match s.tier {
            Tier::Algebraic => "algebraic",
            Tier::Analytic => "analytic",
            Tier::Fd => "fd",
        };
        out.push_str(&format!("{:<28} {:<9} {:<26} {}\n", s.id, tier, schemes, s.description));
    }
    out
}
