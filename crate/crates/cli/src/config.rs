use std::path::PathBuf;

use halfweyl::ModelId;
use serde::{Deserialize, Serialize};

use crate::report::sig17;

/// Default report location when neither the config, the environment nor a
/// flag names one.
pub const DEFAULT_REPORT: &str = "halfweyl-report.json";

/// Environment variable that overrides the configured report path.
pub const REPORT_ENV: &str = "HALFWEYL_REPORT";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unknown model `{0}` (expected gaussian, s3xr, s2xr2, s4_round or cp2_point)")]
    UnknownModel(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub id: String,
    #[serde(default = "one", serialize_with = "sig17")]
    pub lambda: f64,
}

impl ModelSpec {
    pub fn new(id: ModelId, lambda: f64) -> Self {
        Self { id: id.as_str().to_string(), lambda }
    }

    pub fn model_id(&self) -> Result<ModelId, ConfigError> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.as_str() == self.id)
            .ok_or_else(|| ConfigError::UnknownModel(self.id.clone()))
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceTiers {
    /// Identities that involve no derivatives of the metric.
    #[serde(serialize_with = "sig17")]
    pub algebraic: f64,
    /// Identities on closed-form metric derivatives.
    #[serde(serialize_with = "sig17")]
    pub analytic: f64,
    /// Identities on finite-difference derivatives.
    #[serde(serialize_with = "sig17")]
    pub fd: f64,
}

impl Default for ToleranceTiers {
    fn default() -> Self {
        Self { algebraic: 1e-12, analytic: 1e-9, fd: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifierConfig {
    pub samples: u64,
    /// Bound on sampled numerators and denominators.
    pub bound: u64,
}

impl Default for CertifierConfig {
    fn default() -> Self {
        Self { samples: 1_000_000, bound: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub models: Vec<ModelSpec>,
    pub points_per_model: usize,
    pub seed: u64,
    pub tolerance_tiers: ToleranceTiers,
    pub certifier: CertifierConfig,
    /// Left out of the echoed config so copies of a report compare equal.
    #[serde(skip_serializing)]
    pub report_path: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            models: ModelId::ALL.into_iter().map(|id| ModelSpec::new(id, 1.0)).collect(),
            points_per_model: 100,
            seed: 42,
            tolerance_tiers: ToleranceTiers::default(),
            certifier: CertifierConfig::default(),
            report_path: PathBuf::from(DEFAULT_REPORT),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    /// Tolerances may be zero, which makes every check with a nonzero
    /// residual fail.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.models.is_empty() {
            return Err(ConfigError::Invalid("at least one model is required".into()));
        }
        for m in &self.models {
            m.model_id()?;
            if !(m.lambda > 0.0 && m.lambda.is_finite()) {
                return Err(ConfigError::Invalid(format!("lambda for `{}` must be positive, got {}", m.id, m.lambda)));
            }
        }
        if self.points_per_model == 0 {
            return Err(ConfigError::Invalid("points_per_model must be at least 1".into()));
        }
        let t = &self.tolerance_tiers;
        for (name, v) in [("algebraic", t.algebraic), ("analytic", t.analytic), ("fd", t.fd)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ConfigError::Invalid(format!(
                    "tolerance `{name}` must be finite and nonnegative, got {v}"
                )));
            }
        }
        if self.certifier.bound == 0 {
            return Err(ConfigError::Invalid("certifier bound must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = RunConfig::from_toml("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.models.len(), 5);
        assert_eq!(cfg.certifier.samples, 1_000_000);
    }

    #[test]
    fn partial_file_keeps_other_defaults() {
        let cfg =
            RunConfig::from_toml("seed = 7\n[[models]]\nid = \"s2xr2\"\nlambda = 2.0\n[tolerance_tiers]\nfd = 1e-5\n")
                .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.models, vec![ModelSpec { id: "s2xr2".into(), lambda: 2.0 }]);
        assert_eq!(cfg.tolerance_tiers.fd, 1e-5);
        assert_eq!(cfg.tolerance_tiers.analytic, 1e-9);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(RunConfig::from_toml("[[models]]\nid = \"torus\"\n"), Err(ConfigError::UnknownModel(_))));
        assert!(matches!(
            RunConfig::from_toml("[[models]]\nid = \"s3xr\"\nlambda = -1.0\n"),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(RunConfig::from_toml("points_per_model = 0\n"), Err(ConfigError::Invalid(_))));
        assert!(matches!(RunConfig::from_toml("colour = 1\n"), Err(ConfigError::Parse(_))));
        assert!(RunConfig::from_toml("[tolerance_tiers]\nfd = 0.0\n").is_ok());
    }
}
