use halfweyl::Certificate;
use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::RunConfig;

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA: &str = "halfweyl.report/1";

/// `x` with 17 significant digits, so every `f64` round-trips; `null` for
/// non-finite values, which JSON cannot carry.
pub fn format17(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

pub fn sig17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    match format17(*x) {
        Some(text) => RawValue::from_string(text).map_err(S::Error::custom)?.serialize(s),
        None => s.serialize_none(),
    }
}

fn sig17_all<S: Serializer>(xs: &[f64; 4], s: S) -> Result<S::Ok, S::Error> {
    let raw: Result<Vec<Option<Box<RawValue>>>, _> =
        xs.iter().map(|&x| format17(x).map(RawValue::from_string).transpose()).collect();
    raw.map_err(S::Error::custom)?.serialize(s)
}

/// Which derivative route produced the data an identity was evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Analytic,
    FiniteDifference,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Algebraic,
    Analytic,
    Fd,
}

/// One identity at one point of one model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityEntry {
    pub model: String,
    #[serde(serialize_with = "sig17")]
    pub lambda: f64,
    pub point_index: usize,
    #[serde(serialize_with = "sig17_all")]
    pub point: [f64; 4],
    pub identity_id: String,
    pub scheme: Scheme,
    pub tier: Tier,
    #[serde(serialize_with = "sig17")]
    pub residual: f64,
    #[serde(serialize_with = "sig17")]
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Identities that do not apply on some points, counted per reason.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkipEntry {
    pub model: String,
    #[serde(serialize_with = "sig17")]
    pub lambda: f64,
    pub identity_id: String,
    pub scheme: Scheme,
    pub reason: String,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Aggregate {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Verify,
    Certify,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: Command,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<IdentityEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkipEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Certificate>,
    /// Hard failures that stopped part of the run, e.g. a symbolic identity
    /// that did not hold.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    pub aggregate: Aggregate,
    pub exit_code: i32,
}

impl RunReport {
    pub(crate) fn new(command: Command, config: &RunConfig) -> Self {
        Self {
            schema: SCHEMA,
            command,
            config: config.clone(),
            identities: Vec::new(),
            skipped: Vec::new(),
            certificates: Vec::new(),
            errors: Vec::new(),
            aggregate: Aggregate::default(),
            exit_code: 0,
        }
    }

    /// Fills `aggregate` and `exit_code` from the collected results.
    pub(crate) fn finish(&mut self) {
        let mut agg = Aggregate { skipped: self.skipped.iter().map(|s| s.count).sum(), ..Aggregate::default() };
        for e in &self.identities {
            agg.total += 1;
            agg.passed += usize::from(e.pass);
        }
        for c in &self.certificates {
            agg.total += 1;
            agg.passed += usize::from(c.is_certified());
        }
        agg.total += self.errors.len();
        agg.failed = agg.total - agg.passed;
        self.aggregate = agg;
        self.exit_code = if agg.failed == 0 { 0 } else { 1 };
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityEntry> {
        self.identities.iter().filter(|e| !e.pass)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report values are serializable");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(format17(0.1).unwrap(), "1.0000000000000001e-1");
        assert_eq!(format17(-2.0).unwrap(), "-2.0000000000000000e0");
        assert_eq!(format17(f64::NAN), None);
        let x = 1.0 / 3.0;
        assert_eq!(format17(x).unwrap().parse::<f64>().unwrap(), x);
    }

    #[test]
    fn entries_serialize_with_raw_numbers() {
        let e = IdentityEntry {
            model: "gaussian".into(),
            lambda: 1.0,
            point_index: 0,
            point: [0.5, f64::NAN, 0.0, -1.0],
            identity_id: "x".into(),
            scheme: Scheme::Analytic,
            tier: Tier::Algebraic,
            residual: 0.0,
            tolerance: 1e-12,
            pass: true,
            error: None,
        };
        let v: serde_json::Value = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(v["point"][1], serde_json::Value::Null);
        assert_eq!(v["tolerance"].as_f64(), Some(1e-12));
        assert!(serde_json::to_string(&e).unwrap().contains("\"lambda\":1.0000000000000000e0"));
    }

    #[test]
    fn exit_code_tracks_failures() {
        let mut r = RunReport::new(Command::Verify, &RunConfig::default());
        r.finish();
        assert_eq!((r.aggregate.failed, r.exit_code), (0, 0));
        r.errors.push("boom".into());
        r.finish();
        assert_eq!((r.aggregate.total, r.aggregate.failed, r.exit_code), (1, 1, 1));
    }
}
