use serde::Serialize;

use super::poly::RationalPoly;
use super::sampling::SamplingSummary;
use super::univariate::RootInfo;
use super::CertifyError;

/// One proof step: an exact identity `lhs ≡ rhs` and what follows from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub claim: String,
    #[serde(rename = "lhs-hash")]
    pub lhs_hash: String,
    #[serde(rename = "rhs-hash")]
    pub rhs_hash: String,
    pub conclusion: String,
}

impl Step {
    /// Check `lhs ≡ rhs` exactly; a mismatch is a hard failure.
    pub fn identity(
        claim: impl Into<String>,
        lhs: &RationalPoly,
        rhs: &RationalPoly,
        conclusion: impl Into<String>,
    ) -> Result<Self, CertifyError> {
        let claim = claim.into();
        if lhs != rhs {
            return Err(CertifyError::IdentityMismatch { difference: (lhs - rhs).to_string(), step: claim });
        }
        Ok(Self { claim, lhs_hash: lhs.hash(), rhs_hash: rhs.hash(), conclusion: conclusion.into() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    CertifiedNonnegative,
    Counterexample { point: Vec<String>, value: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub claim: String,
    pub steps: Vec<Step>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub roots: Vec<RootInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSummary>,
}

impl Certificate {
    pub(crate) fn new(name: &str, claim: &str) -> Self {
        Self {
            name: name.into(),
            claim: claim.into(),
            steps: Vec::new(),
            verdict: Verdict::CertifiedNonnegative,
            notes: Vec::new(),
            roots: Vec::new(),
            sampling: None,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedNonnegative
    }

    pub(crate) fn push(&mut self, step: Result<Step, CertifyError>) -> Result<(), CertifyError> {
        self.steps.push(step?);
        Ok(())
    }

    /// Record a counterexample; the first one found is kept.
    pub(crate) fn refute(&mut self, point: Vec<String>, value: String) {
        if self.is_certified() {
            self.verdict = Verdict::Counterexample { point, value };
        }
    }
}
