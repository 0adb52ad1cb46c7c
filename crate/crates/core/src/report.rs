//! Value objects describing the outcome of checks. Nothing here prints.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::qfactory::Convention;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not run because the required truncation exceeds the ceiling.
    Skipped,
    /// A non-gating check (alternate convention or as-printed form) that
    /// does not hold. Carries its counterexample but does not fail a run.
    Divergent,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Divergent => "divergent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchRecord {
    pub n: u64,
    pub lhs: String,
    pub rhs: String,
}

/// Claim metadata carried alongside a report (used for CSV output).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimDetail {
    pub family: String,
    pub t: u64,
    pub s: u64,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "B")]
    pub b: u64,
    pub n_max: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub convention: Option<Convention>,
    pub trunc: u64,
    pub modulus: Option<u64>,
    pub status: Status,
    pub first_mismatch: Option<MismatchRecord>,
    pub millis: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<ClaimDetail>,
}

impl VerificationReport {
    pub fn new(id: impl Into<String>, trunc: usize, modulus: Option<u64>) -> VerificationReport {
        VerificationReport {
            id: id.into(),
            convention: None,
            trunc: trunc as u64,
            modulus,
            status: Status::Pass,
            first_mismatch: None,
            millis: 0,
            note: None,
            claim: None,
        }
    }

    /// Records the outcome. A mismatch turns the report into `Fail`, or
    /// `Divergent` when the check is not gating.
    pub fn conclude(
        mut self,
        mismatch: Option<MismatchRecord>,
        gating: bool,
        elapsed: Duration,
    ) -> Self {
        self.status = match (&mismatch, gating) {
            (None, _) => Status::Pass,
            (Some(_), true) => Status::Fail,
            (Some(_), false) => Status::Divergent,
        };
        self.first_mismatch = mismatch;
        self.millis = elapsed.as_millis() as u64;
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.first_mismatch = None;
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {}", reason.into()),
            None => reason.into(),
        });
        self
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = Some(convention);
        self
    }

    pub fn with_note(mut self, note: Option<String>) -> Self {
        self.note = note;
        self
    }

    pub fn with_claim(mut self, claim: ClaimDetail) -> Self {
        self.claim = Some(claim);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// `first_mismatch` is present exactly when the check did not hold.
    pub fn is_consistent(&self) -> bool {
        let has = self.first_mismatch.is_some();
        matches!(self.status, Status::Fail | Status::Divergent) == has
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    #[serde(default)]
    pub divergent: usize,
}

impl Summary {
    pub fn tally(reports: &[VerificationReport]) -> Summary {
        let mut s = Summary::default();
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
                Status::Divergent => s.divergent += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub reports: Vec<VerificationReport>,
    pub summary: Summary,
    pub millis: u64,
}

impl RunReport {
    pub fn new(
        command: impl Into<String>,
        params: BTreeMap<String, String>,
        reports: Vec<VerificationReport>,
        elapsed: Duration,
    ) -> RunReport {
        let summary = Summary::tally(&reports);
        RunReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            params,
            reports,
            summary,
            millis: elapsed.as_millis() as u64,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }
}
