//! Verification reports and their serialized forms.

pub mod csv;
pub mod json;
pub mod pnm;

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Skipped => "skipped",
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One checked statement.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: String,
    /// The mathematical statement under test, written as a formula.
    pub anchor: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub details: String,
}

impl Check {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, status: Status) -> Self {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            status,
            residual: None,
            details: String::new(),
        }
    }

    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = Some(residual);
        self
    }

    pub fn with_details(mut self, details: impl Into<String>) -> Self {
        self.details = details.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Aggregate status: fail if any check fails, otherwise inconclusive if any
/// check is inconclusive, otherwise pass. Skipped checks never fail a report.
pub fn overall_status(checks: &[Check]) -> Status {
    if checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if checks.iter().any(|c| c.status == Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub suite_name: String,
    pub checks: Vec<Check>,
    pub tool_version: String,
    pub timestamp: String,
    pub input_digest: String,
}

impl VerificationReport {
    pub fn new(suite_name: impl Into<String>) -> Self {
        VerificationReport {
            suite_name: suite_name.into(),
            checks: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: json::reproducible_timestamp(),
            input_digest: String::new(),
        }
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn status(&self) -> Status {
        overall_status(&self.checks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregation() {
        let pass = Check::new("a", "x", Status::Pass);
        let fail = Check::new("b", "x", Status::Fail);
        let inc = Check::new("c", "x", Status::Inconclusive);
        let skip = Check::new("d", "x", Status::Skipped);
        assert_eq!(overall_status(&[]), Status::Pass);
        assert_eq!(overall_status(&[pass.clone(), skip.clone()]), Status::Pass);
        assert_eq!(
            overall_status(&[pass.clone(), inc.clone()]),
            Status::Inconclusive
        );
        assert_eq!(overall_status(&[pass, inc, fail, skip]), Status::Fail);
    }
}
