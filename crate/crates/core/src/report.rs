//! Verification reports shared by every suite.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::numerics::{approx_eq, rel_err, CNum, ToleranceCfg};

pub type Params = BTreeMap<String, String>;

/// Builds a [`Params`] map from `key => value` pairs (values via `Display`).
#[macro_export]
macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        #[allow(unused_mut)]
        let mut m = $crate::report::Params::new();
        $(m.insert($k.to_string(), $v.to_string());)*
        m
    }};
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SoftDiscrepancy,
    RejectedInput,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SoftDiscrepancy => "soft-discrepancy",
            Status::RejectedInput => "rejected-input",
        })
    }
}

/// One identity check.
///
/// `discrepancy_factor` is `lhs / rhs` and is present exactly when the status
/// is [`Status::SoftDiscrepancy`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub check: String,
    pub params: Params,
    pub lhs: CNum,
    pub rhs: CNum,
    pub rel_err: f64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy_factor: Option<CNum>,
    pub tail_estimate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    fn base(suite: &str, check: &str, params: Params, lhs: CNum, rhs: CNum) -> Self {
        Self {
            suite: suite.to_string(),
            check: check.to_string(),
            params,
            lhs,
            rhs,
            rel_err: rel_err(lhs, rhs),
            status: Status::Pass,
            discrepancy_factor: None,
            tail_estimate: 0.0,
            note: None,
        }
    }

    /// Hard numeric comparison: pass within `tol`, otherwise fail.
    pub fn hard(suite: &str, check: &str, params: Params, lhs: CNum, rhs: CNum, tol: ToleranceCfg) -> Self {
        let mut r = Self::base(suite, check, params, lhs, rhs);
        if !approx_eq(lhs, rhs, tol) || !lhs.is_finite() || !rhs.is_finite() {
            r.status = Status::Fail;
        }
        r
    }

    /// Soft comparison: a mismatch is reported with `lhs / rhs` but is not a
    /// failure.
    pub fn soft(suite: &str, check: &str, params: Params, lhs: CNum, rhs: CNum, tol: ToleranceCfg) -> Self {
        let mut r = Self::base(suite, check, params, lhs, rhs);
        if !lhs.is_finite() || !rhs.is_finite() {
            r.status = Status::Fail;
        } else if !approx_eq(lhs, rhs, tol) {
            r.status = Status::SoftDiscrepancy;
            r.discrepancy_factor = Some(if rhs.is_zero() { CNum::new(f64::NAN, 0.0) } else { lhs / rhs });
        }
        r
    }

    /// Exact comparison decided by the caller (rational or integer equality).
    pub fn exact(suite: &str, check: &str, params: Params, equal: bool, lhs: CNum, rhs: CNum) -> Self {
        let mut r = Self::base(suite, check, params, lhs, rhs);
        if equal {
            r.rel_err = 0.0;
        } else {
            r.status = Status::Fail;
            if r.rel_err == 0.0 {
                r.rel_err = f64::INFINITY;
            }
        }
        r
    }

    pub fn rejected(suite: &str, check: &str, params: Params, reason: impl Into<String>) -> Self {
        let nan = CNum::new(f64::NAN, f64::NAN);
        let mut r = Self::base(suite, check, params, nan, nan);
        r.rel_err = f64::NAN;
        r.status = Status::RejectedInput;
        r.note = Some(reason.into());
        r
    }

    pub fn with_tail(mut self, tail: f64) -> Self {
        self.tail_estimate = tail;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_hard_failure(&self) -> bool {
        self.status == Status::Fail
    }

    fn sort_key(&self) -> (&str, &str, &Params) {
        (&self.suite, &self.check, &self.params)
    }
}

/// Sorts by suite, check name, then parameter echo, independent of the order
/// in which parallel workers produced the reports.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

pub fn any_hard_failure(reports: &[VerificationReport]) -> bool {
    reports.iter().any(VerificationReport::is_hard_failure)
}
