//! Uniform pass/fail records shared by the suites and the CLI.

use serde::Serialize;

use crate::kz::{Verdict, VerifyMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Degenerate point or exceptional prime; reported, not counted as failure.
    Exceptional,
    /// A conjectural expectation: recorded, never asserted.
    Measured,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub group: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<VerifyMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_bound: Option<f64>,
}

impl Check {
    pub fn new(group: &str, name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            group: group.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
            observed: None,
            expected: None,
            mode: None,
            failure_bound: None,
        }
    }

    pub fn dim(group: &str, name: impl Into<String>, observed: usize, expected: usize) -> Self {
        let mut c = Check::new(group, name, observed == expected, format!("dim {observed}, expected {expected}"));
        c.observed = Some(observed as i64);
        c.expected = Some(expected as i64);
        c
    }

    pub fn measured(group: &str, name: impl Into<String>, observed: usize, expected: usize) -> Self {
        let mut c = Check::dim(group, name, observed, expected);
        c.status = Status::Measured;
        c.detail = format!(
            "dim {observed}, conjectured {expected} ({})",
            if observed == expected { "agrees" } else { "differs" }
        );
        c
    }

    pub fn exceptional(group: &str, name: impl Into<String>, detail: impl Into<String>) -> Self {
        let mut c = Check::new(group, name, false, detail);
        c.status = Status::Exceptional;
        c
    }

    pub fn from_verdict(group: &str, name: impl Into<String>, v: &Verdict) -> Self {
        let mut c = Check::new(group, name, v.passed, v.detail.clone());
        c.mode = Some(v.mode);
        if v.mode == VerifyMode::Probabilistic && v.passed {
            c.failure_bound = Some(v.failure_bound);
        }
        c
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Counts by status.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub exceptional: usize,
    pub measured: usize,
}

impl Tally {
    pub fn of(checks: &[Check]) -> Self {
        let mut t = Tally::default();
        for c in checks {
            match c.status {
                Status::Pass => t.pass += 1,
                Status::Fail => t.fail += 1,
                Status::Exceptional => t.exceptional += 1,
                Status::Measured => t.measured += 1,
            }
        }
        t
    }
}

/// Merge per-point outcomes of the same check: pass only if every point
/// passes; the detail lists the points that did not.
pub fn merge_points(per_point: &[Check]) -> Check {
    let first = per_point.first().expect("at least one point");
    let mut out = first.clone();
    let bad: Vec<String> = per_point
        .iter()
        .enumerate()
        .filter(|(_, c)| c.status != first.status || c.observed != first.observed)
        .map(|(i, c)| format!("point {i}: {}", c.detail))
        .collect();
    let fails = per_point.iter().any(|c| c.status == Status::Fail);
    if fails {
        out.status = Status::Fail;
    }
    out.detail = if bad.is_empty() {
        format!("{} at all {} points", first.detail, per_point.len())
    } else {
        format!("unstable across points: {}; {}", first.detail, bad.join("; "))
    };
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_keeps_failure() {
        let a = Check::dim("g", "x", 3, 3);
        let b = Check::dim("g", "x", 2, 3);
        let m = merge_points(&[a.clone(), b]);
        assert_eq!(m.status, Status::Fail);
        assert!(m.detail.contains("point 1"));
        assert_eq!(merge_points(&[a.clone(), a]).status, Status::Pass);
    }

    #[test]
    fn serializes_lowercase_status() {
        let c = Check::measured("g", "x", 1, 2);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"status\":\"measured\""));
        assert!(!s.contains("failure_bound"));
    }
}
