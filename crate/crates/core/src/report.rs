//! Verification reports: one row per check, serialized to JSON or CSV.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One verified statement. `pass` holds when |computed - expected| ≤ tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub paper_ref: String,
    pub computed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Set when the check could not be evaluated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckRecord {
    pub fn new(check_id: &str, paper_ref: &str, computed: f64, expected: f64, tolerance: f64) -> Self {
        CheckRecord {
            check_id: check_id.to_string(),
            paper_ref: paper_ref.to_string(),
            computed,
            expected,
            tolerance,
            pass: (computed - expected).abs() <= tolerance,
            error: None,
        }
    }

    pub fn failed(check_id: &str, paper_ref: &str, expected: f64, tolerance: f64, error: String) -> Self {
        CheckRecord {
            check_id: check_id.to_string(),
            paper_ref: paper_ref.to_string(),
            computed: f64::NAN,
            expected,
            tolerance,
            pass: false,
            error: Some(error),
        }
    }

    /// Number of the acceptance criterion this row belongs to, from the
    /// two-digit prefix of the id.
    pub fn criterion(&self) -> Option<u32> {
        self.check_id.get(..2)?.parse().ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub timestamp: String,
    pub suite: String,
    pub nodes: usize,
    pub cells: usize,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub all_pass: bool,
}

impl Report {
    pub fn new(suite: &str, nodes: usize, cells: usize, seed: u64, checks: Vec<CheckRecord>) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        Report {
            timestamp: timestamp(),
            suite: suite.to_string(),
            nodes,
            cells,
            seed,
            checks,
            all_pass,
        }
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        Ok(())
    }

    /// Header row, then one check per line.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["check_id", "paper_ref", "computed", "expected", "tolerance", "pass", "error"])?;
        for c in &self.checks {
            out.write_record([
                c.check_id.clone(),
                c.paper_ref.clone(),
                format!("{:e}", c.computed),
                format!("{:e}", c.expected),
                format!("{:e}", c.tolerance),
                c.pass.to_string(),
                c.error.clone().unwrap_or_default(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Seconds since the Unix epoch.
fn timestamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    secs.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule_and_criterion() {
        let c = CheckRecord::new("08-total-variation", "x", 2.0004, 2.0, 1e-3);
        assert!(c.pass);
        assert_eq!(c.criterion(), Some(8));
        assert!(!CheckRecord::new("01-kernel", "x", 1e-5, 0.0, 1e-6).pass);
        assert!(!CheckRecord::new("01-kernel", "x", f64::NAN, 0.0, 1e-6).pass);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let r = Report::new("all", 16, 4, 0, vec![CheckRecord::new("02-a", "ref, with comma", 0.0, 0.0, 1.0)]);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("check_id,paper_ref"));
        assert!(lines[1].contains("\"ref, with comma\""));
    }
}
