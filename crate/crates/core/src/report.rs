//! Verdict records produced by the verification suites.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One verified statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// The statement being checked, e.g. "W(1) x W(1) zeroth product".
    pub anchor: String,
    pub status: Status,
    pub residual_summary: String,
    pub millis: u64,
}

impl Check {
    pub fn new(
        id: impl Into<String>,
        anchor: impl Into<String>,
        status: Status,
        residual: impl Into<String>,
    ) -> Self {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            status,
            residual_summary: residual.into(),
            millis: 0,
        }
    }

    pub fn pass(id: impl Into<String>, anchor: impl Into<String>) -> Self {
        Check::new(id, anchor, Status::Pass, "0")
    }

    /// Pass when `residual` is `None`, otherwise a failure carrying it.
    pub fn from_residual(
        id: impl Into<String>,
        anchor: impl Into<String>,
        residual: Option<String>,
    ) -> Self {
        match residual {
            None => Check::pass(id, anchor),
            Some(r) => Check::new(id, anchor, Status::Fail, r),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Shortens long residual texts for reports.
pub fn summarize(text: &str, limit: usize) -> String {
    if text.chars().count() <= limit {
        return text.to_string();
    }
    let head: String = text.chars().take(limit).collect();
    format!("{head}... ({} chars)", text.chars().count())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub total: usize,
}

/// A full run: the configuration echo, every check sorted by id, and totals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    pub totals: Totals,
}

impl Report {
    pub fn new(config: serde_json::Value, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let mut totals = Totals {
            total: checks.len(),
            ..Totals::default()
        };
        for c in &checks {
            match c.status {
                Status::Pass => totals.pass += 1,
                Status::Fail => totals.fail += 1,
                Status::Skip => totals.skip += 1,
            }
        }
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks,
            totals,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.totals.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            out.push_str(&format!("{tag} {}  [{}]", c.id, c.anchor));
            if c.millis > 0 {
                out.push_str(&format!(" {}ms", c.millis));
            }
            out.push('\n');
            if c.status != Status::Pass {
                out.push_str(&format!("     {}\n", c.residual_summary));
            }
        }
        let t = &self.totals;
        out.push_str(&format!(
            "{} checks: {} pass, {} fail, {} skip\n",
            t.total, t.pass, t.fail, t.skip
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_sorts_and_counts() {
        let checks = vec![
            Check::new("b", "x", Status::Fail, "1"),
            Check::pass("a", "y"),
            Check::new("c", "z", Status::Skip, ""),
        ];
        let r = Report::new(serde_json::json!({"m": 4}), checks);
        assert_eq!(
            r.checks.iter().map(|c| c.id.as_str()).collect::<Vec<_>>(),
            ["a", "b", "c"]
        );
        assert_eq!(
            r.totals,
            Totals {
                pass: 1,
                fail: 1,
                skip: 1,
                total: 3
            }
        );
        assert!(!r.all_passed());
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_text().ends_with("3 checks: 1 pass, 1 fail, 1 skip\n"));
    }

    #[test]
    fn summarize_cuts_long_text() {
        assert_eq!(summarize("abc", 5), "abc");
        assert_eq!(summarize("abcdef", 3), "abc... (6 chars)");
    }
}
