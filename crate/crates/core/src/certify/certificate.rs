//! Certificate records and their text and line-delimited renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Verified,
    Assumed,
    Failed,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Verified => "VERIFIED",
            Status::Assumed => "ASSUMED",
            Status::Failed => "FAILED",
        }
    }
}

/// One named value; rationals are stored as exact "n" or "n/d" strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub index: usize,
    pub anchor: String,
    pub claim: String,
    pub values: Vec<Value>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Step {
    pub fn value(&self, name: &str) -> Option<&str> {
        self.values
            .iter()
            .find(|v| v.name == name)
            .map(|v| v.value.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NonexistenceConfirmed,
    Failed,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::NonexistenceConfirmed => "NONEXISTENCE-CONFIRMED",
            Verdict::Failed => "FAILED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub config: Vec<Value>,
    pub steps: Vec<Step>,
    pub verdict: Verdict,
    /// Claims of the ASSUMED steps, repeated for the summary.
    pub assumptions: Vec<String>,
    pub failed_step: Option<usize>,
}

impl Certificate {
    pub fn new(config: Vec<Value>) -> Self {
        Certificate {
            schema_version: SCHEMA_VERSION,
            config,
            steps: Vec::new(),
            verdict: Verdict::Failed,
            assumptions: Vec::new(),
            failed_step: None,
        }
    }

    pub fn step(&self, anchor: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.anchor == anchor)
    }

    pub fn count(&self, status: Status) -> usize {
        self.steps.iter().filter(|s| s.status == status).count()
    }

    pub fn is_confirmed(&self) -> bool {
        self.verdict == Verdict::NonexistenceConfirmed
    }

    /// Confirmed only when no step failed and every assumption is listed.
    pub fn finalize(&mut self, all_closed: bool) {
        self.assumptions = self
            .steps
            .iter()
            .filter(|s| s.status == Status::Assumed)
            .map(|s| format!("[{}] {}", s.index, s.claim))
            .collect();
        self.failed_step = self
            .steps
            .iter()
            .find(|s| s.status == Status::Failed)
            .map(|s| s.index);
        self.verdict = if all_closed && self.failed_step.is_none() {
            Verdict::NonexistenceConfirmed
        } else {
            Verdict::Failed
        };
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "certificate (schema {})", self.schema_version);
        for v in &self.config {
            let _ = writeln!(s, "  {}: {}", v.name, v.value);
        }
        s.push('\n');
        for step in &self.steps {
            let _ = writeln!(
                s,
                "[{:>2}] {:<8} {}  {}",
                step.index,
                step.status.label(),
                step.anchor,
                step.claim
            );
            for v in &step.values {
                let _ = writeln!(s, "       {} = {}", v.name, v.value);
            }
            for n in &step.notes {
                let _ = writeln!(s, "       note: {n}");
            }
        }
        s.push('\n');
        let _ = writeln!(
            s,
            "steps: {} verified, {} assumed, {} failed",
            self.count(Status::Verified),
            self.count(Status::Assumed),
            self.count(Status::Failed)
        );
        for a in &self.assumptions {
            let _ = writeln!(s, "assumption: {a}");
        }
        if let Some(i) = self.failed_step {
            let _ = writeln!(s, "failed at step {i}");
        }
        let _ = writeln!(s, "verdict: {}", self.verdict.label());
        s
    }

    /// A header record, one record per step, and a verdict record.
    pub fn render_jsonl(&self) -> String {
        let mut s = String::new();
        let header = serde_json::json!({
            "record": "header",
            "schema_version": self.schema_version,
            "config": self.config,
        });
        let _ = writeln!(s, "{header}");
        for step in &self.steps {
            let mut rec = serde_json::to_value(step).expect("step serializes");
            rec["record"] = "step".into();
            rec["schema_version"] = self.schema_version.into();
            let _ = writeln!(s, "{rec}");
        }
        let tail = serde_json::json!({
            "record": "verdict",
            "schema_version": self.schema_version,
            "verdict": self.verdict.label(),
            "assumptions": self.assumptions,
            "failed_step": self.failed_step,
        });
        let _ = writeln!(s, "{tail}");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Certificate {
        let mut c = Certificate::new(vec![Value {
            name: "field".into(),
            value: "0x10eb".into(),
        }]);
        c.steps.push(Step {
            index: 1,
            anchor: "a".into(),
            claim: "first".into(),
            values: vec![Value {
                name: "x".into(),
                value: "11/2".into(),
            }],
            status: Status::Verified,
            notes: vec![],
        });
        c.steps.push(Step {
            index: 2,
            anchor: "b".into(),
            claim: "second".into(),
            values: vec![],
            status: Status::Assumed,
            notes: vec!["why".into()],
        });
        c
    }

    #[test]
    fn verdict_rules() {
        let mut c = sample();
        c.finalize(true);
        assert!(c.is_confirmed());
        assert_eq!(c.assumptions, vec!["[2] second".to_string()]);
        c.steps[0].status = Status::Failed;
        c.finalize(true);
        assert_eq!(c.verdict, Verdict::Failed);
        assert_eq!(c.failed_step, Some(1));
    }

    #[test]
    fn jsonl_records_parse() {
        let mut c = sample();
        c.finalize(true);
        let text = c.render_jsonl();
        let recs: Vec<serde_json::Value> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(recs.len(), 4);
        assert!(recs.iter().all(|r| r["schema_version"] == SCHEMA_VERSION));
        assert_eq!(recs[1]["values"][0]["value"], "11/2");
        assert_eq!(recs[3]["verdict"], "NONEXISTENCE-CONFIRMED");
        assert!(c.render_text().contains("verdict: NONEXISTENCE-CONFIRMED"));
    }
}
