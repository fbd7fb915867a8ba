//! Report assembly and rendering. Reports are deterministic: witnesses are
//! sorted, and timing is attached only when explicitly requested.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// False when the check's hypotheses never fired (a vacuous pass).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub substantive: Option<bool>,
    pub witnesses: Vec<String>,
}

impl CheckResult {
    pub fn new(name: &str, mut witnesses: Vec<String>) -> Self {
        witnesses.sort();
        CheckResult {
            name: name.to_string(),
            passed: witnesses.is_empty(),
            substantive: None,
            witnesses,
        }
    }

    pub fn with_substantive(mut self, substantive: bool) -> Self {
        self.substantive = Some(substantive);
        self
    }
}

#[derive(Serialize, Default)]
pub struct Report {
    pub command: String,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub school: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pool: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chosen: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frontier: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matching: Option<BTreeMap<String, Option<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, instance: &str) -> Self {
        Report {
            command: command.to_string(),
            instance: instance.to_string(),
            ..Default::default()
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.cycle.is_none()
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string_pretty(self).expect("report serializes");
        }
        let mut out = format!("command: {}\ninstance: {}\n", self.command, self.instance);
        if let Some(s) = &self.school {
            out += &format!("school: {s}\n");
        }
        if let Some(p) = &self.pool {
            out += &format!("pool: {{{}}}\n", p.join(", "));
        }
        if let Some(c) = &self.chosen {
            out += &format!("chosen: {{{}}}\n", c.join(", "));
        }
        if let Some(f) = &self.frontier {
            out += &format!("frontier ({} members):\n", f.len());
            for m in f {
                out += &format!("  {{{}}}\n", m.join(", "));
            }
        }
        if let Some(m) = &self.matching {
            out += "matching:\n";
            for (s, c) in m {
                out += &format!("  {s} -> {}\n", c.as_deref().unwrap_or("(outside option)"));
            }
        }
        if let Some(r) = self.rounds {
            out += &format!("rounds: {r}\n");
        }
        if let Some(r) = &self.ranking {
            out += &format!("revealed ranking: {}\n", r.join(" > "));
        }
        if let Some(c) = &self.cycle {
            out += &format!("revealed cycle: {}\n", c.join(" -> "));
        }
        for check in &self.checks {
            let verdict = match (check.passed, check.substantive) {
                (true, Some(false)) => "PASS (vacuous)",
                (true, _) => "PASS",
                (false, _) => "FAIL",
            };
            out += &format!("check {}: {verdict}\n", check.name);
            for w in &check.witnesses {
                out += &format!("  witness: {w}\n");
            }
        }
        if let Some(ms) = self.elapsed_ms {
            out += &format!("elapsed_ms: {ms}\n");
        }
        out
    }
}
