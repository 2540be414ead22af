//! Verification reports and their JSON form.

use std::time::{SystemTime, UNIX_EPOCH};

use orbit_site_core::Guards;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::codec::SCHEMA;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The statement being checked, by name.
    pub anchor: String,
    pub inputs: Value,
    pub outputs: Value,
    pub outcome: Outcome,
    /// Indices that locate a failure or the guard that caused a skip.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardsJson {
    pub max_degree: usize,
    pub max_order: usize,
    pub max_chains: u64,
    pub max_enumeration: u64,
    pub max_matrix_dim: usize,
    pub max_sieves: u64,
}

impl From<&Guards> for GuardsJson {
    fn from(g: &Guards) -> Self {
        GuardsJson {
            max_degree: g.max_degree,
            max_order: g.max_order,
            max_chains: g.max_chains,
            max_enumeration: g.max_enumeration,
            max_matrix_dim: g.max_matrix_dim,
            max_sieves: g.max_sieves,
        }
    }
}

/// Guard overrides, each field optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuardOverrides {
    pub max_degree: Option<usize>,
    pub max_order: Option<usize>,
    pub max_chains: Option<u64>,
    pub max_enumeration: Option<u64>,
    pub max_matrix_dim: Option<usize>,
    pub max_sieves: Option<u64>,
}

impl GuardOverrides {
    pub fn apply(&self, mut g: Guards) -> Guards {
        if let Some(v) = self.max_degree {
            g.max_degree = v;
        }
        if let Some(v) = self.max_order {
            g.max_order = v;
        }
        if let Some(v) = self.max_chains {
            g.max_chains = v;
        }
        if let Some(v) = self.max_enumeration {
            g.max_enumeration = v;
        }
        if let Some(v) = self.max_matrix_dim {
            g.max_matrix_dim = v;
        }
        if let Some(v) = self.max_sieves {
            g.max_sieves = v;
        }
        g
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: String,
    pub tool_version: String,
    pub guards: GuardsJson,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl VerificationReport {
    pub fn new(suite: &str, guards: &Guards, checks: Vec<CheckRecord>) -> Self {
        let mut summary = Summary { total: checks.len(), ..Summary::default() };
        for c in &checks {
            match c.outcome {
                Outcome::Pass => summary.passed += 1,
                Outcome::Fail => summary.failed += 1,
                Outcome::Skipped => summary.skipped += 1,
            }
        }
        VerificationReport {
            schema: SCHEMA.into(),
            suite: suite.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            guards: guards.into(),
            checks,
            summary,
            timestamp: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Drops every timing field so that output is reproducible.
    pub fn strip_timing(&mut self) {
        self.timestamp = None;
        for c in &mut self.checks {
            c.runtime_ms = None;
        }
    }

    pub fn stamp(&mut self) {
        self.timestamp = Some(unix_now());
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Fail)
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.outcome {
                Outcome::Pass => "PASS",
                Outcome::Fail => "FAIL",
                Outcome::Skipped => "SKIP",
            };
            out.push_str(&format!("{tag}  {}  {}\n", c.id, compact(&c.outputs)));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{}: {} checks, {} passed, {} failed, {} skipped\n",
            self.suite, s.total, s.passed, s.failed, s.skipped
        ));
        out
    }
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn compact(v: &Value) -> String {
    let s = v.to_string();
    if s.len() > 160 {
        format!("{}…", &s[..s.char_indices().take_while(|(i, _)| *i < 160).last().map_or(0, |(i, _)| i)])
    } else {
        s
    }
}
