use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::ProbeConfig;
use crate::encat::LawReport;
use crate::vbase::VMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// Overall outcome; maps to the CLI exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    Violation,
    HypothesesUnmet,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Certified => 0,
            Status::Violation => 1,
            Status::HypothesesUnmet => 2,
        }
    }
}

/// Maps and positions that let a failure be re-checked in isolation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub at: String,
    pub maps: Vec<(String, String)>,
}

impl Witness {
    pub fn at(at: impl Into<String>) -> Witness {
        Witness { at: at.into(), maps: Vec::new() }
    }

    pub fn with(mut self, label: &str, m: &VMap) -> Witness {
        self.maps.push((label.to_string(), m.to_string()));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub phase: String,
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub instance: String,
    pub seed: u64,
    pub samples: usize,
    pub battery: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub provenance: Provenance,
    pub checks: Vec<Check>,
    /// Phases whose failure means the hypotheses are unmet.
    pub hypothesis_phases: Vec<String>,
    /// Phases reported for information only.
    pub informational_phases: Vec<String>,
    /// Counts gathered along the way, such as probe totals.
    #[serde(default)]
    pub metrics: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(title: impl Into<String>, instance: impl Into<String>, cfg: &ProbeConfig) -> Report {
        Report {
            title: title.into(),
            provenance: Provenance {
                instance: instance.into(),
                seed: cfg.seed,
                samples: cfg.samples,
                battery: cfg.describe(),
            },
            checks: Vec::new(),
            hypothesis_phases: Vec::new(),
            informational_phases: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    pub fn hypotheses(mut self, phase: &str) -> Report {
        self.hypothesis_phases.push(phase.to_string());
        self
    }

    pub fn informational(mut self, phase: &str) -> Report {
        self.informational_phases.push(phase.to_string());
        self
    }

    pub fn push(&mut self, phase: &str, name: impl Into<String>, ok: bool, detail: impl Into<String>, witness: Option<Witness>) {
        self.checks.push(Check {
            phase: phase.to_string(),
            name: name.into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            detail: detail.into(),
            witness: if ok { None } else { Some(witness.unwrap_or_default()) },
        });
    }

    pub fn pass(&mut self, phase: &str, name: impl Into<String>, detail: impl Into<String>) {
        self.push(phase, name, true, detail, None);
    }

    pub fn not_applicable(&mut self, phase: &str, name: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check {
            phase: phase.to_string(),
            name: name.into(),
            verdict: Verdict::NotApplicable,
            detail: detail.into(),
            witness: None,
        });
    }

    /// One check per law report; the first violation becomes the witness.
    pub fn law(&mut self, phase: &str, name: impl Into<String>, rep: &LawReport) {
        let witness = rep.violations.first().map(|v| {
            let mut w = Witness::at(format!("{} at {}", v.law, v.at));
            if let Some((l, r)) = &v.witness {
                w = w.with("lhs", l).with("rhs", r);
            }
            w
        });
        let detail = format!("{} equations, {} violations", rep.checked, rep.violations.len());
        self.push(phase, name, rep.is_lawful(), detail, witness);
    }

    pub fn record(&mut self, key: impl Into<String>, value: u64) {
        self.metrics.insert(key.into(), value);
    }

    pub fn metric(&self, key: &str) -> Option<u64> {
        self.metrics.get(key).copied()
    }

    /// Append every check of another report under a phase prefix.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for (k, v) in other.metrics {
            self.metrics.insert(format!("{prefix}/{k}"), v);
        }
        for mut c in other.checks {
            c.phase = format!("{prefix}/{}", c.phase);
            self.checks.push(c);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn phase_passed(&self, phase: &str) -> bool {
        self.checks.iter().filter(|c| c.phase == phase).all(|c| c.verdict != Verdict::Fail)
    }

    pub fn status(&self) -> Status {
        let counts = |c: &Check| !self.informational_phases.contains(&c.phase);
        if self.failures().any(|c| self.hypothesis_phases.contains(&c.phase)) {
            Status::HypothesesUnmet
        } else if self.failures().any(counts) {
            Status::Violation
        } else {
            Status::Certified
        }
    }

    pub fn is_certified(&self) -> bool {
        self.status() == Status::Certified
    }

    /// Canonical machine-readable form (sorted keys, trailing newline).
    pub fn to_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        value["status"] = serde_json::to_value(self.status()).expect("status serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut s = String::new();
        let p = &self.provenance;
        let _ = writeln!(s, "{} [{}]", self.title, p.instance);
        let _ = writeln!(s, "seed {} samples {} battery {}", p.seed, p.samples, p.battery);
        for c in &self.checks {
            let mark = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::NotApplicable => "n/a ",
            };
            let _ = writeln!(s, "  [{mark}] {}: {} ({})", c.phase, c.name, c.detail);
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "         at {}", w.at);
                for (label, m) in &w.maps {
                    let _ = writeln!(s, "         {label} = {m}");
                }
            }
        }
        let _ = writeln!(s, "status: {:?}", self.status());
        s
    }
}
