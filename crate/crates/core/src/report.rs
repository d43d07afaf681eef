//! Verdict reports shared by every check.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "prob")]
    Probabilistic,
    #[serde(rename = "enumeration")]
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    /// Pass only if every part passes; any fail wins over inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        self.max(other)
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Outcome of one claim check. Replayable from `(claim, params, seed)`.
///
/// `elapsed_ms` is informational and left out of the serialized form when
/// unset, so artifacts stay byte-identical between runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub claim: String,
    pub params: BTreeMap<String, Value>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trials: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl VerdictReport {
    pub fn new(claim: impl Into<String>, method: Method) -> Self {
        VerdictReport {
            claim: claim.into(),
            params: BTreeMap::new(),
            method,
            trials: None,
            seed: None,
            verdict: Verdict::Pass,
            witness: None,
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_trials(mut self, trials: u32) -> Self {
        self.trials = Some(trials);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Records a failed sub-check; the first witness is kept.
    pub fn fail(&mut self, witness: impl Into<String>) {
        self.verdict = Verdict::Fail;
        if self.witness.is_none() {
            self.witness = Some(witness.into());
        }
    }

    pub fn combine(&mut self, verdict: Verdict) {
        self.verdict = self.verdict.and(verdict);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
