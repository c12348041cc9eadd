//! Check records and run reports shared by the verification suites and the CLI.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The configuration is beyond the factorial budget; nothing was evaluated.
    Infeasible,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Infeasible => "infeasible",
        }
    }
}

/// Reproducible counterexample: the trial's inputs are regenerated from
/// `(seed, trial)`; `inputs` and `value` are their rendered forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub seed: u64,
    pub trial: u64,
    pub inputs: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub params: BTreeMap<String, Json>,
    pub trials: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    pub duration_ms: u64,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> CheckReport {
        CheckReport {
            name: name.into(),
            params: BTreeMap::new(),
            trials: 0,
            verdict: Verdict::Pass,
            witness: None,
            duration_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Json>) -> CheckReport {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Times a check body and stores the elapsed milliseconds in the report.
pub fn timed<F>(f: F) -> crate::Result<CheckReport>
where
    F: FnOnce() -> crate::Result<CheckReport>,
{
    let start = Instant::now();
    let mut report = f()?;
    report.duration_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: Json,
    pub checks: Vec<CheckReport>,
    pub verdict: Verdict,
    pub version: String,
}

impl RunReport {
    /// Aggregates check verdicts: any failure fails the run; infeasible checks
    /// are reported but do not fail it.
    pub fn new(config: Json, checks: Vec<CheckReport>) -> RunReport {
        let verdict = if checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        RunReport {
            config,
            checks,
            verdict,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// JSON with every `duration_ms` removed, for determinism comparisons.
    pub fn to_json_without_timings(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serialises");
        if let Some(checks) = value.get_mut("checks").and_then(Json::as_array_mut) {
            for c in checks {
                if let Some(obj) = c.as_object_mut() {
                    obj.remove("duration_ms");
                }
            }
        }
        serde_json::to_string_pretty(&value).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(
                out,
                "{:<10} {:<36} trials={:<5} {} ({} ms)",
                c.verdict.as_str().to_uppercase(),
                c.name,
                c.trials,
                params.join(" "),
                c.duration_ms
            );
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "           witness seed={} trial={} value={}", w.seed, w.trial, w.value);
                for (i, input) in w.inputs.iter().enumerate() {
                    let _ = writeln!(out, "             x{} = {}", i + 1, input);
                }
            }
        }
        let _ = writeln!(out, "verdict: {} (version {})", self.verdict.as_str(), self.version);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_verdict() {
        let pass = CheckReport::new("a");
        let mut infeasible = CheckReport::new("b");
        infeasible.verdict = Verdict::Infeasible;
        let report = RunReport::new(Json::Null, vec![pass.clone(), infeasible]);
        assert_eq!(report.verdict, Verdict::Pass);
        let mut fail = CheckReport::new("c");
        fail.verdict = Verdict::Fail;
        let report = RunReport::new(Json::Null, vec![pass, fail]);
        assert_eq!(report.verdict, Verdict::Fail);
    }

    #[test]
    fn witness_is_optional_in_json() {
        let report = RunReport::new(Json::Null, vec![CheckReport::new("a").param("t", 2)]);
        let json = report.to_json();
        assert!(!json.contains("witness"));
        assert!(json.contains("\"verdict\": \"pass\""));
        assert!(json.contains("duration_ms"));
        assert!(!report.to_json_without_timings().contains("duration_ms"));
    }
}
