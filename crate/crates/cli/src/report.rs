use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::SpecConfig;

pub const KERNEL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Failed, and the config says it should.
    ExpectedFail,
    /// Identity does not apply to this connection; reported only.
    Informational,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ExpectedFail => "expected-fail",
            Status::Informational => "informational",
            Status::Error => "error",
        }
    }

    pub fn counts_as_pass(self) -> bool {
        matches!(self, Status::Pass | Status::ExpectedFail | Status::Informational)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub status: Status,
    /// `null` when the suite could not be evaluated.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub samples: usize,
    pub worst_point: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub kernel_version: String,
    pub config: String,
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteResult>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(cfg: &SpecConfig, suites: Vec<SuiteResult>) -> Self {
        let verdict = if suites.iter().all(|s| s.status.counts_as_pass()) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Report {
            kernel_version: KERNEL_VERSION.to_string(),
            config: cfg.name.clone(),
            seed: cfg.seed,
            samples: cfg.samples,
            suites,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable table. Numbers use the shortest representation that
    /// reads back to the same `f64`, as in the JSON form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let name = if self.config.is_empty() {
            "(unnamed)"
        } else {
            &self.config
        };
        let _ = writeln!(
            out,
            "parstruct {}  config {}  seed {}  samples {}",
            self.kernel_version, name, self.seed, self.samples
        );
        let _ = writeln!(
            out,
            "{:<12} {:<14} {:>24} {:>10}  worst point",
            "suite", "status", "max residual", "tolerance"
        );
        for s in &self.suites {
            let residual = s.max_residual.map_or_else(|| "-".to_string(), num);
            let point = s.worst_point.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ");
            let _ = writeln!(
                out,
                "{:<12} {:<14} {:>24} {:>10}  ({})",
                s.name,
                s.status.as_str(),
                residual,
                num(s.tolerance),
                point
            );
            if let Some(note) = &s.note {
                let _ = writeln!(out, "{:<12} note: {note}", "");
            }
        }
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        let _ = writeln!(out, "verdict: {verdict}");
        out
    }
}

/// Shortest round-trip form, in exponent notation for small and large
/// magnitudes.
pub fn num(x: f64) -> String {
    if x == 0.0 || (1e-4..1e6).contains(&x.abs()) {
        format!("{x:?}")
    } else {
        format!("{x:e}")
    }
}
