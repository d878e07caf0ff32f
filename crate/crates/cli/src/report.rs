//! Check and report types shared by all verification suites, with JSON and
//! markdown renderings. Fractions are serialized as exact strings; decimals
//! are display-only companions.

use kstab_core::rat::{format_rat, to_f64};
use kstab_core::Rat;
use serde::Serialize;

/// Name plus version of the binary, stamped into every report.
pub fn tool_id() -> String {
    format!("kstab {}", env!("CARGO_PKG_VERSION"))
}

/// Decimal rendering of an exact fraction, for human display only.
pub fn decimal(r: &Rat) -> String {
    format!("{:.6}", to_f64(r))
}

/// One verified equality or property, with its stable anchor slug.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl Check {
    pub fn strings(name: &str, anchor: &str, expected: String, computed: String) -> Check {
        let pass = expected == computed;
        Check { name: name.into(), anchor: anchor.into(), expected, computed, pass }
    }

    pub fn rat(name: &str, anchor: &str, expected: &Rat, computed: &Rat) -> Check {
        Check::strings(name, anchor, format_rat(expected), format_rat(computed))
    }

    pub fn property(name: &str, anchor: &str, holds: bool, detail: &str) -> Check {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            expected: "holds".into(),
            computed: if holds { "holds".into() } else { format!("violated: {detail}") },
            pass: holds,
        }
    }
}

/// Full suite report: tool id, ordered checks, summary counts, timing.
///
/// `timing_ms` is informational and excluded from determinism comparisons.
#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub timing_ms: u128,
}

impl Report {
    pub fn new(suite: &str, seed: Option<u64>, checks: Vec<Check>, timing_ms: u128) -> Report {
        let passed = checks.iter().filter(|c| c.pass).count();
        let failed = checks.len() - passed;
        Report { tool: tool_id(), suite: suite.into(), seed, checks, passed, failed, timing_ms }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_md(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# Verification report: {}\n\n", self.suite));
        out.push_str(&format!("Tool: {}", self.tool));
        if let Some(seed) = self.seed {
            out.push_str(&format!(" | seed: {seed}"));
        }
        out.push_str(&format!(" | {} passed, {} failed\n\n", self.passed, self.failed));
        out.push_str("| check | anchor | expected | computed | pass |\n");
        out.push_str("|---|---|---|---|---|\n");
        for c in &self.checks {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                c.name,
                c.anchor,
                c.expected,
                c.computed,
                if c.pass { "yes" } else { "NO" }
            ));
        }
        out
    }
}
