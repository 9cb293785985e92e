//! Machine-readable reports and replayable counterexamples.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FORMAT_VERSION: u64 = 1;

/// Everything needed to rebuild one case besides the seed and index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseConfig {
    pub instance: Value,
    pub group: String,
    pub shape: String,
    pub shapes: Vec<String>,
    pub max_points: usize,
    pub max_rank: usize,
    pub max_radius: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub class: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub format_version: u64,
    pub suite: String,
    pub law: String,
    pub config: CaseConfig,
    pub seed: u64,
    pub case: u64,
    pub error: ErrorInfo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub anchor: String,
    pub instances: u64,
    pub pass: u64,
    pub fail: u64,
    pub unknown: u64,
    pub first_counterexample: Option<Counterexample>,
    pub wall_ms: u64,
    pub tags: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub verdict: Verdict,
    pub laws: Vec<LawReport>,
}

impl SuiteReport {
    pub fn new(suite: &str, laws: Vec<LawReport>) -> Self {
        let verdict = if laws.iter().any(|l| l.fail > 0) {
            Verdict::Fail
        } else if laws.iter().any(|l| l.unknown > 0) {
            Verdict::Unknown
        } else {
            Verdict::Pass
        };
        SuiteReport { suite: suite.to_string(), verdict, laws }
    }

    pub fn law(&self, name: &str) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format_version: u64,
    pub seed: u64,
    /// `default`, `flag`, `env` or `scenario`.
    pub seed_source: String,
    pub instances_per_law: u64,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn new(seed: u64, seed_source: &str, instances_per_law: u64, suites: Vec<SuiteReport>) -> Self {
        Report {
            format_version: FORMAT_VERSION,
            seed,
            seed_source: seed_source.to_string(),
            instances_per_law,
            suites,
        }
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == name)
    }

    /// 0 when every suite passes, 1 on any failure, 2 when only unknowns
    /// stand in the way.
    pub fn exit_code(&self) -> i32 {
        if self.suites.iter().any(|s| s.verdict == Verdict::Fail) {
            1
        } else if self.suites.iter().any(|s| s.verdict == Verdict::Unknown) {
            2
        } else {
            0
        }
    }

    /// Zeroes the wall-clock fields so reports compare byte for byte.
    pub fn without_timing(mut self) -> Self {
        for l in self.suites.iter_mut().flat_map(|s| s.laws.iter_mut()) {
            l.wall_ms = 0;
        }
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed {} ({}), {} instances per law", self.seed, self.seed_source, self.instances_per_law);
        for s in &self.suites {
            let _ = writeln!(out, "suite {}: {}", s.suite, verdict_word(s.verdict));
            for l in &s.laws {
                let _ = writeln!(
                    out,
                    "  {:<24} {:>5} pass {:>3} fail {:>3} unknown {:>7} ms  {}",
                    l.law, l.pass, l.fail, l.unknown, l.wall_ms, l.anchor
                );
                if let Some(c) = &l.first_counterexample {
                    let _ = writeln!(
                        out,
                        "    case {} [{} / {} / {}]: {}: {}",
                        c.case,
                        c.config.instance,
                        c.config.group,
                        c.config.shape,
                        c.error.class,
                        c.error.message
                    );
                }
                if let Some(n) = &l.note {
                    let _ = writeln!(out, "    note: {n}");
                }
            }
        }
        out
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::Unknown => "unknown",
    }
}

impl Counterexample {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("counterexample serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law(fail: u64, unknown: u64) -> LawReport {
        LawReport {
            law: "l".into(),
            anchor: "a".into(),
            instances: 3,
            pass: 3 - fail - unknown,
            fail,
            unknown,
            first_counterexample: None,
            wall_ms: 12,
            tags: BTreeMap::new(),
            note: None,
        }
    }

    #[test]
    fn verdict_follows_counts() {
        assert_eq!(SuiteReport::new("s", vec![law(0, 0)]).verdict, Verdict::Pass);
        assert_eq!(SuiteReport::new("s", vec![law(0, 1)]).verdict, Verdict::Unknown);
        assert_eq!(SuiteReport::new("s", vec![law(1, 1)]).verdict, Verdict::Fail);
    }

    #[test]
    fn exit_codes() {
        let r = |l| Report::new(0, "default", 3, vec![SuiteReport::new("s", vec![l])]);
        assert_eq!(r(law(0, 0)).exit_code(), 0);
        assert_eq!(r(law(1, 0)).exit_code(), 1);
        assert_eq!(r(law(0, 2)).exit_code(), 2);
    }

    #[test]
    fn timing_is_the_only_difference_removed() {
        let r = Report::new(0, "default", 3, vec![SuiteReport::new("s", vec![law(0, 0)])]);
        let stripped = r.clone().without_timing();
        assert_eq!(stripped.suites[0].laws[0].wall_ms, 0);
        let back: Report = serde_json::from_str(&stripped.to_json()).unwrap();
        assert_eq!(back, stripped);
    }
}
