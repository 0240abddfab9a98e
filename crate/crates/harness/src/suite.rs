//! The bundled acceptance configs and the suite runner.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::config::ExperimentConfig;
use crate::run::{run_config, ResultRecord, RunOptions};
use crate::{exit, HarnessError};

#[derive(Clone, Copy, Debug)]
pub struct BundledConfig {
    pub file: &'static str,
    pub source: &'static str,
}

macro_rules! bundled {
    ($($file:literal),* $(,)?) => {
        &[$(BundledConfig { file: $file, source: include_str!(concat!("../configs/", $file)) }),*]
    };
}

const BUNDLED: &[BundledConfig] = bundled![
    "joint-ergodicity-q.toml",
    "counterexample.toml",
    "equidistribution.toml",
    "pet-linear.toml",
    "pet-golden.toml",
    "pet-corpus.toml",
    "seminorm-table.toml",
    "vdc-check.toml",
    "mean-ergodic-z.toml",
    "mean-ergodic-q.toml",
];

pub fn bundled_configs() -> &'static [BundledConfig] {
    BUNDLED
}

/// Every tag used by a bundled config, sorted.
pub fn known_tags() -> Vec<String> {
    let mut tags = BTreeSet::new();
    for b in BUNDLED {
        if let Ok(c) = ExperimentConfig::parse(b.source) {
            tags.extend(c.tags);
        }
    }
    tags.into_iter().collect()
}

pub struct SuiteEntry {
    pub file: String,
    pub outcome: Result<ResultRecord, HarnessError>,
}

pub struct SuiteReport {
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| matches!(&e.outcome, Ok(r) if r.pass()))
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass() {
            exit::PASS
        } else if self.entries.iter().all(|e| e.outcome.is_ok()) {
            exit::FAIL
        } else {
            exit::RUNTIME
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let width = self.entries.iter().map(|e| e.file.len()).max().unwrap_or(4).max(6);
        let _ = writeln!(out, "{:<width$}  status  verdicts", "config");
        for e in &self.entries {
            let (status, detail) = match &e.outcome {
                Ok(r) => {
                    let passed = r.verdicts.iter().filter(|v| v.pass).count();
                    let failed: Vec<&str> = r.verdicts.iter().filter(|v| !v.pass).map(|v| v.name.as_str()).collect();
                    let mut d = format!("{passed}/{}", r.verdicts.len());
                    if !failed.is_empty() {
                        d.push_str(&format!(" (failed: {})", failed.join(", ")));
                    }
                    (if r.pass() { "pass" } else { "FAIL" }, d)
                }
                Err(err) => ("ERROR", err.to_string()),
            };
            let _ = writeln!(out, "{:<width$}  {status:<6}  {detail}", e.file);
        }
        out
    }
}

/// Configs to run: the bundled sources, or the same file names read from
/// `dir` when given.
pub fn load_suite(dir: Option<&Path>) -> Result<Vec<(String, String)>, HarnessError> {
    let Some(dir) = dir else {
        return Ok(BUNDLED.iter().map(|b| (b.file.to_string(), b.source.to_string())).collect());
    };
    let expected: Vec<&str> = BUNDLED.iter().map(|b| b.file).collect();
    let missing: Vec<&str> = expected.iter().copied().filter(|f| !dir.join(f).is_file()).collect();
    if !missing.is_empty() {
        return Err(HarnessError::Suite(format!(
            "missing bundled config(s) {} in {}; expected set: {}",
            missing.join(", "),
            dir.display(),
            expected.join(", ")
        )));
    }
    expected
        .iter()
        .map(|f| Ok((f.to_string(), std::fs::read_to_string(dir.join(f))?)))
        .collect()
}

/// Run every selected config. An unknown tag is an error listing the known
/// ones; per-config failures are collected in the report.
pub fn run_suite(tag: Option<&str>, dir: Option<&Path>, options: &RunOptions) -> Result<SuiteReport, HarnessError> {
    let known = known_tags();
    if let Some(t) = tag {
        if !known.iter().any(|k| k == t) {
            return Err(HarnessError::Suite(format!("unknown tag `{t}`; known tags: {}", known.join(", "))));
        }
    }
    let mut entries = Vec::new();
    for (file, source) in load_suite(dir)? {
        let config = match ExperimentConfig::parse(&source) {
            Ok(c) => c,
            Err(e) => {
                entries.push(SuiteEntry { file, outcome: Err(e) });
                continue;
            }
        };
        if let Some(t) = tag {
            if !config.tags.iter().any(|x| x == t) {
                continue;
            }
        }
        entries.push(SuiteEntry { file, outcome: run_config(&config, options) });
    }
    Ok(SuiteReport { entries })
}
