//! Result files: `<name>.csv`, `<name>.summary.json` and, for PET runs,
//! `<name>.trace.json`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::run::ResultRecord;
use crate::verdict::Verdict;
use crate::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub name: String,
    pub kind: String,
    pub version: String,
    pub seed: u64,
    pub rows: usize,
    pub pass: bool,
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl Summary {
    pub fn of(record: &ResultRecord) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            name: record.name.clone(),
            kind: record.kind.as_str().into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: record.seed,
            rows: record.rows.len(),
            pass: record.pass(),
            verdicts: record.verdicts.clone(),
            wall_time_ms: record.wall_time_ms,
        }
    }
}

pub fn csv_bytes(record: &ResultRecord) -> Result<Vec<u8>, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| HarnessError::Runtime(e.to_string());
    w.write_record(&record.columns).map_err(err)?;
    for r in &record.rows {
        w.write_record(r).map_err(err)?;
    }
    w.into_inner().map_err(|e| HarnessError::Runtime(e.to_string()))
}

/// Read a CSV written by [`csv_bytes`] back into columns and rows.
pub fn read_csv(bytes: &[u8]) -> Result<(Vec<String>, Vec<Vec<String>>), HarnessError> {
    let mut r = csv::Reader::from_reader(bytes);
    let err = |e: csv::Error| HarnessError::Runtime(e.to_string());
    let columns = r.headers().map_err(err)?.iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|x| x.iter().map(String::from).collect()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    Ok((columns, rows))
}

/// Write all result files into `dir` and return their paths.
pub fn write_record(record: &ResultRecord, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    let csv_path = dir.join(format!("{}.csv", record.name));
    fs::write(&csv_path, csv_bytes(record)?)?;
    paths.push(csv_path);
    let summary_path = dir.join(format!("{}.summary.json", record.name));
    let json = serde_json::to_string_pretty(&Summary::of(record)).map_err(|e| HarnessError::Runtime(e.to_string()))?;
    fs::write(&summary_path, json + "\n")?;
    paths.push(summary_path);
    if let Some(trace) = &record.trace {
        let trace_path = dir.join(format!("{}.trace.json", record.name));
        let json = serde_json::to_string_pretty(trace).map_err(|e| HarnessError::Runtime(e.to_string()))?;
        fs::write(&trace_path, json + "\n")?;
        paths.push(trace_path);
    }
    Ok(paths)
}
