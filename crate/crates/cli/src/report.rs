//! Check records, the JSON report and CSV tables.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;

pub const SCHEMA: u32 = 1;
pub const TOOL: &str = "incl-verify";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// One check. `slack` is the distance to failure with the tolerance already
/// applied, so `slack >= 0` exactly when a quantitative check passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub paper_anchor: String,
    pub status: Status,
    pub slack: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub metrics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Value>,
}

impl Record {
    pub fn new(name: impl Into<String>, anchor: &str, status: Status) -> Self {
        Record {
            name: name.into(),
            paper_anchor: anchor.to_string(),
            status,
            slack: None,
            metrics: BTreeMap::new(),
            counterexample: None,
        }
    }

    /// Passes iff `slack >= 0`; a NaN slack is inconclusive.
    pub fn from_slack(name: impl Into<String>, anchor: &str, slack: f64) -> Self {
        let status = if slack.is_nan() {
            Status::Inconclusive
        } else if slack >= 0.0 {
            Status::Pass
        } else {
            Status::Fail
        };
        Record::new(name, anchor, status).with_slack(slack)
    }

    /// Passes iff `failures == 0`.
    pub fn from_count(name: impl Into<String>, anchor: &str, failures: usize) -> Self {
        let status = if failures == 0 { Status::Pass } else { Status::Fail };
        Record::new(name, anchor, status).metric("failures", failures as f64)
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack.is_finite().then_some(slack);
        self
    }

    /// Non-finite values are dropped so the report stays valid JSON.
    pub fn metric(mut self, key: &str, value: f64) -> Self {
        if value.is_finite() {
            self.metrics.insert(key.to_string(), value);
        }
        self
    }

    pub fn counterexample(mut self, value: Value) -> Self {
        self.counterexample = Some(value);
        self
    }

    pub fn maybe_counterexample(self, value: Option<Value>) -> Self {
        match value {
            Some(v) => self.counterexample(v),
            None => self,
        }
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub summary: Summary,
    pub records: Vec<Record>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub data: Option<Value>,
    /// Only present with `--timing`, since it breaks byte-identical reruns.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_s: Option<f64>,
}

impl Report {
    /// Records are sorted by name so the output does not depend on scheduling.
    pub fn new(config: RunConfig, mut records: Vec<Record>, data: Option<Value>) -> Self {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        let count = |s: Status| records.iter().filter(|r| r.status == s).count();
        let summary =
            Summary { pass: count(Status::Pass), fail: count(Status::Fail), inconclusive: count(Status::Inconclusive) };
        Report {
            schema: SCHEMA,
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            summary,
            records,
            data,
            wall_time_s: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn record(&self, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are finite");
        s.push('\n');
        s
    }
}

/// The records themselves as a table, for runs that produce no other CSV.
pub fn records_table(records: &[Record]) -> Table {
    let mut t = Table::new("records", &["name", "paper_anchor", "status", "slack"]);
    for r in records {
        let status = serde_json::to_value(r.status).expect("status serializes");
        t.push(vec![
            r.name.clone(),
            r.paper_anchor.clone(),
            status.as_str().unwrap_or_default().to_string(),
            cell(r.slack),
        ]);
    }
    t
}

/// A named CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Shortest round-trip decimal form; empty for missing values.
pub fn cell(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v}"),
        None => String::new(),
    }
}

/// Where table `name` goes when the primary output is `out`: the first table
/// takes `out` itself, later ones get `<stem>.<name>.csv` beside it.
pub fn table_path(out: &Path, name: &str, first: bool) -> std::path::PathBuf {
    if first {
        return out.to_path_buf();
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    out.with_file_name(format!("{stem}.{name}.csv"))
}
