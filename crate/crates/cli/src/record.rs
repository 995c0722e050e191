//! Machine-readable result records: JSON lines on stdout, a short human
//! summary on stderr, and optional columnar text for external plotters.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;

pub type Params = BTreeMap<String, serde_json::Value>;

/// One reported quantity. `expected` and `tolerance` are null for purely
/// informational values; `source` names where the expected value comes
/// from. `runtime_ms` stays 0 unless timings were requested, keeping
/// repeated runs byte-identical.
#[derive(Serialize)]
pub struct ResultRecord {
    pub command: String,
    pub parameters: Params,
    pub quantity: String,
    pub value: f64,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
    pub source: Option<String>,
    pub runtime_ms: u64,
}

pub struct Emitter {
    timings: bool,
    csv_path: Option<String>,
    csv: Option<(String, Vec<String>)>,
    printed: usize,
    failed: usize,
    start: Instant,
}

impl Emitter {
    pub fn new(timings: bool, csv_path: Option<String>) -> Self {
        Emitter {
            timings,
            csv_path,
            csv: None,
            printed: 0,
            failed: 0,
            start: Instant::now(),
        }
    }

    pub fn elapsed_ms(&self) -> u64 {
        if self.timings {
            self.start.elapsed().as_millis() as u64
        } else {
            0
        }
    }

    pub fn emit(&mut self, record: ResultRecord) {
        let line = serde_json::to_string(&record).expect("record serializes");
        println!("{line}");
        let status = match record.pass {
            Some(true) => "PASS",
            Some(false) => {
                self.failed += 1;
                "FAIL"
            }
            None => "info",
        };
        let mut detail = format!("{:.6e}", record.value);
        if let (Some(e), Some(t)) = (record.expected, record.tolerance) {
            detail.push_str(&format!(" (expected {e} within {t:.1e})"));
        }
        eprintln!("[{status}] {} :: {}: {detail}", record.command, record.quantity);
        self.printed += 1;
    }

    /// Stores one columnar emission; written on finish when a path was
    /// given. The first line is the column header.
    pub fn csv(&mut self, header: &str, rows: Vec<String>) {
        if self.csv_path.is_some() {
            self.csv = Some((header.to_string(), rows));
        }
    }

    /// Writes any stored columnar data and the stderr tally; returns the
    /// number of failed records.
    pub fn finish(self) -> std::io::Result<usize> {
        if let (Some(path), Some((header, rows))) = (&self.csv_path, &self.csv) {
            let mut f = std::fs::File::create(path)?;
            writeln!(f, "{header}")?;
            for r in rows {
                writeln!(f, "{r}")?;
            }
            eprintln!("columnar data written to {path}");
        } else if self.csv_path.is_some() {
            eprintln!("this command has no columnar emission; nothing written");
        }
        eprintln!("{} records, {} failed", self.printed, self.failed);
        Ok(self.failed)
    }
}

pub fn params(pairs: &[(&str, serde_json::Value)]) -> Params {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

pub fn record_against(
    command: &str,
    parameters: Params,
    quantity: &str,
    value: f64,
    expected: f64,
    tolerance: f64,
    source: &str,
    runtime_ms: u64,
) -> ResultRecord {
    ResultRecord {
        command: command.to_string(),
        parameters,
        quantity: quantity.to_string(),
        value,
        expected: Some(expected),
        tolerance: Some(tolerance),
        pass: Some((value - expected).abs() <= tolerance),
        source: Some(source.to_string()),
        runtime_ms,
    }
}

pub fn record_info(
    command: &str,
    parameters: Params,
    quantity: &str,
    value: f64,
    runtime_ms: u64,
) -> ResultRecord {
    ResultRecord {
        command: command.to_string(),
        parameters,
        quantity: quantity.to_string(),
        value,
        expected: None,
        tolerance: None,
        pass: None,
        source: None,
        runtime_ms,
    }
}
