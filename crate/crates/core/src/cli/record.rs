use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::CliResult;
use crate::instance::Instance;
use crate::objective::Solution;

/// Column set of every CSV the tool writes.
pub const CSV_HEADER: [&str; 9] = [
    "algorithm",
    "k",
    "seed",
    "f",
    "g",
    "div",
    "oracle_calls",
    "wall_time_ms",
    "threshold",
];

/// One algorithm run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub k: usize,
    pub seed: u64,
    pub f: f64,
    pub g: f64,
    pub div: f64,
    pub oracle_calls: u64,
    pub wall_time_ms: f64,
    pub threshold: Option<f64>,
    pub selected: Vec<usize>,
    pub instance_hash: String,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    algorithm: &'a str,
    k: usize,
    seed: u64,
    f: f64,
    g: f64,
    div: f64,
    oracle_calls: u64,
    wall_time_ms: f64,
    threshold: Option<f64>,
}

impl RunRecord {
    pub fn new(solution: &Solution, k: usize, seed: u64, wall_time_ms: f64, instance_hash: &str) -> Self {
        RunRecord {
            algorithm: solution.algorithm.label().to_string(),
            k,
            seed,
            f: solution.f_value,
            g: solution.g_value,
            div: solution.div_value,
            oracle_calls: solution.oracle_calls,
            wall_time_ms,
            threshold: solution.winning_threshold,
            selected: solution.selected.clone(),
            instance_hash: instance_hash.to_string(),
        }
    }

    fn csv_row(&self) -> CsvRow<'_> {
        CsvRow {
            algorithm: &self.algorithm,
            k: self.k,
            seed: self.seed,
            f: self.f,
            g: self.g,
            div: self.div,
            oracle_calls: self.oracle_calls,
            wall_time_ms: self.wall_time_ms,
            threshold: self.threshold,
        }
    }
}

/// SHA-256 of the instance's canonical JSON, hex encoded.
pub fn provenance_hash(instance: &Instance) -> String {
    Sha256::digest(instance.to_json().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub(crate) fn write_csv(out: impl Write, records: &[RunRecord]) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let io = |e: csv::Error| super::CliError::parse(format!("cannot write CSV: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.serialize(r.csv_row()).map_err(io)?;
    }
    w.flush().map_err(|e| super::CliError::parse(format!("cannot write CSV: {e}")))?;
    Ok(())
}
