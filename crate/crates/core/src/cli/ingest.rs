use std::path::Path;

use serde::{Deserialize, Serialize};

use super::commands::{emit, json_line, read_to_string};
use super::record::provenance_hash;
use super::{CliError, CliResult, IngestArgs, IngestUtility, EXIT_OK};
use crate::algorithms::gist;
use crate::error::Error;
use crate::instance::{Instance, Metric};
use crate::objective::{Problem, Schedule};
use crate::utility::{LinearUtility, MarginSimilarityUtility, Utility};

/// Dense similarity is only built up to this many points.
pub const DENSE_SIMILARITY_LIMIT: usize = 5000;

#[derive(Debug, Deserialize)]
struct EmbeddingRecord {
    embedding: Vec<f64>,
    uncertainty: f64,
}

#[derive(Debug, Serialize)]
struct IngestReport {
    n: usize,
    k: usize,
    lambda: f64,
    utility: &'static str,
    renormalized: bool,
    selected: Vec<usize>,
    f: f64,
    g: f64,
    div: f64,
    oracle_calls: u64,
    threshold: Option<f64>,
    instance_hash: String,
}

fn read_records(path: &Path) -> CliResult<(Vec<Vec<f64>>, Vec<f64>)> {
    let text = read_to_string(path)?;
    let mut points = Vec::new();
    let mut scores = Vec::new();
    for (line_no, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let rec: EmbeddingRecord = serde_json::from_str(line)
            .map_err(|e| CliError::parse(format!("{}:{}: {e}", path.display(), line_no + 1)))?;
        if let Some(first) = points.first().map(Vec::len) {
            if rec.embedding.len() != first {
                return Err(CliError::parse(format!(
                    "{}:{}: embedding has dimension {}, expected {first}",
                    path.display(),
                    line_no + 1,
                    rec.embedding.len()
                )));
            }
        }
        points.push(rec.embedding);
        scores.push(rec.uncertainty);
    }
    if points.is_empty() {
        return Err(CliError::parse(format!("{} holds no records", path.display())));
    }
    Ok((points, scores))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// Rows `i,j` or `i,j,s`; a missing similarity is taken from the embeddings.
fn read_edges(path: &Path, unit: &[Vec<f64>]) -> CliResult<Vec<(usize, usize, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let mut edges = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
        let bad = || CliError::parse(format!("{}:{}: expected `i,j[,s]`", path.display(), row + 1));
        let field = |i: usize| rec.get(i).ok_or_else(bad);
        let i: usize = field(0)?.parse().map_err(|_| bad())?;
        let j: usize = field(1)?.parse().map_err(|_| bad())?;
        if i >= unit.len() || j >= unit.len() {
            return Err(Error::IndexOutOfRange { index: i.max(j), n: unit.len() }.into());
        }
        let s = match rec.get(2) {
            Some(s) => s.parse().map_err(|_| bad())?,
            None => dot(&unit[i], &unit[j]).clamp(-1.0, 1.0),
        };
        edges.push((i, j, s));
    }
    Ok(edges)
}

pub(crate) fn ingest(args: &IngestArgs) -> CliResult<u8> {
    let (points, scores) = read_records(&args.embeddings)?;
    let (instance, renormalized) = Instance::cosine(points)?;
    if renormalized {
        eprintln!("warning: embeddings were not unit length and have been normalized");
    }
    let unit = match instance.metric() {
        Metric::Cosine(p) => p,
        _ => unreachable!("cosine constructor"),
    };
    let n = instance.len();
    let (utility, default_lambda): (Utility, f64) = match args.utility {
        IngestUtility::Margin => {
            let weights = scores.iter().map(|u| args.alpha * u).collect();
            (LinearUtility::new(weights)?.into(), 1.0 - args.alpha)
        }
        IngestUtility::MarginSimilarity => {
            let u = match &args.edges {
                Some(p) => {
                    let edges = read_edges(p, unit)?;
                    MarginSimilarityUtility::with_edges(scores, args.alpha_s, args.beta_s, &edges)?
                }
                None if n <= DENSE_SIMILARITY_LIMIT => {
                    MarginSimilarityUtility::with_embeddings(scores, args.alpha_s, args.beta_s, unit.clone())?
                }
                None => {
                    return Err(CliError::parameter(format!(
                        "{n} points exceed the dense similarity limit {DENSE_SIMILARITY_LIMIT}; pass --edges"
                    )))
                }
            };
            (u.into(), 1.0 - args.alpha_s)
        }
    };
    let lambda = args.lambda.unwrap_or(default_lambda);
    let schedule: Schedule = args.schedule.parse()?;
    let problem = Problem::new(&instance, &utility, lambda, args.k)?
        .with_epsilon(args.epsilon)?
        .with_schedule(schedule);
    let sol = gist(&problem)?;
    let report = IngestReport {
        n,
        k: args.k,
        lambda,
        utility: utility.name(),
        renormalized,
        selected: sol.selected,
        f: sol.f_value,
        g: sol.g_value,
        div: sol.div_value,
        oracle_calls: sol.oracle_calls,
        threshold: sol.winning_threshold,
        instance_hash: provenance_hash(&instance),
    };
    emit(args.out.as_deref(), &json_line(&report))?;
    Ok(EXIT_OK)
}
