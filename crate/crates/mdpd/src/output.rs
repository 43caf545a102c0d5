//! CSV reports and the JSON run manifest.
//!
//! Floating-point values are written in scientific notation with 17
//! significant digits (`{:.16e}`), which round-trips every `f64` exactly.

use mdpd_core::eval::SweepReport;
use mdpd_core::pairwise::PairwiseStats;
use serde::Serialize;

use crate::ingest::IdMap;
use crate::Result;

pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV built from UTF-8 fields"))
}

/// MI matrix: a header of worker ids followed by `score`, then one row per
/// worker holding its MI with every worker (0 on the diagonal) and its score.
pub fn mi_csv(stats: &PairwiseStats, workers: &IdMap) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = workers.names().iter().map(String::as_str).collect();
    header.push("score");
    w.write_record(&header)?;
    for i in 0..stats.n_workers() {
        let mut row: Vec<String> = stats.row(i).iter().map(|&v| format_f64(v)).collect();
        row.push(format_f64(stats.scores()[i]));
        w.write_record(&row)?;
    }
    finish(w)
}

/// Sweep rows with columns `method,learner,l,error_rate[,gof],best,selected`.
///
/// `gof` is present only when requested and is empty for single-worker
/// subsets. `best` is `true` on the lowest-error row of each (method, learner)
/// group. `selected` lists worker ids separated by spaces, in selection order.
pub fn sweep_csv(report: &SweepReport, workers: &IdMap, with_gof: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["method", "learner", "l", "error_rate"];
    if with_gof {
        header.push("gof");
    }
    header.extend(["best", "selected"]);
    w.write_record(&header)?;
    for row in &report.rows {
        let mut rec =
            vec![row.method.name().to_string(), row.learner.clone(), row.l.to_string(), format_f64(row.error_rate)];
        if with_gof {
            rec.push(row.gof.map(format_f64).unwrap_or_default());
        }
        rec.push(row.best.to_string());
        rec.push(row.selected.iter().map(|&i| workers.name(i)).collect::<Vec<_>>().join(" "));
        w.write_record(&rec)?;
    }
    finish(w)
}

/// Workers by descending score: `rank,worker,score`, rank starting at 1.
pub fn scores_csv(curve: &[(usize, f64)], workers: &IdMap) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "worker", "score"])?;
    for (rank, &(i, s)) in curve.iter().enumerate() {
        w.write_record([(rank + 1).to_string(), workers.name(i).to_string(), format_f64(s)])?;
    }
    finish(w)
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Inputs,
    pub data: DataSummary,
    pub config: RunConfig,
    pub outputs: Vec<String>,
    pub best: Vec<BestRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Inputs {
    pub labels: String,
    pub truth: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DataSummary {
    pub n_items: usize,
    pub n_workers: usize,
    pub n_classes: usize,
    pub n_entries: usize,
    pub n_truth: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub select: Vec<&'static str>,
    pub learner: Vec<&'static str>,
    pub l_grid: Vec<usize>,
    pub max_iters: usize,
    pub tol: f64,
    pub smoothing: f64,
    pub report_gof: bool,
    pub seed: u64,
    pub threads: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BestRow {
    pub method: &'static str,
    pub learner: String,
    pub l: usize,
    pub error_rate: f64,
}

impl Manifest {
    pub fn best_rows(report: &SweepReport) -> Vec<BestRow> {
        report
            .rows
            .iter()
            .filter(|r| r.best)
            .map(|r| BestRow { method: r.method.name(), learner: r.learner.clone(), l: r.l, error_rate: r.error_rate })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}
