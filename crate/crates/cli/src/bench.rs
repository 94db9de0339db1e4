//! Benchmark harness: runs `approximate` over a corpus directory and emits a
//! text table plus one JSON record per run.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::io::read_pla;
use crate::run::{approximate_loaded, ApproxOptions, ApproxRecord, Threshold};

/// Reference rows: circuit, original literals, literals reached at NoE 16.
pub const NOE16_ROWS: &[(&str, u64, u64)] = &[
    ("con1", 32, 24),
    ("rd73", 903, 556),
    ("inc", 198, 125),
    ("5xp1", 347, 202),
    ("sqrt8", 188, 83),
    ("rd84", 2070, 1511),
    ("misex1", 96, 77),
    ("clip", 793, 584),
    ("apex4", 5419, 5024),
    ("sao2", 496, 165),
    ("ex1010", 2718, 2636),
    ("alu4", 5087, 4847),
    ("misex3", 7784, 7242),
    ("table3", 2644, 2347),
    ("misex3c", 1561, 1115),
    ("b12", 207, 207),
    ("t481", 5233, 4975),
    ("table5", 2501, 2270),
];

/// ER percent, NoE as printed, approximate literals.
pub type ErPoint = (u32, u64, u64);

/// Reference rows at fixed error rates: circuit, original literals, then one
/// point each for 1%, 3% and 5%.
pub const ER_ROWS: &[(&str, u64, [ErPoint; 3])] = &[
    ("sao2", 496, [(1, 10, 274), (3, 30, 79), (5, 51, 37)]),
    (
        "ex1010",
        2718,
        [(1, 10, 2659), (3, 30, 2588), (5, 51, 2511)],
    ),
    (
        "alu4",
        5087,
        [(1, 163, 3730), (3, 491, 2693), (5, 819, 2139)],
    ),
    ("b12", 207, [(1, 372, 193), (3, 983, 170), (5, 1638, 153)]),
    (
        "t481",
        5233,
        [(1, 655, 1992), (3, 1966, 942), (5, 3276, 578)],
    ),
    (
        "table5",
        2501,
        [(1, 1310, 720), (3, 3932, 280), (5, 6553, 153)],
    ),
];

#[derive(Clone, Debug, PartialEq)]
pub enum BenchConfig {
    Noe16,
    ErSweep,
    /// Every `.pla` file in the corpus at each threshold.
    Custom(Vec<Threshold>),
}

impl FromStr for BenchConfig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "noe16" => Ok(BenchConfig::Noe16),
            "ersweep" => Ok(BenchConfig::ErSweep),
            _ => s
                .split(',')
                .map(|t| t.trim().parse::<Threshold>())
                .collect::<Result<Vec<_>, _>>()
                .map(BenchConfig::Custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Job {
    pub circuit: String,
    pub path: PathBuf,
    pub threshold: Threshold,
    pub reference_original: Option<u64>,
    pub reference_noe: Option<u64>,
    pub reference_literals: Option<u64>,
}

/// Locates `<name>.pla` in `dir`.
pub fn find_circuit(dir: &Path, name: &str) -> Option<PathBuf> {
    let p = dir.join(format!("{name}.pla"));
    p.is_file().then_some(p)
}

/// Expands a config into jobs over the files present in `corpus`; returns the
/// jobs and the names of table circuits that are missing.
pub fn plan(corpus: &Path, config: &BenchConfig) -> Result<(Vec<Job>, Vec<String>)> {
    let mut jobs = Vec::new();
    let mut missing = Vec::new();
    match config {
        BenchConfig::Noe16 => {
            for &(name, orig, ours) in NOE16_ROWS {
                match find_circuit(corpus, name) {
                    Some(path) => jobs.push(Job {
                        circuit: name.into(),
                        path,
                        threshold: Threshold::Noe(16),
                        reference_original: Some(orig),
                        reference_noe: Some(16),
                        reference_literals: Some(ours),
                    }),
                    None => missing.push(name.to_string()),
                }
            }
        }
        BenchConfig::ErSweep => {
            for &(name, orig, rows) in ER_ROWS {
                let Some(path) = find_circuit(corpus, name) else {
                    missing.push(name.to_string());
                    continue;
                };
                for (pct, noe, lits) in rows {
                    jobs.push(Job {
                        circuit: name.into(),
                        path: path.clone(),
                        threshold: Threshold::Er(pct as f64 / 100.0),
                        reference_original: Some(orig),
                        reference_noe: Some(noe),
                        reference_literals: Some(lits),
                    });
                }
            }
        }
        BenchConfig::Custom(thresholds) => {
            let mut files: Vec<PathBuf> = fs::read_dir(corpus)
                .with_context(|| format!("cannot list {}", corpus.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "pla"))
                .collect();
            files.sort();
            for path in files {
                let circuit = path.file_stem().unwrap().to_string_lossy().into_owned();
                for &threshold in thresholds {
                    jobs.push(Job {
                        circuit: circuit.clone(),
                        path: path.clone(),
                        threshold,
                        reference_original: None,
                        reference_noe: None,
                        reference_literals: None,
                    });
                }
            }
        }
    }
    Ok((jobs, missing))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub circuit: String,
    pub threshold: String,
    pub reference_original: Option<u64>,
    pub reference_noe: Option<u64>,
    pub reference_literals: Option<u64>,
    /// `ok`, `violation` (oracle found more EICs than allowed) or `error`.
    pub status: String,
    pub error: Option<String>,
    pub result: Option<ApproxRecord>,
}

impl BenchRecord {
    pub fn passed(&self) -> bool {
        self.status == "ok"
    }
}

pub fn run_job(job: &Job, opts: &ApproxOptions, strict: bool) -> BenchRecord {
    let outcome =
        read_pla(&job.path, strict).and_then(|l| approximate_loaded(&l, job.threshold, opts));
    let (status, error, result) = match outcome {
        Ok((_, rec)) if rec.verified => ("ok", None, Some(rec)),
        Ok((_, rec)) => ("violation", None, Some(rec)),
        Err(e) => ("error", Some(format!("{e:#}")), None),
    };
    if status != "ok" {
        log::error!("{} at {}: {status}", job.circuit, job.threshold);
    }
    BenchRecord {
        circuit: job.circuit.clone(),
        threshold: job.threshold.to_string(),
        reference_original: job.reference_original,
        reference_noe: job.reference_noe,
        reference_literals: job.reference_literals,
        status: status.into(),
        error,
        result,
    }
}

/// Runs all jobs, in parallel when asked; records keep job order.
pub fn run_bench(
    jobs: &[Job],
    opts: &ApproxOptions,
    strict: bool,
    parallel: bool,
) -> Vec<BenchRecord> {
    if parallel {
        jobs.par_iter().map(|j| run_job(j, opts, strict)).collect()
    } else {
        jobs.iter().map(|j| run_job(j, opts, strict)).collect()
    }
}

/// One JSON object per line. Without `timing` the `seconds` fields are
/// dropped so reports from different runs compare byte for byte.
pub fn to_jsonl(records: &[BenchRecord], timing: bool) -> String {
    let mut out = String::new();
    for r in records {
        let mut r = r.clone();
        if !timing {
            if let Some(res) = &mut r.result {
                res.seconds = None;
            }
        }
        out.push_str(&serde_json::to_string(&r).expect("records serialize"));
        out.push('\n');
    }
    out
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

/// Human-readable table with the reference numbers beside the achieved ones.
pub fn render_table(records: &[BenchRecord], timing: bool) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{:<10} {:>3} {:>3} {:<9} {:>6} {:>7} {:>7} {:>7} {:>7} {:>6} {:>6} {:>10} {:<9}",
        "circuit",
        "i",
        "o",
        "threshold",
        "NoE",
        "orig",
        "orig.min",
        "approx",
        "ref.",
        "red.",
        "EICs",
        "ER",
        "status"
    );
    if timing {
        let _ = write!(out, " {:>9}", "time(s)");
    }
    out.push('\n');
    for r in records {
        match &r.result {
            Some(a) => {
                let _ = write!(
                    out,
                    "{:<10} {:>3} {:>3} {:<9} {:>6} {:>7} {:>7} {:>7} {:>7} {:>6.3} {:>6} {:>10.6} {:<9}",
                    r.circuit,
                    a.inputs,
                    a.outputs,
                    r.threshold,
                    a.noe,
                    a.original_literals,
                    a.original_minimized_literals,
                    a.approx_literals,
                    opt(r.reference_literals),
                    a.reduction_ratio,
                    a.eic_count,
                    a.measured_er,
                    r.status
                );
                if timing {
                    let _ = write!(out, " {:>9.3}", a.seconds.unwrap_or(0.0));
                }
            }
            None => {
                let _ = write!(
                    out,
                    "{:<10} {:>3} {:>3} {:<9} {:>6} {:>7} {:>7} {:>7} {:>7} {:>6} {:>6} {:>10} {:<9} {}",
                    r.circuit,
                    "-",
                    "-",
                    r.threshold,
                    opt(r.reference_noe),
                    opt(r.reference_original),
                    "-",
                    "-",
                    opt(r.reference_literals),
                    "-",
                    "-",
                    "-",
                    r.status,
                    r.error.as_deref().unwrap_or("")
                );
            }
        }
        out.push('\n');
    }
    out
}
