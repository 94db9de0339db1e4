//! The `approximate` and `verify` operations as library calls.

use std::fmt;
use std::str::FromStr;

use als_core::error_model::{
    exhaustive_error_rate, exhaustive_error_rate_cubes, sampled_error_rate,
};
use als_core::pla::PlaDocument;
use als_core::{approximate_noe, noe_from_er, Cover, EngineConfig, LiteralRule};
use anyhow::{bail, Result};
use serde::Serialize;

use crate::io::Loaded;

/// Inputs up to which `verify` enumerates every input combination.
pub const EXHAUSTIVE_VERIFY_MAX_INPUTS: usize = als_core::error_model::EXHAUSTIVE_MAX_INPUTS;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Threshold {
    Noe(u64),
    Er(f64),
}

impl Threshold {
    pub fn noe(&self, n: usize) -> Result<u64> {
        Ok(match *self {
            Threshold::Noe(e) => e,
            Threshold::Er(er) => noe_from_er(er, n)?,
        })
    }

    pub fn er(&self) -> Option<f64> {
        match *self {
            Threshold::Er(er) => Some(er),
            Threshold::Noe(_) => None,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Noe(e) => write!(f, "noe:{e}"),
            Threshold::Er(er) => write!(f, "er:{er}"),
        }
    }
}

impl FromStr for Threshold {
    type Err = String;

    /// `noe:16`, `er:0.05` or `er:5%`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad threshold `{s}` (expected noe:<count> or er:<fraction>)");
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "noe" => value.parse().map(Threshold::Noe).map_err(|_| bad()),
            "er" => {
                let er = match value.strip_suffix('%') {
                    Some(p) => p.parse::<f64>().map(|x| x / 100.0),
                    None => value.parse::<f64>(),
                }
                .map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&er) {
                    return Err(bad());
                }
                Ok(Threshold::Er(er))
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ApproxOptions {
    pub engine: EngineConfig,
    pub rule: LiteralRule,
}

/// One line of the machine-readable report. Field names are stable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxRecord {
    pub circuit: String,
    pub inputs: usize,
    pub outputs: usize,
    pub cubes: usize,
    pub threshold: String,
    pub er_target: Option<f64>,
    pub noe: u64,
    /// Literals of the cover as parsed.
    pub original_literals: u64,
    /// Literals of the cover after error-free minimization.
    pub original_minimized_literals: u64,
    pub approx_literals: u64,
    pub approx_cubes: usize,
    /// approx_literals / original_literals.
    pub reduction_ratio: f64,
    pub eic_count: u64,
    pub measured_er: f64,
    /// The exhaustive oracle confirmed eic_count <= noe.
    pub verified: bool,
    pub minimizer: String,
    pub fell_back: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

pub fn approximate_loaded(
    loaded: &Loaded,
    threshold: Threshold,
    opts: &ApproxOptions,
) -> Result<(Cover, ApproxRecord)> {
    let f = loaded.cover(opts.rule)?;
    let noe = threshold.noe(f.n())?;
    let a = approximate_noe(&f, noe, &opts.engine)?;
    let report = exhaustive_error_rate(&f, &a.cover)?;
    let original = f.total_literals();
    let record = ApproxRecord {
        circuit: loaded.name.clone(),
        inputs: f.n(),
        outputs: f.m(),
        cubes: f.len(),
        threshold: threshold.to_string(),
        er_target: threshold.er(),
        noe,
        original_literals: original,
        original_minimized_literals: a.baseline_literals,
        approx_literals: a.cover.total_literals(),
        approx_cubes: a.cover.len(),
        reduction_ratio: if original == 0 {
            1.0
        } else {
            a.cover.total_literals() as f64 / original as f64
        },
        eic_count: report.eic_count,
        measured_er: report.er,
        verified: report.eic_count <= noe,
        minimizer: a.minimizer.as_str().to_string(),
        fell_back: a.fell_back,
        seconds: Some(a.seconds),
    };
    Ok((a.cover, record))
}

impl fmt::Display for ApproxRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "circuit            {} (i:{} o:{} p:{})",
            self.circuit, self.inputs, self.outputs, self.cubes
        )?;
        writeln!(
            f,
            "threshold          {} -> NoE {}",
            self.threshold, self.noe
        )?;
        writeln!(
            f,
            "literals           {} original, {} minimized, {} approximate ({:.4})",
            self.original_literals,
            self.original_minimized_literals,
            self.approx_literals,
            self.reduction_ratio
        )?;
        writeln!(
            f,
            "measured           {} EICs, ER {:.6}",
            self.eic_count, self.measured_er
        )?;
        writeln!(
            f,
            "verified           {}",
            if self.verified { "yes" } else { "NO" }
        )?;
        write!(f, "minimizer          {}", self.minimizer)?;
        if self.fell_back {
            write!(f, " (minimized original kept)")?;
        }
        if let Some(s) = self.seconds {
            write!(f, "\nseconds            {s:.3}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyRecord {
    pub inputs: usize,
    pub outputs: usize,
    pub method: String,
    pub samples: u64,
    pub eic_count: u64,
    pub er: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Per-output flip counts; only available from exhaustive evaluation.
    pub per_output_flips: Option<Vec<u64>>,
}

pub fn verify_docs(
    original: &PlaDocument,
    approx: &PlaDocument,
    samples: Option<u64>,
    seed: u64,
) -> Result<VerifyRecord> {
    let (n, m) = (original.num_inputs, original.num_outputs);
    if approx.num_inputs != n || approx.num_outputs != m {
        bail!(
            "dimension mismatch: original has {n} inputs and {m} outputs, approximation has {} and {}",
            approx.num_inputs,
            approx.num_outputs
        );
    }
    if samples.is_none() && n <= EXHAUSTIVE_VERIFY_MAX_INPUTS {
        let r = exhaustive_error_rate_cubes(&original.cubes, &approx.cubes, n, m)?;
        return Ok(VerifyRecord {
            inputs: n,
            outputs: m,
            method: "exhaustive".into(),
            samples: 1u64 << n,
            eic_count: r.eic_count,
            er: r.er,
            ci_low: r.er,
            ci_high: r.er,
            per_output_flips: Some(r.per_output_flips),
        });
    }
    let s = sampled_error_rate(
        &original.cubes,
        &approx.cubes,
        n,
        samples.unwrap_or(DEFAULT_SAMPLES),
        seed,
    );
    Ok(VerifyRecord {
        inputs: n,
        outputs: m,
        method: if s.enumerated {
            "exhaustive"
        } else {
            "sampled"
        }
        .into(),
        samples: s.samples,
        eic_count: s.errors,
        er: s.er,
        ci_low: s.low,
        ci_high: s.high,
        per_output_flips: None,
    })
}

impl fmt::Display for VerifyRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "method             {} ({} inputs evaluated)",
            self.method, self.samples
        )?;
        if self.method == "sampled" {
            writeln!(f, "errors             {} sampled inputs", self.eic_count)?;
            write!(
                f,
                "ER                 {:.6} (95% CI {:.6}..{:.6})",
                self.er, self.ci_low, self.ci_high
            )?;
        } else {
            writeln!(f, "eic_count          {}", self.eic_count)?;
            write!(f, "ER                 {:.6}", self.er)?;
        }
        if let Some(flips) = &self.per_output_flips {
            for (j, k) in flips.iter().enumerate() {
                write!(f, "\noutput {j:<11} {k} flips")?;
            }
        }
        Ok(())
    }
}
