use crate::{ExperimentConfig, ExperimentError};
use restriction_space::{AxiomReport, ReplacementStats};
use serde::Serialize;
use std::path::Path;

/// 95% Wilson score interval for `failures` out of `trials`.
pub fn wilson95(failures: usize, trials: usize) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z * Z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    let lo = if failures == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if failures == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateEstimate {
    pub label: String,
    pub trials: usize,
    pub failures: usize,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl RateEstimate {
    pub fn new(label: impl Into<String>, failures: usize, trials: usize) -> Self {
        let (ci_low, ci_high) = wilson95(failures, trials);
        let rate = if trials == 0 { 0.0 } else { failures as f64 / trials as f64 };
        RateEstimate { label: label.into(), trials, failures, rate, ci_low, ci_high }
    }

    pub fn overlaps(&self, other: &RateEstimate) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRow {
    pub experiment: String,
    pub trial: usize,
    pub seed: u64,
    pub delta: usize,
    pub restarts: usize,
    pub accepted: bool,
    pub k_forced_zero: bool,
    pub canonical_depth: usize,
    pub common_depth: Option<usize>,
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundSummary {
    pub round: usize,
    pub n: i32,
    pub reduced_side: usize,
    pub restarts: usize,
    pub stats: ReplacementStats,
    pub axioms: AxiomReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRow>,
    pub rates: Vec<RateEstimate>,
    pub rounds: Vec<RoundSummary>,
    pub final_side: Option<i32>,
}

impl TrialReport {
    pub fn to_json(&self) -> Result<String, ExperimentError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> Result<String, ExperimentError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.trials {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| ExperimentError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    /// Writes the JSON and CSV outputs named in the config.
    pub fn write_outputs(&self) -> Result<(), ExperimentError> {
        let out = &self.config.output;
        if let Some(p) = &out.json {
            write(p, &self.to_json()?)?;
        }
        if let Some(p) = &out.csv {
            write(p, &self.to_csv()?)?;
        }
        Ok(())
    }

    pub fn rate(&self, label: &str) -> Option<&RateEstimate> {
        self.rates.iter().find(|r| r.label == label)
    }
}

fn write(path: &Path, text: &str) -> Result<(), ExperimentError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(std::fs::write(path, text)?)
}
