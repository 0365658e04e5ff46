//! The per-run summary document read by the report renderer.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::approximation::ApproximationTable;
use super::checks::CheckId;
use super::record::{EstimateRecord, Relation};
use super::uniqueness::TwinRunResult;
use crate::error::{Error, Result};

/// Slack allowed above a calibrated constant.
pub const CALIBRATION_SLACK: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdSource {
    Universal,
    Calibrated,
    /// No threshold applies; the constant is reported only.
    Uncalibrated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check_id: String,
    pub relation: Relation,
    /// Sup of the ratio series.
    pub empirical_constant: f64,
    /// For equality checks, the largest relative drift.
    pub max_relative_deviation: Option<f64>,
    pub threshold: Option<f64>,
    pub threshold_source: ThresholdSource,
    pub passed: bool,
    pub samples: usize,
    pub truncation_residual: Option<f64>,
}

/// Judges a record against its universal threshold or, failing that, a
/// calibrated constant.
pub fn assess(record: &EstimateRecord, calibrated: Option<f64>) -> CheckSummary {
    let universal = record.check_id.parse::<CheckId>().ok().and_then(|id| id.universal_threshold());
    let constant = record.empirical_constant();
    let deviation = (record.relation == Relation::Equality).then(|| record.max_relative_deviation());
    let measured = deviation.unwrap_or(constant);
    let (threshold, source) = match (universal, calibrated) {
        (Some(u), _) => (Some(u), ThresholdSource::Universal),
        (None, Some(c)) => (Some(c * (1.0 + CALIBRATION_SLACK)), ThresholdSource::Calibrated),
        (None, None) => (None, ThresholdSource::Uncalibrated),
    };
    CheckSummary {
        check_id: record.check_id.clone(),
        relation: record.relation,
        empirical_constant: constant,
        max_relative_deviation: deviation,
        threshold,
        threshold_source: source,
        passed: threshold.is_none_or(|th| measured <= th) && record.is_well_formed(),
        samples: record.points.len(),
        truncation_residual: record.truncation_residual,
    }
}

/// Summary of one command invocation (one sweep value for sweeps).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub grid_n: usize,
    pub kappa: f64,
    pub gamma: String,
    pub p0: f64,
    pub p1: f64,
    /// File name of the records CSV, relative to the summary.
    pub csv: Option<String>,
    pub checks: Vec<CheckSummary>,
    /// Whether calibrated thresholds were in force for this configuration.
    pub calibration_applied: bool,
    pub snapshots: Vec<String>,
    pub uniqueness: Option<TwinRunResult>,
    pub approximation: Option<ApproximationTable>,
    /// `(parameter, value)` for sweep members.
    pub sweep_point: Option<(String, f64)>,
    pub passed: bool,
}

impl RunSummary {
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::record::RecordMeta;

    fn record(id: &str, relation: Relation, lhs: f64, rhs: f64) -> EstimateRecord {
        let meta = RecordMeta {
            grid_n: 64,
            kappa: 0.1,
            gamma_name: "log".into(),
            p0: 1.5,
            p1: 4.0,
            seed: 0,
        };
        let mut r = EstimateRecord::new(id, relation, meta);
        r.push(0.0, rhs, rhs);
        r.push(0.1, lhs, rhs);
        r
    }

    #[test]
    fn universal_thresholds_win() {
        let s = assess(&record("vorticity_transport_p0", Relation::UpperBound, 1.0005, 1.0), Some(0.1));
        assert_eq!(s.threshold_source, ThresholdSource::Universal);
        assert!(s.passed);
        let s = assess(&record("vorticity_transport_p1", Relation::UpperBound, 1.01, 1.0), None);
        assert!(!s.passed);
    }

    #[test]
    fn energy_uses_drift() {
        let s = assess(&record("energy_identity", Relation::Equality, 1.0 + 5e-7, 1.0), None);
        assert!(s.passed);
        assert!(s.max_relative_deviation.unwrap() > 4e-7);
        assert!(!assess(&record("energy_identity", Relation::Equality, 1.0 + 2e-6, 1.0), None).passed);
    }

    #[test]
    fn calibrated_and_uncalibrated() {
        let r = record("bernstein_chain", Relation::UpperBound, 3.0, 1.0);
        assert!(assess(&r, None).passed);
        assert!(assess(&r, Some(2.98)).passed);
        assert!(!assess(&r, Some(2.9)).passed);
    }
}
