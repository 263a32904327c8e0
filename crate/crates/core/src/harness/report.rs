use super::config::ExperimentConfig;
use crate::error::Result;
use serde::Serialize;
use std::path::Path;

/// One pass/fail verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    /// Acceptance criterion this check belongs to, if any.
    pub criterion: Option<u32>,
    pub description: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(id: &str, criterion: Option<u32>, description: &str, pass: bool, detail: String) -> Self {
        Check {
            id: id.to_string(),
            criterion,
            description: description.to_string(),
            pass,
            detail,
        }
    }
}

/// Sup error over the dense grid for one `(A, P)` cell.
#[derive(Debug, Clone, Serialize)]
pub struct SupErrorRow {
    pub amplitude: f64,
    pub half_window: usize,
    pub sup_error: f64,
    pub sup_error_db: f64,
    /// Fit prediction for the cell's shift bound.
    pub predicted_db: f64,
}

/// Noisy-sweep metrics for one `(P, SNR)` cell.
#[derive(Debug, Clone, Serialize)]
pub struct SnrRow {
    pub half_window: usize,
    pub snr_db: f64,
    /// RMS of `s(nT) - ŝ₁(nT)`.
    pub rms_error: f64,
    pub rms_error_db: f64,
    /// Max of `|s(nT) + w(nT) - ŝ₁(nT)|`.
    pub sup_sample_diff: f64,
    pub sup_sample_diff_db: f64,
    /// RMS of `w(nT)`.
    pub deviation: f64,
    pub deviation_db: f64,
    pub noise_attempts: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ErrorReport {
    pub sup_error: Vec<SupErrorRow>,
    pub snr: Vec<SnrRow>,
}

impl ErrorReport {
    pub fn lookup(&self, amplitude: f64, half_window: usize) -> Option<&SupErrorRow> {
        self.sup_error
            .iter()
            .find(|r| r.amplitude == amplitude && r.half_window == half_window)
    }

    pub fn all_finite_nonnegative(&self) -> bool {
        let sup = self.sup_error.iter().all(|r| r.sup_error.is_finite() && r.sup_error >= 0.0);
        let snr = self.snr.iter().all(|r| {
            [r.rms_error, r.sup_sample_diff, r.deviation]
                .iter()
                .all(|v| v.is_finite() && *v >= 0.0)
        });
        sup && snr
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub checks: Vec<Check>,
    pub errors: ErrorReport,
    /// Free-form measured quantities.
    pub measurements: serde_json::Map<String, serde_json::Value>,
    pub files: Vec<String>,
}

impl ExperimentReport {
    pub fn new(config: &ExperimentConfig) -> Self {
        ExperimentReport {
            experiment: config.experiment.name().to_string(),
            config: config.clone(),
            checks: Vec::new(),
            errors: ErrorReport::default(),
            measurements: serde_json::Map::new(),
            files: Vec::new(),
        }
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn measure(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.measurements.insert(key.to_string(), v);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

/// Verdict per acceptance criterion over a set of reports: a criterion
/// passes iff every check tagged with it passes.
pub fn criteria_summary(reports: &[ExperimentReport]) -> Vec<(u32, bool, Vec<&Check>)> {
    let mut ids: Vec<u32> = reports
        .iter()
        .flat_map(|r| r.checks.iter().filter_map(|c| c.criterion))
        .collect();
    ids.sort_unstable();
    ids.dedup();
    ids.into_iter()
        .map(|id| {
            let checks: Vec<&Check> = reports
                .iter()
                .flat_map(|r| r.checks.iter())
                .filter(|c| c.criterion == Some(id))
                .collect();
            let pass = checks.iter().all(|c| c.pass);
            (id, pass, checks)
        })
        .collect()
}
