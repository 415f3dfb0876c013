//! Metric report output: a single JSON object, plus an optional CSV of the
//! threshold curve.

use std::fs;
use std::path::Path;

use lmtc_core::metrics::MetricsReport;

use super::FormatError;

pub fn save_report(report: &MetricsReport, path: &Path) -> Result<(), FormatError> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| FormatError::file(path, e.to_string()))?;
    fs::write(path, json + "\n").map_err(|e| FormatError::io(path, e))
}

pub fn save_threshold_curve(curve: &[(f64, f64)], path: &Path) -> Result<(), FormatError> {
    let mut out = String::from("threshold,micro_f1\n");
    for (t, f1) in curve {
        out.push_str(&format!("{t},{f1}\n"));
    }
    fs::write(path, out).map_err(|e| FormatError::io(path, e))
}
