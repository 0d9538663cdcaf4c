//! CSV export: one row per project with metrics and per-finder issue counts.

use super::ReportError;
use crate::finders::{registry, Issue};
use crate::metrics::{MetricsRecord, METRIC_NAMES};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub project: String,
    pub metrics: MetricsRecord,
    /// Issue totals in registry order.
    pub counts: Vec<usize>,
}

impl CsvRow {
    pub fn new(project: impl Into<String>, metrics: MetricsRecord, issues: &[Issue]) -> CsvRow {
        let counts = registry()
            .iter()
            .map(|f| issues.iter().filter(|i| i.finder_id == f.id()).count())
            .collect();
        CsvRow {
            project: project.into(),
            metrics,
            counts,
        }
    }

    pub fn count(&self, finder_id: &str) -> Option<usize> {
        registry()
            .iter()
            .position(|f| f.id() == finder_id)
            .map(|i| self.counts[i])
    }
}

pub fn csv_header() -> Vec<String> {
    std::iter::once("project".to_string())
        .chain(METRIC_NAMES.iter().map(|m| m.to_string()))
        .chain(registry().iter().map(|f| f.id().to_string()))
        .collect()
}

pub fn write_csv(rows: &[CsvRow]) -> Result<String, ReportError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(csv_header())
        .map_err(|e| ReportError::Csv(e.to_string()))?;
    for row in rows {
        let record = std::iter::once(row.project.clone())
            .chain(row.metrics.csv_cells())
            .chain(row.counts.iter().map(usize::to_string));
        writer
            .write_record(record)
            .map_err(|e| ReportError::Csv(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| ReportError::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ReportError::Csv(e.to_string()))
}

/// Metrics-only CSV: `project` plus the metric columns.
pub fn write_metrics_csv(rows: &[(String, MetricsRecord)]) -> Result<String, ReportError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("project").chain(METRIC_NAMES);
    writer
        .write_record(header)
        .map_err(|e| ReportError::Csv(e.to_string()))?;
    for (project, metrics) in rows {
        let record = std::iter::once(project.clone()).chain(metrics.csv_cells());
        writer
            .write_record(record)
            .map_err(|e| ReportError::Csv(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| ReportError::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ReportError::Csv(e.to_string()))
}
