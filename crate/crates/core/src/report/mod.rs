//! Issue and metric reports: console lines, CSV, JSON, scratchblocks text,
//! annotated projects and localized hints.

mod annotate;
mod hints;
mod json;
mod scratchblocks;
mod table;

use thiserror::Error;

use crate::finders::Issue;

pub use annotate::{
    annotate_project, annotate_sb3, annotate_value, COMMENT_HEIGHT, COMMENT_OFFSET_X, COMMENT_WIDTH,
};
pub use hints::{fill_template, parse_properties, render_hint, HintCatalog, FALLBACK_LOCALE};
pub use json::{
    build_json_report, issue_scratchblocks, write_json_report, JsonIssue, JsonReport, ProjectRef,
};
pub use scratchblocks::{
    expr as render_expr, find_owner, render_owner, render_procedure, render_scratchblocks,
    ISSUE_MARKER,
};
pub use table::{csv_header, write_csv, write_metrics_csv, CsvRow};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no hint text for key `{0}`")]
    MissingHintKey(String),
    #[error("block {block_id} not found in {actor}")]
    BlockNotFound { actor: String, block_id: String },
    #[error("no target named {0}")]
    TargetNotFound(String),
    #[error("invalid project: {0}")]
    InvalidProject(String),
    #[error("archive error: {0}")]
    Archive(String),
    #[error("CSV error: {0}")]
    Csv(String),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// `[SEVERITY] finder @ actor/block: hint`; the block part is omitted for actor-level issues.
pub fn console_line(
    issue: &Issue,
    catalog: &HintCatalog,
    locale: &str,
) -> Result<String, ReportError> {
    let location = match issue.block_ids.first() {
        Some(id) => format!("{}/{id}", issue.actor),
        None => issue.actor.clone(),
    };
    let hint = render_hint(issue, catalog, locale)?;
    Ok(format!(
        "[{}] {} @ {location}: {hint}",
        issue.severity.label(),
        issue.finder_id
    ))
}
