//! JSON issue report.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::hints::{render_hint, HintCatalog};
use super::scratchblocks::{find_owner, render_owner};
use super::ReportError;
use crate::ast::Program;
use crate::finders::{Category, Issue, Severity};
use crate::metrics::MetricsRecord;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonReport {
    pub project: ProjectRef,
    pub metrics: MetricsRecord,
    pub issues: Vec<JsonIssue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectRef {
    pub id: Option<u64>,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JsonIssue {
    pub finder_id: String,
    pub category: Category,
    pub severity: Severity,
    pub actor: String,
    pub script_top_block_id: Option<String>,
    pub block_ids: Vec<String>,
    pub hint_key: String,
    pub hint_params: BTreeMap<String, String>,
    pub hint: String,
    /// Rendering of the affected script, `None` for actor- or project-level issues.
    pub scratchblocks: Option<String>,
}

/// Scratchblocks text of the script an issue lives in, with its blocks marked.
pub fn issue_scratchblocks(program: &Program, issue: &Issue) -> Option<String> {
    let actor = program.actor(&issue.actor)?;
    let owner = find_owner(actor, issue.script_top_block_id.as_deref()?)?;
    let highlight: BTreeSet<String> = issue.block_ids.iter().cloned().collect();
    Some(render_owner(owner, &highlight))
}

pub fn build_json_report(
    program: &Program,
    issues: &[Issue],
    metrics: &MetricsRecord,
    catalog: &HintCatalog,
    locale: &str,
) -> Result<JsonReport, ReportError> {
    let issues = issues
        .iter()
        .map(|i| {
            Ok(JsonIssue {
                finder_id: i.finder_id.clone(),
                category: i.category,
                severity: i.severity,
                actor: i.actor.clone(),
                script_top_block_id: i.script_top_block_id.clone(),
                block_ids: i.block_ids.clone(),
                hint_key: i.hint_key.clone(),
                hint_params: i.hint_params.clone(),
                hint: render_hint(i, catalog, locale)?,
                scratchblocks: issue_scratchblocks(program, i),
            })
        })
        .collect::<Result<_, ReportError>>()?;
    Ok(JsonReport {
        project: ProjectRef {
            id: program.project_id,
            name: program.name.clone(),
        },
        metrics: *metrics,
        issues,
    })
}

/// Pretty-printed report followed by a newline.
pub fn write_json_report(
    program: &Program,
    issues: &[Issue],
    metrics: &MetricsRecord,
    catalog: &HintCatalog,
    locale: &str,
) -> Result<String, ReportError> {
    let report = build_json_report(program, issues, metrics, catalog, locale)?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    Ok(text)
}
