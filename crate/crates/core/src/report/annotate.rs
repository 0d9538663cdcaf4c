//! Writes issues back into a project as workspace comments.

use std::io::{Cursor, Read, Write};

use serde_json::{json, Map, Value};

use super::hints::{render_hint, HintCatalog};
use super::ReportError;
use crate::finders::Issue;

pub const COMMENT_WIDTH: u32 = 300;
pub const COMMENT_HEIGHT: u32 = 200;
/// Horizontal distance between a block and its comment.
pub const COMMENT_OFFSET_X: f64 = 400.0;
const COMMENT_ID_PREFIX: &str = "scratchlint-";

fn find_target<'v>(targets: &'v mut [Value], actor: &str) -> Option<&'v mut Map<String, Value>> {
    let stage_first = targets
        .iter()
        .position(|t| t["isStage"] == json!(true) && t["name"] == json!(actor));
    let index = stage_first.or_else(|| targets.iter().position(|t| t["name"] == json!(actor)))?;
    targets[index].as_object_mut()
}

fn coordinate(block: Option<&Value>, key: &str) -> f64 {
    block
        .and_then(|b| b.get(key))
        .and_then(Value::as_f64)
        .unwrap_or(0.0)
}

/// Adds one comment per issue to the owning target; returns the new project JSON.
pub fn annotate_value(
    root: &mut Value,
    issues: &[Issue],
    catalog: &HintCatalog,
    locale: &str,
) -> Result<(), ReportError> {
    let targets = root
        .get_mut("targets")
        .and_then(Value::as_array_mut)
        .ok_or_else(|| ReportError::InvalidProject("missing `targets` array".into()))?;
    let mut next = 0usize;
    for issue in issues {
        let text = render_hint(issue, catalog, locale)?;
        let target = find_target(targets, &issue.actor)
            .ok_or_else(|| ReportError::TargetNotFound(issue.actor.clone()))?;
        let block_id = issue.block_ids.first().cloned();
        let block = match &block_id {
            Some(id) => {
                let block = target.get("blocks").and_then(|b| b.get(id));
                if block.is_none() {
                    return Err(ReportError::BlockNotFound {
                        actor: issue.actor.clone(),
                        block_id: id.clone(),
                    });
                }
                block
            }
            None => None,
        };
        let (x, y) = (
            coordinate(block, "x") + COMMENT_OFFSET_X,
            coordinate(block, "y"),
        );
        let comments = target
            .entry("comments")
            .or_insert_with(|| Value::Object(Map::new()))
            .as_object_mut()
            .ok_or_else(|| {
                ReportError::InvalidProject(format!(
                    "`comments` of {} is not an object",
                    issue.actor
                ))
            })?;
        let comment_id = loop {
            let candidate = format!("{COMMENT_ID_PREFIX}{next}");
            next += 1;
            if !comments.contains_key(&candidate) {
                break candidate;
            }
        };
        comments.insert(
            comment_id.clone(),
            json!({
                "blockId": block_id,
                "x": x,
                "y": y,
                "width": COMMENT_WIDTH,
                "height": COMMENT_HEIGHT,
                "minimized": false,
                "text": text,
            }),
        );
        if let Some(id) = &block_id {
            if let Some(block) = target
                .get_mut("blocks")
                .and_then(|b| b.get_mut(id))
                .and_then(Value::as_object_mut)
            {
                if block.get("comment").is_none_or(Value::is_null) {
                    block.insert("comment".into(), Value::String(comment_id));
                }
            }
        }
    }
    Ok(())
}

pub fn annotate_project(
    raw_json: &str,
    issues: &[Issue],
    catalog: &HintCatalog,
    locale: &str,
) -> Result<String, ReportError> {
    let mut root: Value = serde_json::from_str(raw_json)?;
    annotate_value(&mut root, issues, catalog, locale)?;
    Ok(serde_json::to_string(&root)?)
}

/// Annotates the `project.json` of an archive; every other entry is copied unchanged.
pub fn annotate_sb3(
    bytes: &[u8],
    issues: &[Issue],
    catalog: &HintCatalog,
    locale: &str,
) -> Result<Vec<u8>, ReportError> {
    let archive_err = |e: zip::result::ZipError| ReportError::Archive(e.to_string());
    let mut archive = zip::ZipArchive::new(Cursor::new(bytes)).map_err(archive_err)?;
    let mut raw = String::new();
    archive
        .by_name("project.json")
        .map_err(archive_err)?
        .read_to_string(&mut raw)
        .map_err(|e| ReportError::Archive(e.to_string()))?;
    let annotated = annotate_project(&raw, issues, catalog, locale)?;

    let mut writer = zip::ZipWriter::new(Cursor::new(Vec::new()));
    for i in 0..archive.len() {
        let entry = archive.by_index_raw(i).map_err(archive_err)?;
        if entry.name() == "project.json" {
            let options = zip::write::SimpleFileOptions::default()
                .compression_method(zip::CompressionMethod::Deflated);
            drop(entry);
            writer
                .start_file("project.json", options)
                .map_err(archive_err)?;
            writer
                .write_all(annotated.as_bytes())
                .map_err(|e| ReportError::Archive(e.to_string()))?;
        } else {
            writer.raw_copy_file(entry).map_err(archive_err)?;
        }
    }
    Ok(writer.finish().map_err(archive_err)?.into_inner())
}
