use std::collections::{BTreeMap, BTreeSet};
use std::io::{Cursor as IoCursor, Read};

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use super::parse::{parse_project_value, ParseError};
use super::Program;

#[derive(Debug, Error)]
pub enum ArchiveError {
    #[error("not a zip archive: {0}")]
    NotAnArchive(String),
    #[error("archive has no project.json entry")]
    NoProjectJson,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Costume and sound names of one actor.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ActorAssets {
    pub costumes: Vec<String>,
    pub sounds: Vec<String>,
}

/// Assets declared by the project and which of them are absent from the archive.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AssetInventory {
    pub per_actor: BTreeMap<String, ActorAssets>,
    /// Names of declared costumes/sounds whose file is not in the archive.
    pub missing: BTreeSet<String>,
    /// (actor, asset name) pairs behind `missing`.
    pub missing_by_actor: BTreeSet<(String, String)>,
}

impl AssetInventory {
    /// Inventory of a bare `project.json`: every declared asset counts as present.
    pub fn from_program(program: &Program) -> AssetInventory {
        let per_actor = program
            .actors()
            .map(|a| {
                (
                    a.name.clone(),
                    ActorAssets {
                        costumes: a.costume_names.clone(),
                        sounds: a.sound_names.clone(),
                    },
                )
            })
            .collect();
        AssetInventory {
            per_actor,
            ..Default::default()
        }
    }

    fn from_json(root: &Value, archive_entries: &BTreeSet<String>) -> AssetInventory {
        let mut inventory = AssetInventory::default();
        let targets = root
            .get("targets")
            .and_then(Value::as_array)
            .cloned()
            .unwrap_or_default();
        for target in &targets {
            let actor = target
                .get("name")
                .and_then(Value::as_str)
                .unwrap_or_default()
                .to_string();
            let mut assets = ActorAssets::default();
            for (key, out) in [
                ("costumes", &mut assets.costumes),
                ("sounds", &mut assets.sounds),
            ] {
                for asset in target
                    .get(key)
                    .and_then(Value::as_array)
                    .into_iter()
                    .flatten()
                {
                    let name = asset
                        .get("name")
                        .and_then(Value::as_str)
                        .unwrap_or_default()
                        .to_string();
                    let file = asset
                        .get("md5ext")
                        .and_then(Value::as_str)
                        .map(str::to_string)
                        .or_else(|| {
                            let id = asset.get("assetId").and_then(Value::as_str)?;
                            let ext = asset.get("dataFormat").and_then(Value::as_str)?;
                            Some(format!("{id}.{ext}"))
                        });
                    let present = file.is_some_and(|f| archive_entries.contains(&f));
                    if !present {
                        inventory.missing.insert(name.clone());
                        inventory
                            .missing_by_actor
                            .insert((actor.clone(), name.clone()));
                    }
                    out.push(name);
                }
            }
            inventory.per_actor.insert(actor, assets);
        }
        inventory
    }

    /// Whether `name` is a usable costume of `actor`.
    pub fn has_costume(&self, actor: &str, name: &str) -> bool {
        self.usable(actor, name, |a| &a.costumes)
    }

    pub fn has_sound(&self, actor: &str, name: &str) -> bool {
        self.usable(actor, name, |a| &a.sounds)
    }

    fn usable(&self, actor: &str, name: &str, pick: impl Fn(&ActorAssets) -> &Vec<String>) -> bool {
        self.per_actor
            .get(actor)
            .is_some_and(|a| pick(a).iter().any(|n| n == name))
            && !self
                .missing_by_actor
                .contains(&(actor.to_string(), name.to_string()))
    }
}

/// Reads an `.sb3` archive.
pub fn load_sb3(bytes: &[u8]) -> Result<(Program, AssetInventory), ArchiveError> {
    let mut archive = zip::ZipArchive::new(IoCursor::new(bytes))
        .map_err(|e| ArchiveError::NotAnArchive(e.to_string()))?;
    let entries: BTreeSet<String> = archive.file_names().map(str::to_string).collect();
    let mut text = String::new();
    {
        let mut entry = archive
            .by_name("project.json")
            .map_err(|_| ArchiveError::NoProjectJson)?;
        entry
            .read_to_string(&mut text)
            .map_err(|e| ArchiveError::NotAnArchive(format!("project.json unreadable: {e}")))?;
    }
    let root: Value = serde_json::from_str(&text).map_err(ParseError::from)?;
    let program = parse_project_value(&root)?;
    let inventory = AssetInventory::from_json(&root, &entries);
    Ok((program, inventory))
}
