//! Parser invariants over the fixture corpus and seeded mutations of it.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use scratchlint_core::ast::{parse_project, ParseError, Program};
use scratchlint_testkit::fixtures::{
    clean_project, finder_fixtures, level_check, missing_ask_matrix,
};

pub fn corpus() -> Vec<Value> {
    finder_fixtures()
        .iter()
        .flat_map(|f| [f.positive.to_value(), f.clean.to_value()])
        .chain([
            level_check().to_value(),
            clean_project().to_value(),
            missing_ask_matrix(3, 1).to_value(),
        ])
        .collect()
}

/// Ids of blocks that must survive parsing: every non-shadow block and every compressed reporter.
pub fn semantic_ids(root: &Value) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for t in root["targets"].as_array().unwrap() {
        let name = t["name"].as_str().unwrap_or_default().to_string();
        if let Some(blocks) = t["blocks"].as_object() {
            for (id, b) in blocks {
                if b.is_array() || (b.is_object() && b["shadow"] != json!(true)) {
                    out.insert((name.clone(), id.clone()));
                }
            }
        }
    }
    out
}

fn all_ids(root: &Value) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for t in root["targets"].as_array().unwrap() {
        let name = t["name"].as_str().unwrap_or_default().to_string();
        for id in t["blocks"].as_object().into_iter().flat_map(|b| b.keys()) {
            out.insert((name.clone(), id.clone()));
        }
    }
    out
}

pub fn program_ids(p: &Program) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for a in p.actors() {
        a.for_each_block_id(&mut |id| out.push((a.name.clone(), id.to_string())));
    }
    out
}

pub fn snapshot(p: &Program) -> String {
    serde_json::to_string(p).unwrap()
}

fn mutate(root: &mut Value, rng: &mut ChaCha8Rng) {
    let targets = root["targets"].as_array_mut().unwrap();
    let t = rng.gen_range(0..targets.len());
    let Some(blocks) = targets[t]["blocks"].as_object_mut() else {
        return;
    };
    let ids: Vec<String> = blocks.keys().cloned().collect();
    let Some(id) = ids.choose(rng).cloned() else {
        return;
    };
    let other = ids.choose(rng).cloned().unwrap();
    if rng.gen_bool(0.1) {
        blocks.remove(&id);
        return;
    }
    let Some(block) = blocks[&id].as_object_mut() else {
        return;
    };
    match rng.gen_range(0..8) {
        0 => {
            block.insert("next".into(), Value::Null);
        }
        1 => {
            block.insert("parent".into(), Value::Null);
            block.insert("topLevel".into(), json!(true));
        }
        2 => {
            block.insert("opcode".into(), json!("ext_mysteryBlock"));
        }
        3 => {
            block.insert("next".into(), json!(other));
        }
        4 => {
            if let Some(inputs) = block.get_mut("inputs").and_then(Value::as_object_mut) {
                if let Some(k) = inputs.keys().next().cloned() {
                    inputs.insert(k, json!([3, other, [10, ""]]));
                }
            }
        }
        5 => {
            block.insert("shadow".into(), json!(true));
        }
        6 => {
            block.remove("inputs");
            block.remove("fields");
        }
        _ => {
            block.insert("opcode".into(), json!(42));
        }
    }
}

/// Every fixture parses without warnings, once per semantic block.
pub fn check_conservation() -> Result<usize, String> {
    let corpus = corpus();
    for root in &corpus {
        let program = parse_project(&root.to_string()).map_err(|e| e.to_string())?;
        let ids = program_ids(&program);
        let unique: BTreeSet<_> = ids.iter().cloned().collect();
        if unique.len() != ids.len() {
            return Err(format!("a block was parsed twice: {ids:?}"));
        }
        if unique != semantic_ids(root) {
            return Err(format!("block sets differ for {root}"));
        }
        if !program.warnings.is_empty() {
            return Err(format!("warnings: {:?}", program.warnings));
        }
    }
    Ok(corpus.len())
}

/// Parses `rounds` seeded mutations; returns (accepted, rejected) counts.
pub fn check_mutations(rounds: usize, seed: u64) -> Result<(usize, usize), String> {
    let corpus = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut ok, mut rejected) = (0, 0);
    for round in 0..rounds {
        let mut root = corpus[round % corpus.len()].clone();
        for _ in 0..rng.gen_range(1..=3) {
            mutate(&mut root, &mut rng);
        }
        let text = root.to_string();
        let parsed = std::panic::catch_unwind(|| parse_project(&text))
            .map_err(|_| format!("round {round}: panic"))?;
        match parsed {
            Ok(program) => {
                ok += 1;
                let ids = program_ids(&program);
                let unique: BTreeSet<_> = ids.iter().cloned().collect();
                if unique.len() != ids.len() {
                    return Err(format!("round {round}: duplicate block"));
                }
                if !unique.is_subset(&all_ids(&root)) {
                    return Err(format!("round {round}: invented block"));
                }
                if !semantic_ids(&root).is_subset(&unique) {
                    return Err(format!("round {round}: lost block"));
                }
                if snapshot(&program) != snapshot(&parse_project(&text).unwrap()) {
                    return Err(format!("round {round}: nondeterministic"));
                }
            }
            Err(ParseError::MalformedProject { .. }) => rejected += 1,
            Err(e) => return Err(format!("round {round}: {e}")),
        }
    }
    Ok((ok, rejected))
}
