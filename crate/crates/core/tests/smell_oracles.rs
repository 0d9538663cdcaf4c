//! Brute-force oracles for the structural smells, computed on a generator model
//! rather than on the parsed syntax tree.

use std::collections::BTreeSet;

use proptest::prelude::*;

use scratchlint_core::ast::{parse_project, AssetInventory};
use scratchlint_core::finders::{run_all, FinderConfig};
use scratchlint_testkit::*;

#[derive(Debug, Clone, PartialEq)]
enum M {
    Move(u8),
    Say(&'static str),
    Hide,
    If(&'static str, Vec<M>),
}

#[derive(Debug, Clone)]
struct ScriptModel {
    clicked: bool,
    body: Vec<M>,
}

fn leaf() -> impl Strategy<Value = M> {
    prop_oneof![
        (1u8..3).prop_map(M::Move),
        prop_oneof![Just("hi"), Just("bye")].prop_map(M::Say),
        Just(M::Hide),
    ]
}

fn stmt() -> impl Strategy<Value = M> {
    leaf().prop_recursive(2, 12, 4, |inner| {
        prop_oneof![
            3 => inner.clone(),
            1 => (prop_oneof![Just("a"), Just("b")], prop::collection::vec(inner, 0..4)).prop_map(|(k, b)| M::If(k, b)),
        ]
    })
}

fn scripts() -> impl Strategy<Value = Vec<ScriptModel>> {
    prop::collection::vec(
        (any::<bool>(), prop::collection::vec(stmt(), 0..7))
            .prop_map(|(clicked, body)| ScriptModel { clicked, body }),
        1..5,
    )
}

/// Builds blocks with ids `p{path}` so the oracle can name them.
fn blocks(body: &[M], prefix: &str) -> Vec<Block> {
    body.iter()
        .enumerate()
        .map(|(i, m)| {
            let id = format!("{prefix}.{i}");
            let b = match m {
                M::Move(n) => move_steps(n),
                M::Say(w) => say(text(w)),
                M::Hide => hide(),
                M::If(k, inner) => if_then(Some(key_pressed(k)), blocks(inner, &id)),
            };
            b.id(&id)
        })
        .collect()
}

fn project(models: &[ScriptModel]) -> Project {
    let mut p = Project::new();
    let cat = p.sprite("Cat");
    for (i, s) in models.iter().enumerate() {
        let hat = if s.clicked {
            when_clicked()
        } else {
            when_flag()
        };
        cat.script(hat.id(&format!("h{i}")), blocks(&s.body, &format!("p{i}")));
    }
    p
}

fn found(models: &[ScriptModel], finder: &str) -> BTreeSet<Vec<String>> {
    let prog = parse_project(&project(models).to_json()).unwrap();
    let config = FinderConfig::with_finders([finder]).unwrap();
    run_all(&prog, &AssetInventory::from_program(&prog), &config)
        .issues
        .into_iter()
        .map(|i| i.block_ids)
        .collect()
}

/// Visits every statement list with its id prefix.
fn lists<'a>(body: &'a [M], prefix: String, out: &mut Vec<(String, &'a [M])>) {
    out.push((prefix.clone(), body));
    for (i, m) in body.iter().enumerate() {
        if let M::If(_, inner) = m {
            lists(inner, format!("{prefix}.{i}"), out);
        }
    }
}

fn all_lists(models: &[ScriptModel]) -> Vec<(String, &[M])> {
    let mut out = Vec::new();
    for (i, s) in models.iter().enumerate() {
        lists(&s.body, format!("p{i}"), &mut out);
    }
    out
}

fn sequential_oracle(models: &[ScriptModel]) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    for (prefix, body) in all_lists(models) {
        let mut start = 0;
        while start < body.len() {
            let mut end = start + 1;
            while end < body.len() && body[end] == body[start] {
                end += 1;
            }
            if end - start >= 3 {
                out.insert((start..end).map(|i| format!("{prefix}.{i}")).collect());
            }
            start = end;
        }
    }
    out
}

fn double_if_oracle(models: &[ScriptModel]) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    for (prefix, body) in all_lists(models) {
        for i in 1..body.len() {
            if let (M::If(a, _), M::If(b, _)) = (&body[i - 1], &body[i]) {
                if a == b {
                    out.insert(vec![format!("{prefix}.{}", i - 1), format!("{prefix}.{i}")]);
                }
            }
        }
    }
    out
}

fn duplicated_oracle(models: &[ScriptModel]) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    for i in 0..models.len() {
        for j in i + 1..models.len() {
            let (a, b) = (&models[i], &models[j]);
            if !a.body.is_empty() && a.clicked == b.clicked && a.body == b.body {
                out.insert(vec![format!("h{i}"), format!("h{j}")]);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn sequential_actions_matches_oracle(models in scripts()) {
        prop_assert_eq!(found(&models, "sequential_actions"), sequential_oracle(&models));
    }

    #[test]
    fn double_if_matches_oracle(models in scripts()) {
        prop_assert_eq!(found(&models, "double_if"), double_if_oracle(&models));
    }

    #[test]
    fn duplicated_script_matches_oracle(models in scripts()) {
        prop_assert_eq!(found(&models, "duplicated_script"), duplicated_oracle(&models));
    }
}

#[test]
fn oracles_see_positive_cases() {
    let three = ScriptModel {
        clicked: false,
        body: vec![M::Move(1), M::Move(1), M::Move(1)],
    };
    assert_eq!(
        found(std::slice::from_ref(&three), "sequential_actions").len(),
        1
    );
    let ifs = ScriptModel {
        clicked: true,
        body: vec![M::If("a", vec![]), M::If("a", vec![M::Hide])],
    };
    assert_eq!(found(std::slice::from_ref(&ifs), "double_if").len(), 1);
    assert_eq!(found(&[three.clone(), three], "duplicated_script").len(), 1);
}
