//! Acceptance gate: one PASS/FAIL/SKIP line per criterion, non-zero exit on any failure.
//!
//! Set `SCRATCHLINT_CORPUS_DIR` to a folder of downloaded `.sb3`/`.json`
//! projects to run the scale-down check on real data. Without it the same
//! checks run on a synthetic corpus built from the fixture catalog and the
//! criterion is reported as SKIP.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use scratchlint_core::ast::{load_sb3, parse_project, AssetInventory, Program};
use scratchlint_core::cfg::{build_cfg, definitely_defined};
use scratchlint_core::finders::{registry, run_all, FinderConfig, Issue};
use scratchlint_core::metrics::{compute_metrics, METRIC_NAMES};
use scratchlint_core::report::{
    annotate_project, annotate_sb3, csv_header, render_scratchblocks, write_csv, write_json_report,
    CsvRow, HintCatalog,
};
use scratchlint_testkit::fixtures::{
    finder_fixtures, level_check, missing_ask_matrix, LEVEL_CHECK_SCRATCHBLOCKS,
};
use scratchlint_testkit::Project;

#[path = "support/dataflow_oracle.rs"]
mod dataflow_oracle;
#[path = "support/parser_props.rs"]
mod parser_props;

const CORPUS_ENV: &str = "SCRATCHLINT_CORPUS_DIR";
const SURROGATE: &str = "synthetic surrogate from the fixture catalog";
const FIXTURE_BUDGET: Duration = Duration::from_secs(30);
const CORPUS_BUDGET: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn program(p: &Project) -> Program {
    parse_project(&p.to_json()).expect("fixture parses")
}

fn analyse(program: &Program, config: &FinderConfig) -> Vec<Issue> {
    run_all(program, &AssetInventory::from_program(program), config).issues
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn fixture_completeness() -> Outcome {
    let start = Instant::now();
    let fixtures = finder_fixtures();
    let ids: Vec<&str> = registry().iter().map(|f| f.id()).collect();
    let covered: Vec<&str> = fixtures.iter().map(|f| f.finder).collect();
    ensure(ids == covered, || {
        format!("fixtures {covered:?} do not cover finders {ids:?}")
    })?;
    for f in &fixtures {
        let config = FinderConfig::with_finders([f.finder]).map_err(|e| e.to_string())?;
        let mut got: Vec<(String, Vec<String>)> = analyse(&program(&f.positive), &config)
            .into_iter()
            .map(|i| {
                (
                    i.actor,
                    i.block_ids
                        .into_iter()
                        .collect::<BTreeSet<_>>()
                        .into_iter()
                        .collect(),
                )
            })
            .collect();
        let mut want: Vec<(String, Vec<String>)> = f
            .expected
            .iter()
            .map(|e| {
                let ids: BTreeSet<String> = e.block_ids.iter().map(|s| s.to_string()).collect();
                (e.actor.to_string(), ids.into_iter().collect())
            })
            .collect();
        got.sort();
        want.sort();
        ensure(got == want, || {
            format!("{}: expected {want:?}, got {got:?}", f.finder)
        })?;
        let clean = analyse(&program(&f.clean), &config);
        ensure(clean.is_empty(), || {
            format!("{}: clean fixture reports {}", f.finder, clean.len())
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < FIXTURE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} finders, positive and clean fixtures, {elapsed:.2?}",
        fixtures.len()
    ))
}

fn level_check_reproduction() -> Outcome {
    let prog = program(&level_check());
    let issues = analyse(&prog, &FinderConfig::default());
    for id in ["comparing_literals", "variable_as_literal"] {
        ensure(
            issues
                .iter()
                .any(|i| i.finder_id == id && i.block_ids == ["lc-eq"]),
            || format!("{id} not reported on the equals block"),
        )?;
    }
    let text = render_scratchblocks(&prog.sprites[0].scripts[0], &BTreeSet::new());
    ensure(text == LEVEL_CHECK_SCRATCHBLOCKS, || {
        format!("scratchblocks differ:\n{text}")
    })?;
    Ok("comparing_literals and variable_as_literal on lc-eq, scratchblocks exact".into())
}

fn missing_ask_matrix_check() -> Outcome {
    let config = FinderConfig::with_finders(["missing_ask"]).map_err(|e| e.to_string())?;
    let mut cells = Vec::new();
    for (answers, asks, expected) in [(3, 0, 3), (3, 1, 0)] {
        let n = analyse(&program(&missing_ask_matrix(answers, asks)), &config).len();
        ensure(n == expected, || {
            format!("answers={answers} asks={asks}: {n} issues, expected {expected}")
        })?;
        cells.push(format!("({answers},{asks})->{n}"));
    }
    Ok(cells.join(" "))
}

/// Projects in `dir` as (name, program, assets); unreadable ones count as crashes.
fn load_corpus(dir: &Path) -> Result<Vec<(String, Program, AssetInventory)>, String> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("sb3" | "json")))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for path in paths {
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let bytes = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let loaded = if path.extension().is_some_and(|e| e == "sb3") {
            load_sb3(&bytes).map_err(|e| e.to_string())
        } else {
            let text = String::from_utf8_lossy(&bytes);
            parse_project(&text)
                .map(|p| {
                    let assets = AssetInventory::from_program(&p);
                    (p, assets)
                })
                .map_err(|e| e.to_string())
        };
        let (program, assets) = loaded.map_err(|e| format!("{name}: {e}"))?;
        out.push((name, program, assets));
    }
    Ok(out)
}

fn synthetic_corpus() -> Vec<(String, Program, AssetInventory)> {
    let mut projects: Vec<(String, Project)> = Vec::new();
    for f in finder_fixtures() {
        projects.push((format!("{}-positive", f.finder), f.positive));
        projects.push((format!("{}-clean", f.finder), f.clean));
    }
    projects.push(("level_check".into(), level_check()));
    projects
        .into_iter()
        .map(|(name, p)| {
            let program = program(&p);
            let assets = AssetInventory::from_program(&program);
            (name, program, assets)
        })
        .collect()
}

fn scale_down() -> Outcome {
    let start = Instant::now();
    let (label, corpus) = match std::env::var_os(CORPUS_ENV) {
        Some(dir) => ("downloaded corpus", load_corpus(Path::new(&dir))?),
        None => (SURROGATE, synthetic_corpus()),
    };
    ensure(corpus.len() >= 100, || {
        format!("only {} projects", corpus.len())
    })?;
    let config = FinderConfig::default();
    let mut rows = Vec::new();
    let mut fired = BTreeSet::new();
    for (name, program, assets) in &corpus {
        let run = catch_unwind(AssertUnwindSafe(|| run_all(program, assets, &config)))
            .map_err(|_| format!("{name}: analysis panicked"))?;
        ensure(run.diagnostics.is_empty(), || {
            format!("{name}: {:?}", run.diagnostics)
        })?;
        fired.extend(run.issues.iter().map(|i| i.finder_id.clone()));
        rows.push(CsvRow::new(
            name.clone(),
            compute_metrics(program),
            &run.issues,
        ));
    }
    let csv = write_csv(&rows).map_err(|e| e.to_string())?;
    let columns = csv.lines().next().unwrap_or_default().split(',').count();
    let finder_columns = columns - 1 - METRIC_NAMES.len();
    ensure(columns == csv_header().len(), || {
        format!("{columns} columns")
    })?;
    ensure(finder_columns >= 56, || {
        format!("{finder_columns} finder columns")
    })?;
    ensure(csv.lines().count() == corpus.len() + 1, || {
        "row count mismatch".into()
    })?;
    ensure(fired.len() >= 5, || {
        format!("only {} distinct finders fired", fired.len())
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < CORPUS_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{label}: {} projects, 0 crashes, {finder_columns} finder columns, {} finders fired, {elapsed:.2?}",
        corpus.len(),
        fired.len()
    ))
}

fn parser_properties() -> Outcome {
    let fixtures = parser_props::check_conservation()?;
    let (ok, rejected) = parser_props::check_mutations(200, 0x5eed)?;
    ensure(ok > 0, || "no mutation parsed".into())?;
    Ok(format!("{fixtures} fixtures conserve blocks; 200 mutations: {ok} parsed, {rejected} rejected, 0 panics"))
}

fn dataflow_oracle_check() -> Outcome {
    let mut checked = 0;
    for f in finder_fixtures() {
        for (kind, p) in [("positive", &f.positive), ("clean", &f.clean)] {
            let prog = program(p);
            let cfg = build_cfg(&prog);
            if dataflow_oracle::statement_count(&cfg) > 12 {
                continue;
            }
            let facts = definitely_defined(&cfg).facts_in;
            ensure(facts == dataflow_oracle::path_oracle(&cfg), || {
                format!("{} {kind} fixture differs", f.finder)
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} fixtures with at most 12 statements match path enumeration"
    ))
}

fn metrics_check() -> Outcome {
    let m = compute_metrics(&program(&level_check()));
    ensure(
        m.block_count == 5 && m.script_count == 1 && m.weighted_mean_complexity == 2.0,
        || format!("{m:?}"),
    )?;
    Ok("level_check: blockCount 5, scriptCount 1, weightedMeanComplexity 2.0".into())
}

fn report_round_trip() -> Outcome {
    let catalog = HintCatalog::bundled();
    let config = FinderConfig::default();
    let mut projects: Vec<Project> = finder_fixtures().into_iter().map(|f| f.positive).collect();
    projects.push(level_check());
    for p in &projects {
        let raw = p.to_json();
        let prog = parse_project(&raw).map_err(|e| e.to_string())?;
        let issues = analyse(&prog, &config);
        let annotated =
            annotate_project(&raw, &issues, catalog, "en").map_err(|e| e.to_string())?;
        let again = analyse(
            &parse_project(&annotated).map_err(|e| e.to_string())?,
            &config,
        );
        ensure(again == issues, || {
            format!("{}: issue set changed after annotation", prog.name)
        })?;

        let bytes = p.to_sb3(&[]);
        let (prog, assets) = load_sb3(&bytes).map_err(|e| e.to_string())?;
        let issues = run_all(&prog, &assets, &config).issues;
        let annotated = annotate_sb3(&bytes, &issues, catalog, "en").map_err(|e| e.to_string())?;
        let (reparsed, reassets) = load_sb3(&annotated).map_err(|e| e.to_string())?;
        ensure(
            run_all(&reparsed, &reassets, &config).issues == issues,
            || "sb3 issue set changed".into(),
        )?;
    }
    let render = || -> Result<(String, String), String> {
        let mut json = String::new();
        let mut rows = Vec::new();
        for p in &projects {
            let prog = program(p);
            let issues = analyse(&prog, &config);
            let metrics = compute_metrics(&prog);
            json.push_str(
                &write_json_report(&prog, &issues, &metrics, catalog, "en")
                    .map_err(|e| e.to_string())?,
            );
            rows.push(CsvRow::new(prog.name.clone(), metrics, &issues));
        }
        Ok((json, write_csv(&rows).map_err(|e| e.to_string())?))
    };
    let first = render()?;
    ensure(first == render()?, || "reports differ between runs".into())?;
    Ok(format!(
        "{} projects re-analyse identically after annotation; JSON and CSV byte-stable",
        projects.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("fixture-suite completeness", fixture_completeness),
        ("level_check reproduction", level_check_reproduction),
        ("missing_ask matrix", missing_ask_matrix_check),
        ("scale-down corpus run", scale_down),
        ("parser properties", parser_properties),
        ("dataflow oracle", dataflow_oracle_check),
        ("metrics check", metrics_check),
        ("report round-trip", report_round_trip),
    ];
    let (mut failed, mut skipped) = (0, 0);
    for (name, check) in criteria {
        let outcome = catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) if detail.starts_with(SURROGATE) => {
                skipped += 1;
                println!("SKIP {name}: no {CORPUS_ENV}; {detail}");
            }
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {name}: {reason}");
            }
        }
    }
    println!(
        "{} passed, {failed} failed, {skipped} skipped of {} criteria",
        criteria.len() - failed - skipped,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
