use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use scratchlint_testkit::fixtures::{clean_project, level_check, missing_ask_matrix};
use scratchlint_testkit::http::MockServer;
use serde_json::Value;
use tempfile::TempDir;

fn scratchlint(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scratchlint"))
        .args(args)
        .current_dir(cwd)
        .env("SCRATCHLINT_CACHE_DIR", cwd.join("cache"))
        .env_remove("SCRATCHLINT_API_URL")
        .env_remove("SCRATCHLINT_PROJECTS_URL")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// A temp folder holding `level_check.sb3`, `clean.json` and `ask.sb3`.
fn batch() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("level_check.sb3"),
        level_check().to_sb3(&[]),
    )
    .unwrap();
    fs::write(dir.path().join("clean.json"), clean_project().to_json()).unwrap();
    fs::write(
        dir.path().join("ask.sb3"),
        missing_ask_matrix(3, 0).to_sb3(&[]),
    )
    .unwrap();
    dir
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn help_lists_flags_and_finders() {
    let tmp = TempDir::new().unwrap();
    let o = scratchlint(&["--help"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for needle in [
        "--check",
        "--stats",
        "--path",
        "--projectid",
        "--idlist",
        "--output",
        "--lang",
        "comparing_literals",
        "missing_ask",
    ] {
        assert!(text.contains(needle), "help lacks {needle}");
    }
}

#[test]
fn level_check_check_writes_json_report() {
    let dir = batch();
    let out = dir.path().join("out.json");
    let o = scratchlint(
        &[
            "--check",
            "--path",
            "level_check.sb3",
            "--output",
            "out.json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = read_json(&out);
    assert_eq!(report["project"]["name"], "level_check");
    let issues = report["issues"].as_array().unwrap();
    let cl = issues
        .iter()
        .find(|i| i["finderId"] == "comparing_literals")
        .expect("comparing_literals reported");
    assert_eq!(cl["blockIds"], serde_json::json!(["lc-eq"]));
    assert!(cl["scratchblocks"]
        .as_str()
        .unwrap()
        .contains("// <- ISSUE"));
    assert!(stdout(&o).contains("comparing_literals @ Player/lc-eq"));
}

#[test]
fn folder_batch_writes_one_csv_row_per_project() {
    let dir = batch();
    let o = scratchlint(
        &["--check", "--path", ".", "--output", "report.csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("project,"));
    let names: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(names, ["ask", "clean", "level_check"]);
}

#[test]
fn corrupt_project_fails_the_batch_but_others_are_reported() {
    let dir = batch();
    fs::write(dir.path().join("broken.sb3"), b"not a zip archive").unwrap();
    let o = scratchlint(
        &["--check", "--path", ".", "--output", "report.csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("broken"));
    let csv = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(!csv.contains("broken"));
}

#[test]
fn usage_errors_exit_with_2() {
    let dir = batch();
    let cases: [&[&str]; 7] = [
        &["--check"],
        &["--path", "level_check.sb3"],
        &["--check", "--stats", "--path", "level_check.sb3"],
        &[
            "--check",
            "--path",
            "level_check.sb3",
            "--output",
            "out.txt",
        ],
        &[
            "--check",
            "--path",
            "level_check.sb3",
            "--finders",
            "no_such_finder",
        ],
        &["--check", "--projectid", "abc"],
        &["--stats", "--path", "level_check.sb3", "--annotate"],
    ];
    for args in cases {
        let o = scratchlint(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn project_id_zero_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(
        scratchlint(&["--check", "--projectid", "0"], tmp.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn fail_on_issue_sets_exit_code() {
    let dir = batch();
    let flagged = scratchlint(
        &["--check", "--path", "level_check.sb3", "--fail-on-issue"],
        dir.path(),
    );
    assert_eq!(flagged.status.code(), Some(1));
    let clean = scratchlint(
        &["--check", "--path", "clean.json", "--fail-on-issue"],
        dir.path(),
    );
    assert_eq!(clean.status.code(), Some(0), "{}", stdout(&clean));
}

#[test]
fn stats_mode_writes_metrics_only() {
    let dir = batch();
    let o = scratchlint(
        &[
            "--stats",
            "--path",
            "level_check.sb3",
            "--output",
            "stats.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("stats.csv")).unwrap();
    assert_eq!(
        csv,
        "project,blockCount,scriptCount,spriteCount,procedureCount,looseScriptCount,weightedMeanComplexity\nlevel_check,5,1,1,0,0,2.0\n"
    );
    assert!(stdout(&o).contains("level_check: blocks=5"));
}

#[test]
fn downloads_a_project_by_id() {
    let project = level_check().to_json();
    let server = MockServer::start(Box::new(move |path: &str, _: usize| match path {
        "/api/projects/42" => (200, r#"{"project_token":"t"}"#.into()),
        "/content/42?token=t" => (200, project.clone()),
        _ => (404, String::new()),
    }));
    let tmp = TempDir::new().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_scratchlint"))
            .args(["--check", "--projectid", "42", "--output", "out.json"])
            .current_dir(tmp.path())
            .env("SCRATCHLINT_CACHE_DIR", tmp.path().join("cache"))
            .env("SCRATCHLINT_API_URL", format!("{}/api", server.url))
            .env(
                "SCRATCHLINT_PROJECTS_URL",
                format!("{}/content", server.url),
            )
            .output()
            .unwrap()
    };
    let o = run();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = read_json(&tmp.path().join("out.json"));
    assert_eq!(report["project"]["id"], 42);
    assert!(tmp.path().join("cache/42.json").is_file());
    assert_eq!(run().status.code(), Some(0));
    assert_eq!(server.requests().len(), 2, "second run must use the cache");
}

#[test]
fn unknown_project_id_fails() {
    let server = MockServer::start(Box::new(|_: &str, _: usize| (404, String::new())));
    let tmp = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_scratchlint"))
        .args(["--check", "--projectid", "7"])
        .current_dir(tmp.path())
        .env("SCRATCHLINT_CACHE_DIR", tmp.path().join("cache"))
        .env("SCRATCHLINT_API_URL", format!("{}/api", server.url))
        .env(
            "SCRATCHLINT_PROJECTS_URL",
            format!("{}/content", server.url),
        )
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not found"));
}

#[test]
fn malformed_id_list_is_reported_with_line_number() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("ids.txt"), "12\nabc\n").unwrap();
    let o = scratchlint(&["--check", "--idlist", "ids.txt"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ids.txt:2"), "{}", stderr(&o));
}

#[test]
fn annotate_writes_commented_copy() {
    let dir = batch();
    fs::create_dir(dir.path().join("out")).unwrap();
    let o = scratchlint(
        &[
            "--check",
            "--path",
            "clean.json",
            "--annotate",
            "--output",
            "out/r.json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("out/clean_annotated.json").is_file());

    let o = scratchlint(
        &["--check", "--path", "level_check.sb3", "--annotate"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let bytes = fs::read(dir.path().join("level_check_annotated.sb3")).unwrap();
    let (program, _) = scratchlint_core::ast::load_sb3(&bytes).unwrap();
    assert_eq!(program.sprites[0].name, "Player");
    let mut archive = zip::ZipArchive::new(std::io::Cursor::new(bytes)).unwrap();
    let mut text = String::new();
    std::io::Read::read_to_string(&mut archive.by_name("project.json").unwrap(), &mut text)
        .unwrap();
    let project: Value = serde_json::from_str(&text).unwrap();
    let comments = project["targets"][1]["comments"].as_object().unwrap();
    assert!(comments.values().any(|c| c["blockId"] == "lc-eq"));
}

#[test]
fn reruns_are_byte_identical_and_independent_of_jobs() {
    let dir = batch();
    let a = scratchlint(
        &[
            "--check", "--path", ".", "--output", "a.json", "--jobs", "1",
        ],
        dir.path(),
    );
    let b = scratchlint(
        &[
            "--check", "--path", ".", "--output", "b.json", "--jobs", "4",
        ],
        dir.path(),
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        fs::read(dir.path().join("a.json")).unwrap(),
        fs::read(dir.path().join("b.json")).unwrap()
    );
    let c = scratchlint(&["--check", "--path", ".", "--output", "c.csv"], dir.path());
    let d = scratchlint(&["--check", "--path", ".", "--output", "d.csv"], dir.path());
    assert_eq!(c.stdout, d.stdout);
    assert_eq!(
        fs::read(dir.path().join("c.csv")).unwrap(),
        fs::read(dir.path().join("d.csv")).unwrap()
    );
}

#[test]
fn german_hints() {
    let dir = batch();
    let en = stdout(&scratchlint(&["--check", "--path", "ask.sb3"], dir.path()));
    let de = stdout(&scratchlint(
        &["--check", "--path", "ask.sb3", "--lang", "de"],
        dir.path(),
    ));
    assert!(de.contains("Antwort"), "{de}");
    assert_ne!(en, de);
    assert_eq!(en.lines().count(), de.lines().count());
}

#[test]
fn finder_selection_restricts_output() {
    let dir = batch();
    let o = scratchlint(
        &[
            "--check",
            "--path",
            "level_check.sb3",
            "--finders",
            "comparing_literals",
            "--output",
            "o.json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = read_json(&dir.path().join("o.json"));
    let ids: Vec<&str> = report["issues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["finderId"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["comparing_literals"]);
}

#[test]
fn json_for_several_projects_is_an_array() {
    let dir = batch();
    scratchlint(
        &["--check", "--path", ".", "--output", "all.json"],
        dir.path(),
    );
    let report = read_json(&dir.path().join("all.json"));
    let names: Vec<&str> = report
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["project"]["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["ask", "clean", "level_check"]);
}
