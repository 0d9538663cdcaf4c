//! Batch run over real shared projects. Needs network access:
//! `SCRATCHLINT_CORPUS_IDS=ids.txt cargo test -p scratchlint-cli --test corpus -- --ignored`

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use tempfile::TempDir;

const IDS_ENV: &str = "SCRATCHLINT_CORPUS_IDS";

#[test]
#[ignore = "downloads projects; set SCRATCHLINT_CORPUS_IDS to an id list"]
fn downloaded_corpus_runs_without_crashes() {
    let ids = std::env::var(IDS_ENV).expect("SCRATCHLINT_CORPUS_IDS is not set");
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("corpus.csv");
    let start = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_scratchlint"))
        .args(["--check", "--jobs", "4", "--idlist", &ids, "--output"])
        .arg(&out)
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");

    let csv = std::fs::read_to_string(out).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.len() >= 100, "only {} projects", rows.len());
    let finder_columns = 7..header.len();
    assert!(finder_columns.len() >= 56);
    let fired: BTreeSet<&str> = finder_columns
        .filter(|&c| rows.iter().any(|r| r[c] != "0"))
        .map(|c| header[c])
        .collect();
    assert!(fired.len() >= 5, "only {fired:?} fired");
}
