use std::fs;
use std::path::Path;
use std::time::Duration;

use scratchlint_fetch::*;
use scratchlint_testkit::http::MockServer;

fn fetcher(server: &MockServer) -> Fetcher {
    Fetcher::new(FetchConfig {
        api_url: format!("{}/api", server.url),
        projects_url: format!("{}/content", server.url),
        backoff: Duration::from_millis(1),
        ..FetchConfig::default()
    })
    .unwrap()
}

const PROJECT: &str = r#"{"targets":[{"isStage":true,"name":"Stage","blocks":{}}]}"#;

fn healthy(path: &str, _: usize) -> (u16, String) {
    match path {
        "/api/projects/123" => (200, r#"{"id":123,"project_token":"tok"}"#.into()),
        "/content/123?token=tok" => (200, PROJECT.into()),
        _ => (404, String::new()),
    }
}

#[test]
fn downloads_with_token_and_reuses_the_cache() {
    let server = MockServer::start(Box::new(healthy));
    let cache = tempfile::tempdir().unwrap();
    let fetcher = fetcher(&server);
    let path = fetcher.fetch_project(123, cache.path()).unwrap();
    assert_eq!(path, cache.path().join("123.json"));
    assert_eq!(fs::read_to_string(&path).unwrap(), PROJECT);
    assert_eq!(
        server.requests(),
        vec!["/api/projects/123", "/content/123?token=tok"]
    );
    fetcher.fetch_project(123, cache.path()).unwrap();
    assert_eq!(
        server.requests().len(),
        2,
        "second fetch must hit the cache"
    );
}

#[test]
fn unknown_project_is_not_found() {
    let server = MockServer::start(Box::new(healthy));
    let cache = tempfile::tempdir().unwrap();
    assert!(matches!(
        fetcher(&server).fetch_project(999, cache.path()),
        Err(FetchError::NotFound(999))
    ));
    assert!(!cache.path().join("999.json").exists());
}

#[test]
fn id_zero_is_rejected_without_network() {
    let server = MockServer::start(Box::new(healthy));
    let cache = tempfile::tempdir().unwrap();
    assert!(matches!(
        fetcher(&server).fetch_project(0, cache.path()),
        Err(FetchError::InvalidId(0))
    ));
    assert!(server.requests().is_empty());
}

#[test]
fn server_errors_are_retried() {
    let server = MockServer::start(Box::new(|path: &str, nth: usize| match path {
        "/api/projects/5" if nth <= 2 => (503, String::new()),
        "/api/projects/5" => (200, r#"{"project_token":"t"}"#.into()),
        "/content/5?token=t" => (200, PROJECT.into()),
        _ => (404, String::new()),
    }));
    let cache = tempfile::tempdir().unwrap();
    fetcher(&server).fetch_project(5, cache.path()).unwrap();
    assert_eq!(
        server
            .requests()
            .iter()
            .filter(|p| *p == "/api/projects/5")
            .count(),
        3
    );
}

#[test]
fn retries_are_bounded() {
    let server = MockServer::start(Box::new(|_: &str, _: usize| (500, String::new())));
    let cache = tempfile::tempdir().unwrap();
    let err = fetcher(&server).fetch_project(7, cache.path()).unwrap_err();
    assert!(matches!(err, FetchError::Network { id: 7, .. }), "{err}");
    assert_eq!(server.requests().len(), 1 + MAX_RETRIES as usize);
}

#[test]
fn non_json_body_is_a_bad_response() {
    let server = MockServer::start(Box::new(|path: &str, _: usize| match path {
        "/api/projects/8" => (200, "{}".into()),
        "/content/8" => (200, "<html>".into()),
        _ => (404, String::new()),
    }));
    let cache = tempfile::tempdir().unwrap();
    assert!(matches!(
        fetcher(&server).fetch_project(8, cache.path()),
        Err(FetchError::BadResponse { .. })
    ));
}

#[test]
fn scan_folder_filters_and_sorts() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["b.json", "c.txt", "a.sb3", "Z.SB3"] {
        fs::write(dir.path().join(name), "x").unwrap();
    }
    fs::create_dir(dir.path().join("nested.json")).unwrap();
    let names: Vec<String> = scan_folder(dir.path())
        .unwrap()
        .into_iter()
        .map(|s| s.resolved_name)
        .collect();
    assert_eq!(names, vec!["Z", "a", "b"]);
    let kinds: Vec<SourceKind> = scan_folder(dir.path())
        .unwrap()
        .into_iter()
        .map(|s| s.kind)
        .collect();
    assert_eq!(
        kinds,
        vec![
            SourceKind::LocalSb3,
            SourceKind::LocalSb3,
            SourceKind::LocalJson
        ]
    );
}

#[test]
fn scan_folder_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    assert!(scan_folder(dir.path()).unwrap().is_empty());
    assert!(matches!(
        scan_folder(&dir.path().join("missing")),
        Err(FetchError::NotADirectory(_))
    ));
}

#[test]
fn id_lists() {
    let p = Path::new("ids.txt");
    let ids = |text: &str| {
        parse_id_list(text, p).map(|v| v.into_iter().map(|s| s.id.unwrap()).collect::<Vec<_>>())
    };
    assert_eq!(ids("123\n456\n").unwrap(), vec![123, 456]);
    assert_eq!(ids("#c\n123\n").unwrap(), vec![123]);
    assert_eq!(ids("\n  42  \n\n").unwrap(), vec![42]);
    match parse_id_list("abc", p) {
        Err(FetchError::MalformedId { line, text, .. }) => {
            assert_eq!((line, text.as_str()), (1, "abc"))
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_id_list("1\n# x\n0\n", p),
        Err(FetchError::MalformedId { line: 3, .. })
    ));
}

#[test]
fn read_id_list_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ids.txt");
    fs::write(&path, "1\n2\n").unwrap();
    let sources = read_id_list(&path).unwrap();
    assert_eq!(
        sources,
        vec![ProjectSource::remote(1), ProjectSource::remote(2)]
    );
    assert!(matches!(
        read_id_list(&dir.path().join("none")),
        Err(FetchError::Io { .. })
    ));
}

#[test]
fn local_sources_are_classified_by_extension() {
    assert_eq!(
        ProjectSource::local("x/p.sb3").unwrap().kind,
        SourceKind::LocalSb3
    );
    assert_eq!(ProjectSource::local("p.json").unwrap().resolved_name, "p");
    assert!(matches!(
        ProjectSource::local("p.txt"),
        Err(FetchError::NotAProjectFile(_))
    ));
}
