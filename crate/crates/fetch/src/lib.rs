//! Locating Scratch projects: local files, folders, project ids and id lists,
//! plus a cached downloader for shared projects.
//!
//! Downloads use two requests: project metadata from the API host (which
//! carries an access token), then the project JSON from the content host.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Duration;

use log::{debug, info, warn};
use serde::Deserialize;
use thiserror::Error;

pub const DEFAULT_API_URL: &str = "https://api.scratch.mit.edu";
pub const DEFAULT_PROJECTS_URL: &str = "https://projects.scratch.mit.edu";
pub const API_URL_ENV: &str = "SCRATCHLINT_API_URL";
pub const PROJECTS_URL_ENV: &str = "SCRATCHLINT_PROJECTS_URL";
pub const CACHE_DIR_ENV: &str = "SCRATCHLINT_CACHE_DIR";
pub const MAX_RETRIES: u32 = 3;

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("not a directory: {0}")]
    NotADirectory(PathBuf),
    #[error("not a Scratch project file (expected .sb3 or .json): {0}")]
    NotAProjectFile(PathBuf),
    #[error("{path}:{line}: malformed project id `{text}`")]
    MalformedId {
        path: PathBuf,
        line: usize,
        text: String,
    },
    #[error("invalid project id {0}")]
    InvalidId(u64),
    #[error("project {0} not found or not shared")]
    NotFound(u64),
    #[error("network error for project {id}: {message}")]
    Network { id: u64, message: String },
    #[error("unexpected response for project {id}: {message}")]
    BadResponse { id: u64, message: String },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FetchError + '_ {
    move |source| FetchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceKind {
    LocalSb3,
    LocalJson,
    RemoteId,
}

/// Something to analyze. Remote sources carry an id; local ones a path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectSource {
    pub kind: SourceKind,
    pub path: Option<PathBuf>,
    pub id: Option<u64>,
    pub resolved_name: String,
}

impl ProjectSource {
    pub fn remote(id: u64) -> ProjectSource {
        ProjectSource {
            kind: SourceKind::RemoteId,
            path: None,
            id: Some(id),
            resolved_name: id.to_string(),
        }
    }

    /// A local `.sb3` or `.json` file, classified by extension.
    pub fn local(path: impl Into<PathBuf>) -> Result<ProjectSource, FetchError> {
        let path = path.into();
        let kind = match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("sb3") => SourceKind::LocalSb3,
            Some("json") => SourceKind::LocalJson,
            _ => return Err(FetchError::NotAProjectFile(path)),
        };
        let resolved_name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok(ProjectSource {
            kind,
            path: Some(path),
            id: None,
            resolved_name,
        })
    }
}

/// Every `*.sb3` and `*.json` file directly inside `dir`, sorted by file name.
pub fn scan_folder(dir: &Path) -> Result<Vec<ProjectSource>, FetchError> {
    if !dir.is_dir() {
        return Err(FetchError::NotADirectory(dir.to_path_buf()));
    }
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        if path.is_file() {
            paths.push(path);
        }
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(paths
        .into_iter()
        .filter_map(|p| ProjectSource::local(p).ok())
        .collect())
}

/// One id per line; blank lines and `#` comments are skipped.
pub fn parse_id_list(text: &str, path: &Path) -> Result<Vec<ProjectSource>, FetchError> {
    let mut out = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = || FetchError::MalformedId {
            path: path.to_path_buf(),
            line: index + 1,
            text: line.to_string(),
        };
        let id: u64 = line.parse().map_err(|_| malformed())?;
        if id == 0 {
            return Err(malformed());
        }
        out.push(ProjectSource::remote(id));
    }
    Ok(out)
}

pub fn read_id_list(path: &Path) -> Result<Vec<ProjectSource>, FetchError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_id_list(&text, path)
}

/// Cache directory from the environment, else a folder in the system temp dir.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("scratchlint-cache"))
}

pub fn cache_path(cache_dir: &Path, id: u64) -> PathBuf {
    cache_dir.join(format!("{id}.json"))
}

#[derive(Debug, Clone)]
pub struct FetchConfig {
    pub api_url: String,
    pub projects_url: String,
    pub max_retries: u32,
    /// First retry delay; doubled for each further attempt.
    pub backoff: Duration,
    /// Pause before every download.
    pub delay: Duration,
    pub timeout: Duration,
    pub user_agent: String,
}

impl Default for FetchConfig {
    fn default() -> Self {
        FetchConfig {
            api_url: DEFAULT_API_URL.into(),
            projects_url: DEFAULT_PROJECTS_URL.into(),
            max_retries: MAX_RETRIES,
            backoff: Duration::from_millis(500),
            delay: Duration::ZERO,
            timeout: Duration::from_secs(30),
            user_agent: concat!("scratchlint/", env!("CARGO_PKG_VERSION")).into(),
        }
    }
}

impl FetchConfig {
    /// Defaults with endpoint overrides taken from the environment.
    pub fn from_env() -> FetchConfig {
        let mut config = FetchConfig::default();
        if let Ok(url) = std::env::var(API_URL_ENV) {
            config.api_url = url;
        }
        if let Ok(url) = std::env::var(PROJECTS_URL_ENV) {
            config.projects_url = url;
        }
        config
    }
}

#[derive(Deserialize)]
struct ProjectMeta {
    project_token: Option<String>,
}

enum Attempt<T> {
    Done(T),
    Retry(String),
}

pub struct Fetcher {
    config: FetchConfig,
    client: reqwest::blocking::Client,
}

impl Fetcher {
    pub fn new(config: FetchConfig) -> Result<Fetcher, FetchError> {
        let client = reqwest::blocking::Client::builder()
            .user_agent(config.user_agent.clone())
            .timeout(config.timeout)
            .build()
            .map_err(|e| FetchError::Network {
                id: 0,
                message: e.to_string(),
            })?;
        Ok(Fetcher { config, client })
    }

    /// Path of `<cache_dir>/<id>.json`, downloading it unless already cached.
    pub fn fetch_project(&self, id: u64, cache_dir: &Path) -> Result<PathBuf, FetchError> {
        if id == 0 {
            return Err(FetchError::InvalidId(id));
        }
        let target = cache_path(cache_dir, id);
        if target.is_file() {
            debug!("cache hit for project {id}");
            return Ok(target);
        }
        thread::sleep(self.config.delay);
        info!("downloading project {id}");
        let meta_url = format!(
            "{}/projects/{id}",
            self.config.api_url.trim_end_matches('/')
        );
        let meta: ProjectMeta = serde_json::from_str(&self.get_with_retries(id, &meta_url)?)
            .map_err(|e| FetchError::BadResponse {
                id,
                message: format!("metadata: {e}"),
            })?;
        let mut project_url = format!("{}/{id}", self.config.projects_url.trim_end_matches('/'));
        if let Some(token) = meta.project_token {
            project_url.push_str(&format!("?token={token}"));
        }
        let body = self.get_with_retries(id, &project_url)?;
        if serde_json::from_str::<serde_json::Value>(&body).is_err() {
            return Err(FetchError::BadResponse {
                id,
                message: "project body is not JSON".into(),
            });
        }
        store_atomically(cache_dir, &target, body.as_bytes())?;
        Ok(target)
    }

    fn get_with_retries(&self, id: u64, url: &str) -> Result<String, FetchError> {
        let mut wait = self.config.backoff;
        let mut attempt = 0;
        loop {
            match self.get_once(id, url)? {
                Attempt::Done(body) => return Ok(body),
                Attempt::Retry(message) if attempt < self.config.max_retries => {
                    attempt += 1;
                    warn!(
                        "project {id}: {message}; retry {attempt} of {}",
                        self.config.max_retries
                    );
                    thread::sleep(wait);
                    wait *= 2;
                }
                Attempt::Retry(message) => return Err(FetchError::Network { id, message }),
            }
        }
    }

    fn get_once(&self, id: u64, url: &str) -> Result<Attempt<String>, FetchError> {
        let response = match self.client.get(url).send() {
            Ok(r) => r,
            Err(e) => return Ok(Attempt::Retry(e.to_string())),
        };
        let status = response.status();
        if status == reqwest::StatusCode::NOT_FOUND || status == reqwest::StatusCode::FORBIDDEN {
            return Err(FetchError::NotFound(id));
        }
        if status.is_server_error() || status == reqwest::StatusCode::TOO_MANY_REQUESTS {
            return Ok(Attempt::Retry(format!("HTTP {status}")));
        }
        if !status.is_success() {
            return Err(FetchError::BadResponse {
                id,
                message: format!("HTTP {status}"),
            });
        }
        match response.text() {
            Ok(body) => Ok(Attempt::Done(body)),
            Err(e) => Ok(Attempt::Retry(e.to_string())),
        }
    }
}

/// Writes through a temporary file in the same directory, then renames into place.
fn store_atomically(dir: &Path, target: &Path, bytes: &[u8]) -> Result<(), FetchError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(target))?;
    tmp.persist(target).map_err(|e| FetchError::Io {
        path: target.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}
