//! Loading, analysing and reporting a batch of projects.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _, Result};
use log::{error, warn};
use rayon::prelude::*;

use scratchlint_core::ast::{load_sb3, parse_project, AssetInventory, Program};
use scratchlint_core::finders::{run_all, FinderConfig, Issue};
use scratchlint_core::metrics::{compute_metrics, MetricsRecord};
use scratchlint_core::report::{
    annotate_project, annotate_sb3, build_json_report, console_line, write_csv, write_metrics_csv,
    CsvRow, HintCatalog,
};
use scratchlint_fetch::{
    default_cache_dir, scan_folder, FetchConfig, Fetcher, ProjectSource, SourceKind,
};

use crate::args::{Cli, ReportFormat};

pub enum Raw {
    Json(String),
    Sb3(Vec<u8>),
}

pub struct Analysis {
    pub name: String,
    pub program: Program,
    pub raw: Raw,
    pub issues: Vec<Issue>,
    pub metrics: MetricsRecord,
}

pub struct Settings {
    pub check: bool,
    pub finders: FinderConfig,
    pub locale: String,
    pub cache_dir: PathBuf,
    pub fetch: FetchConfig,
}

/// Sources named on the command line, in input order.
pub fn sources(cli: &Cli) -> Result<Vec<ProjectSource>> {
    if let Some(path) = &cli.path {
        if path.is_dir() {
            return Ok(scan_folder(path)?);
        }
        return Ok(vec![ProjectSource::local(path)?]);
    }
    if let Some(id) = cli.projectid {
        return Ok(vec![ProjectSource::remote(id)]);
    }
    let list = cli
        .idlist
        .as_ref()
        .ok_or_else(|| anyhow!("no input given"))?;
    Ok(scratchlint_fetch::read_id_list(list)?)
}

pub fn settings(cli: &Cli, finders: FinderConfig) -> Settings {
    Settings {
        check: cli.check,
        finders,
        locale: cli.lang.clone(),
        cache_dir: cli.cache_dir.clone().unwrap_or_else(default_cache_dir),
        fetch: FetchConfig::from_env(),
    }
}

fn load(source: &ProjectSource, settings: &Settings) -> Result<(Program, AssetInventory, Raw)> {
    match source.kind {
        SourceKind::LocalSb3 => {
            let path = source.path.as_deref().expect("local source has a path");
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let (program, assets) =
                load_sb3(&bytes).with_context(|| format!("loading {}", path.display()))?;
            Ok((program, assets, Raw::Sb3(bytes)))
        }
        SourceKind::LocalJson => {
            let path = source.path.as_deref().expect("local source has a path");
            load_json(path)
        }
        SourceKind::RemoteId => {
            let id = source.id.expect("remote source has an id");
            let fetcher = Fetcher::new(settings.fetch.clone())?;
            let path = fetcher.fetch_project(id, &settings.cache_dir)?;
            let (mut program, assets, raw) = load_json(&path)?;
            program.project_id = Some(id);
            Ok((program, assets, raw))
        }
    }
}

fn load_json(path: &Path) -> Result<(Program, AssetInventory, Raw)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let program = parse_project(&text).with_context(|| format!("parsing {}", path.display()))?;
    let assets = AssetInventory::from_program(&program);
    Ok((program, assets, Raw::Json(text)))
}

pub fn analyse(source: &ProjectSource, settings: &Settings) -> Result<Analysis> {
    let (mut program, assets, raw) = load(source, settings)?;
    program.name = source.resolved_name.clone();
    program.source_path = source.path.as_ref().map(|p| p.display().to_string());
    for w in &program.warnings {
        warn!("{}: {w}", source.resolved_name);
    }
    let metrics = compute_metrics(&program);
    let mut issues = Vec::new();
    if settings.check {
        let run = run_all(&program, &assets, &settings.finders);
        if let Some(d) = run.diagnostics.first() {
            return Err(anyhow!("finder {} failed: {}", d.finder_id, d.message));
        }
        issues = run.issues;
    }
    Ok(Analysis {
        name: source.resolved_name.clone(),
        program,
        raw,
        issues,
        metrics,
    })
}

/// Analyses every source on a pool of `jobs` threads; results keep input order.
pub fn analyse_all(
    sources: &[ProjectSource],
    settings: &Settings,
    jobs: usize,
) -> Result<Vec<Result<Analysis>>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(|| sources.par_iter().map(|s| analyse(s, settings)).collect()))
}

pub fn console(a: &Analysis, settings: &Settings, catalog: &HintCatalog) -> Result<String> {
    let mut out = String::new();
    if settings.check {
        out.push_str(&format!("{}: {} issue(s)\n", a.name, a.issues.len()));
        for issue in &a.issues {
            out.push_str(&console_line(issue, catalog, &settings.locale)?);
            out.push('\n');
        }
    } else {
        let m = &a.metrics;
        out.push_str(&format!(
            "{}: blocks={} scripts={} sprites={} procedures={} loose={} complexity={}\n",
            a.name,
            m.block_count,
            m.script_count,
            m.sprite_count,
            m.procedure_count,
            m.loose_script_count,
            scratchlint_core::metrics::format_complexity(m.weighted_mean_complexity)
        ));
    }
    Ok(out)
}

pub fn report(
    done: &[&Analysis],
    format: ReportFormat,
    settings: &Settings,
    catalog: &HintCatalog,
) -> Result<String> {
    match format {
        ReportFormat::Csv if settings.check => {
            let rows: Vec<CsvRow> = done
                .iter()
                .map(|a| CsvRow::new(&a.name, a.metrics, &a.issues))
                .collect();
            Ok(write_csv(&rows)?)
        }
        ReportFormat::Csv => {
            let rows: Vec<(String, MetricsRecord)> =
                done.iter().map(|a| (a.name.clone(), a.metrics)).collect();
            Ok(write_metrics_csv(&rows)?)
        }
        ReportFormat::Json => {
            let reports = done
                .iter()
                .map(|a| {
                    build_json_report(&a.program, &a.issues, &a.metrics, catalog, &settings.locale)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut text = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])?
            } else {
                serde_json::to_string_pretty(&reports)?
            };
            text.push('\n');
            Ok(text)
        }
    }
}

/// Writes `<dir>/<name>_annotated.<sb3|json>` and returns its path.
pub fn write_annotated(
    a: &Analysis,
    dir: &Path,
    settings: &Settings,
    catalog: &HintCatalog,
) -> Result<PathBuf> {
    let (bytes, ext) = match &a.raw {
        Raw::Json(text) => (
            annotate_project(text, &a.issues, catalog, &settings.locale)?.into_bytes(),
            "json",
        ),
        Raw::Sb3(bytes) => (
            annotate_sb3(bytes, &a.issues, catalog, &settings.locale)?,
            "sb3",
        ),
    };
    let path = dir.join(format!("{}_annotated.{ext}", a.name));
    fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn log_failure(source: &ProjectSource, err: &anyhow::Error) {
    error!("{}: {err:#}", source.resolved_name);
}
