mod args;
mod pipeline;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::Parser;

use scratchlint_core::finders::FinderConfig;
use scratchlint_core::report::HintCatalog;

use args::Cli;

const EXIT_OK: u8 = 0;
const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}\n\nFor more information, try '--help'.");
    ExitCode::from(EXIT_USAGE)
}

fn finder_config(cli: &Cli) -> Result<FinderConfig, String> {
    let mut config = match &cli.finders {
        Some(ids) => FinderConfig::with_finders(ids).map_err(|e| format!("--finders: {e}"))?,
        None => FinderConfig::default(),
    };
    config.ignore_loose = cli.ignore_loose;
    config.long_script_threshold = cli.long_script_threshold;
    Ok(config)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let format = match cli.report_format() {
        Ok(f) => f,
        Err(message) => return usage_error(&message),
    };
    let finders = match finder_config(&cli) {
        Ok(c) => c,
        Err(message) => return usage_error(&message),
    };
    match run(&cli, format, finders) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn run(cli: &Cli, format: Option<args::ReportFormat>, finders: FinderConfig) -> Result<u8> {
    let catalog = HintCatalog::bundled();
    catalog.self_check()?;
    let sources = pipeline::sources(cli)?;
    let settings = pipeline::settings(cli, finders);
    let results = pipeline::analyse_all(&sources, &settings, cli.jobs)?;

    let mut failed = false;
    let mut done = Vec::new();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (source, result) in sources.iter().zip(&results) {
        match result {
            Ok(a) => {
                out.write_all(pipeline::console(a, &settings, catalog)?.as_bytes())?;
                done.push(a);
            }
            Err(e) => {
                pipeline::log_failure(source, e);
                failed = true;
            }
        }
    }
    if let (Some(format), Some(output)) = (format, &cli.output) {
        let text = pipeline::report(&done, format, &settings, catalog)?;
        fs::write(output, text).with_context(|| format!("writing {}", output.display()))?;
    }
    if cli.annotate {
        let dir = cli
            .output
            .as_deref()
            .and_then(Path::parent)
            .filter(|p| !p.as_os_str().is_empty());
        let dir = dir.unwrap_or(Path::new("."));
        for a in &done {
            if let Err(e) = pipeline::write_annotated(a, dir, &settings, catalog) {
                log::error!("{}: {e:#}", a.name);
                failed = true;
            }
        }
    }
    let found_issues = done.iter().any(|a| !a.issues.is_empty());
    Ok(if failed || (cli.fail_on_issue && found_issues) {
        EXIT_FAILURE
    } else {
        EXIT_OK
    })
}
