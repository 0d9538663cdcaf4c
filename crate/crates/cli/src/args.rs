//! Command-line options.

use std::path::PathBuf;

use clap::{ArgGroup, Parser};

use scratchlint_core::finders::{registry, Category};

pub const DEFAULT_JOBS: usize = 4;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "scratchlint",
    version,
    about = "Finds bugs and code smells in Scratch 3.0 projects and computes code metrics",
    after_help = finder_listing(),
    group(ArgGroup::new("mode").required(true).args(["check", "stats"])),
    group(ArgGroup::new("input").required(true).args(["path", "projectid", "idlist"])),
)]
pub struct Cli {
    /// Run the issue finders
    #[arg(long)]
    pub check: bool,
    /// Compute code metrics only
    #[arg(long)]
    pub stats: bool,
    /// A .sb3 or project .json file, or a folder of them
    #[arg(long, value_name = "PATH")]
    pub path: Option<PathBuf>,
    /// Id of a shared project to download
    #[arg(long, value_name = "ID", value_parser = clap::value_parser!(u64).range(1..))]
    pub projectid: Option<u64>,
    /// File with one project id per line
    #[arg(long, value_name = "FILE")]
    pub idlist: Option<PathBuf>,
    /// Report file; the format follows the extension (.csv or .json)
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Language of the hints (en, de, es)
    #[arg(long, default_value = "en", value_name = "LOCALE")]
    pub lang: String,
    /// Comma-separated finder ids to run (default: all)
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    pub finders: Option<Vec<String>>,
    /// Skip scripts without a hat block
    #[arg(long)]
    pub ignore_loose: bool,
    /// Also write a copy of each project with the issues as comments
    #[arg(long, conflicts_with = "stats")]
    pub annotate: bool,
    /// Exit with status 1 when any issue is found
    #[arg(long, conflicts_with = "stats")]
    pub fail_on_issue: bool,
    /// Number of projects analysed in parallel
    #[arg(long, default_value_t = DEFAULT_JOBS, value_parser = parse_jobs)]
    pub jobs: usize,
    /// Blocks above which a script counts as long
    #[arg(long, default_value_t = 12, value_name = "N")]
    pub long_script_threshold: usize,
    /// Download cache (default: $SCRATCHLINT_CACHE_DIR or a temp folder)
    #[arg(long, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl Cli {
    pub fn report_format(&self) -> Result<Option<ReportFormat>, String> {
        let Some(output) = &self.output else {
            return Ok(None);
        };
        match output
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("csv") => Ok(Some(ReportFormat::Csv)),
            Some("json") => Ok(Some(ReportFormat::Json)),
            _ => Err(format!(
                "--output: cannot tell the report format of {} (use .csv or .json)",
                output.display()
            )),
        }
    }
}

fn finder_listing() -> String {
    let mut text = String::from("Finders:\n");
    let mut current = None;
    for f in registry() {
        if current != Some(f.category()) {
            current = Some(f.category());
            text.push_str(&format!("  {}:\n", category_title(f.category())));
        }
        text.push_str(&format!("    {}\n", f.id()));
    }
    text
}

fn category_title(c: Category) -> &'static str {
    match c {
        Category::SyntaxError => "Syntax errors",
        Category::ScratchBug => "Scratch-specific bugs",
        Category::GeneralBug => "General bugs",
        Category::CodeSmell => "Code smells",
    }
}

fn parse_jobs(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("`{text}` is not a positive number")),
    }
}
