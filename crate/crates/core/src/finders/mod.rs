//! Issue-finder framework and the finder catalog.
//!
//! A finder is a pure check over a [`Context`] (program, assets, lazily built
//! control-flow graph). [`run_all`] runs the enabled finders, turns their
//! [`Finding`]s into [`Issue`]s, de-duplicates and sorts them.

/// Declares a unit-struct finder backed by a plain function.
macro_rules! finder {
    ($ty:ident, $id:literal, $category:ident, $check:path) => {
        pub struct $ty;
        impl $crate::finders::Finder for $ty {
            fn id(&self) -> &'static str {
                $id
            }
            fn category(&self) -> $crate::finders::Category {
                $crate::finders::Category::$category
            }
            fn check(&self, ctx: &$crate::finders::Context<'_>) -> Vec<$crate::finders::Finding> {
                $check(ctx)
            }
        }
    };
}

mod clones;
mod general;
mod scratch;
mod smells;
mod syntax;
mod util;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::ast::{Actor, AssetInventory, Program};
use crate::cfg::{
    build_cfg, definitely_defined, reachable_event_edges, ControlFlowGraph, DataflowFacts,
    HandlerFiring,
};

pub use util::{each_expr, each_stmt, is_sensing_condition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Category {
    SyntaxError,
    ScratchBug,
    GeneralBug,
    CodeSmell,
}

impl Category {
    pub fn label(self) -> &'static str {
        match self {
            Category::SyntaxError => "SYNTAX_ERROR",
            Category::ScratchBug => "SCRATCH_BUG",
            Category::GeneralBug => "GENERAL_BUG",
            Category::CodeSmell => "CODE_SMELL",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            Category::CodeSmell => Severity::Smell,
            _ => Severity::Bug,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Severity {
    Bug,
    Smell,
}

impl Severity {
    pub fn label(self) -> &'static str {
        match self {
            Severity::Bug => "BUG",
            Severity::Smell => "SMELL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Issue {
    pub finder_id: String,
    pub category: Category,
    pub severity: Severity,
    pub actor: String,
    pub script_top_block_id: Option<String>,
    /// Affected blocks; empty for findings about a whole actor or project.
    pub block_ids: Vec<String>,
    pub hint_key: String,
    pub hint_params: BTreeMap<String, String>,
}

impl Issue {
    fn dedup_key(&self) -> (String, String, Vec<String>, BTreeMap<String, String>) {
        let mut ids = self.block_ids.clone();
        ids.sort();
        (
            self.finder_id.clone(),
            self.actor.clone(),
            ids,
            self.hint_params.clone(),
        )
    }

    fn sort_key(&self) -> (Category, &str, &str, &str) {
        (
            self.category,
            &self.finder_id,
            &self.actor,
            self.block_ids.first().map(String::as_str).unwrap_or(""),
        )
    }
}

/// What a finder reports; the framework adds id, category and severity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub actor: String,
    pub script: Option<String>,
    pub block_ids: Vec<String>,
    pub hint_key: Option<&'static str>,
    pub params: BTreeMap<String, String>,
}

impl Finding {
    pub fn new(actor: &Actor, script: Option<&str>, block_ids: Vec<String>) -> Finding {
        Finding {
            actor: actor.name.clone(),
            script: script.map(str::to_string),
            block_ids,
            hint_key: None,
            params: BTreeMap::new(),
        }
    }

    pub fn at(actor: &Actor, script: Option<&str>, block_id: &str) -> Finding {
        Finding::new(actor, script, vec![block_id.to_string()])
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Finding {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn hint(mut self, key: &'static str) -> Finding {
        self.hint_key = Some(key);
        self
    }
}

/// One catalog rule.
pub trait Finder: Send + Sync {
    fn id(&self) -> &'static str;
    fn category(&self) -> Category;
    /// Hint keys this finder may emit; the first is the default.
    fn hint_keys(&self) -> Vec<&'static str> {
        vec![self.id()]
    }
    fn check(&self, ctx: &Context<'_>) -> Vec<Finding>;
}

/// Everything a finder may look at. Derived analyses are built on first use.
pub struct Context<'a> {
    pub program: &'a Program,
    pub assets: &'a AssetInventory,
    pub config: &'a FinderConfig,
    cfg: OnceLock<ControlFlowGraph<'a>>,
    dataflow: OnceLock<DataflowFacts>,
    firings: OnceLock<Vec<HandlerFiring>>,
}

impl<'a> Context<'a> {
    pub fn new(
        program: &'a Program,
        assets: &'a AssetInventory,
        config: &'a FinderConfig,
    ) -> Context<'a> {
        Context {
            program,
            assets,
            config,
            cfg: OnceLock::new(),
            dataflow: OnceLock::new(),
            firings: OnceLock::new(),
        }
    }

    pub fn cfg(&self) -> &ControlFlowGraph<'a> {
        self.cfg.get_or_init(|| build_cfg(self.program))
    }

    pub fn dataflow(&self) -> &DataflowFacts {
        self.dataflow.get_or_init(|| definitely_defined(self.cfg()))
    }

    pub fn firings(&self) -> &[HandlerFiring] {
        self.firings
            .get_or_init(|| reachable_event_edges(self.program))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinderConfig {
    pub enabled: BTreeSet<String>,
    pub ignore_loose: bool,
    pub long_script_threshold: usize,
}

impl Default for FinderConfig {
    fn default() -> Self {
        FinderConfig {
            enabled: registry().iter().map(|f| f.id().to_string()).collect(),
            ignore_loose: false,
            long_script_threshold: 12,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown finder id: {0}")]
    UnknownFinder(String),
}

impl FinderConfig {
    /// Config enabling exactly `ids`; unknown ids are rejected.
    pub fn with_finders<I, S>(ids: I) -> Result<FinderConfig, ConfigError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let known: BTreeSet<&str> = registry().iter().map(|f| f.id()).collect();
        let mut enabled = BTreeSet::new();
        for id in ids {
            let id = id.as_ref().trim();
            if !known.contains(id) {
                return Err(ConfigError::UnknownFinder(id.to_string()));
            }
            enabled.insert(id.to_string());
        }
        Ok(FinderConfig {
            enabled,
            ..FinderConfig::default()
        })
    }
}

/// A finder that panicked; the other finders' results are still returned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub finder_id: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FinderRun {
    pub issues: Vec<Issue>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Registry metadata for listings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinderInfo {
    pub id: &'static str,
    pub category: Category,
    pub default_enabled: bool,
    pub hint_keys: Vec<&'static str>,
}

/// All catalog finders in catalog order: syntax errors, Scratch-specific bugs,
/// general bugs, smells; alphabetical within each category.
pub fn registry() -> &'static [Box<dyn Finder>] {
    static REGISTRY: OnceLock<Vec<Box<dyn Finder>>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut all: Vec<Box<dyn Finder>> = Vec::new();
        all.extend(syntax::finders());
        all.extend(scratch::finders());
        all.extend(general::finders());
        all.extend(smells::finders());
        all
    })
}

pub fn finder_infos() -> Vec<FinderInfo> {
    registry()
        .iter()
        .map(|f| FinderInfo {
            id: f.id(),
            category: f.category(),
            default_enabled: true,
            hint_keys: f.hint_keys(),
        })
        .collect()
}

pub fn finder(id: &str) -> Option<&'static dyn Finder> {
    registry().iter().find(|f| f.id() == id).map(|f| f.as_ref())
}

/// Runs one finder and converts its findings into issues.
pub fn check(finder: &dyn Finder, ctx: &Context<'_>) -> Vec<Issue> {
    finder
        .check(ctx)
        .into_iter()
        .map(|f| Issue {
            finder_id: finder.id().to_string(),
            category: finder.category(),
            severity: finder.category().severity(),
            actor: f.actor,
            script_top_block_id: f.script,
            block_ids: f.block_ids,
            hint_key: f.hint_key.unwrap_or(finder.id()).to_string(),
            hint_params: f.params,
        })
        .collect()
}

pub fn run_all(program: &Program, assets: &AssetInventory, config: &FinderConfig) -> FinderRun {
    let filtered;
    let visible = if config.ignore_loose {
        filtered = program.without_loose_scripts();
        &filtered
    } else {
        program
    };
    let full_ctx = Context::new(program, assets, config);
    let ctx = Context::new(visible, assets, config);
    let mut run = FinderRun::default();
    for f in registry() {
        if !config.enabled.contains(f.id()) {
            continue;
        }
        let context = if f.id() == "code_lying_around" {
            &full_ctx
        } else {
            &ctx
        };
        match catch_unwind(AssertUnwindSafe(|| check(f.as_ref(), context))) {
            Ok(issues) => run.issues.extend(issues),
            Err(payload) => {
                let message = payload
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| payload.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "finder panicked".to_string());
                run.diagnostics.push(Diagnostic {
                    finder_id: f.id().to_string(),
                    message,
                });
            }
        }
    }
    run.issues = normalize(run.issues);
    run
}

/// De-duplicates by (finder, actor, sorted block ids, params) and sorts deterministically.
pub fn normalize(issues: Vec<Issue>) -> Vec<Issue> {
    let mut seen = BTreeSet::new();
    let mut out: Vec<Issue> = issues
        .into_iter()
        .filter(|i| seen.insert(i.dedup_key()))
        .collect();
    out.sort_by(|a, b| {
        a.sort_key()
            .cmp(&b.sort_key())
            .then_with(|| a.block_ids.cmp(&b.block_ids))
    });
    out
}

/// Issue counts per finder id, covering every registered finder.
pub fn counts_by_finder(issues: &[Issue]) -> BTreeMap<&'static str, usize> {
    let mut counts: BTreeMap<&'static str, usize> =
        registry().iter().map(|f| (f.id(), 0)).collect();
    for i in issues {
        if let Some(c) = counts.iter_mut().find(|(k, _)| **k == i.finder_id) {
            *c.1 += 1;
        }
    }
    counts
}
