//! Localized hint texts loaded from `key=value` resource files.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::{Captures, Regex};

use super::ReportError;
use crate::finders::{registry, Issue};

pub const FALLBACK_LOCALE: &str = "en";

const BUNDLED: &[(&str, &str)] = &[
    ("en", include_str!("locales/en.properties")),
    ("de", include_str!("locales/de.properties")),
    ("es", include_str!("locales/es.properties")),
];

/// Hint templates per locale. Templates use `{param}` placeholders.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HintCatalog {
    locales: BTreeMap<String, BTreeMap<String, String>>,
}

/// Parses a resource file: one `key=value` per line, `#` comments, blank lines ignored.
pub fn parse_properties(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

impl HintCatalog {
    /// Catalog with the bundled en, de and es texts.
    pub fn bundled() -> &'static HintCatalog {
        static CATALOG: OnceLock<HintCatalog> = OnceLock::new();
        CATALOG.get_or_init(|| {
            let mut catalog = HintCatalog::default();
            for (locale, text) in BUNDLED {
                catalog.insert_locale(locale, parse_properties(text));
            }
            catalog
        })
    }

    pub fn insert_locale(&mut self, locale: &str, entries: BTreeMap<String, String>) {
        self.locales.insert(locale.to_string(), entries);
    }

    pub fn locales(&self) -> impl Iterator<Item = &str> {
        self.locales.keys().map(String::as_str)
    }

    /// Locale actually used for `requested`: exact, then language part, then English.
    pub fn resolve_locale<'a>(&'a self, requested: &str) -> &'a str {
        let normalized = requested.trim().to_ascii_lowercase().replace('-', "_");
        let language = normalized.split('_').next().unwrap_or_default().to_string();
        [normalized, language]
            .into_iter()
            .find_map(|l| self.locales.get_key_value(&l).map(|(k, _)| k.as_str()))
            .unwrap_or(FALLBACK_LOCALE)
    }

    /// Template for `key`, falling back to English.
    pub fn template(&self, locale: &str, key: &str) -> Result<&str, ReportError> {
        let locale = self.resolve_locale(locale);
        self.locales
            .get(locale)
            .and_then(|m| m.get(key))
            .or_else(|| self.locales.get(FALLBACK_LOCALE).and_then(|m| m.get(key)))
            .map(String::as_str)
            .ok_or_else(|| ReportError::MissingHintKey(key.to_string()))
    }

    /// Registered hint keys that have no English text.
    pub fn missing_keys(&self) -> Vec<String> {
        let english = self.locales.get(FALLBACK_LOCALE);
        registry()
            .iter()
            .flat_map(|f| f.hint_keys())
            .filter(|k| english.is_none_or(|m| !m.contains_key(*k)))
            .map(str::to_string)
            .collect()
    }

    /// Startup self-check: every registered hint key has English text.
    pub fn self_check(&self) -> Result<(), ReportError> {
        match self.missing_keys().into_iter().next() {
            Some(key) => Err(ReportError::MissingHintKey(key)),
            None => Ok(()),
        }
    }
}

/// Fills `{param}` placeholders; unknown placeholders stay as written.
pub fn fill_template(template: &str, params: &BTreeMap<String, String>) -> String {
    static PLACEHOLDER: OnceLock<Regex> = OnceLock::new();
    let re = PLACEHOLDER
        .get_or_init(|| Regex::new(r"\{([A-Za-z_][A-Za-z0-9_]*)\}").expect("valid regex"));
    re.replace_all(template, |c: &Captures<'_>| {
        params
            .get(&c[1])
            .cloned()
            .unwrap_or_else(|| c[0].to_string())
    })
    .into_owned()
}

pub fn render_hint(
    issue: &Issue,
    catalog: &HintCatalog,
    locale: &str,
) -> Result<String, ReportError> {
    Ok(fill_template(
        catalog.template(locale, &issue.hint_key)?,
        &issue.hint_params,
    ))
}
