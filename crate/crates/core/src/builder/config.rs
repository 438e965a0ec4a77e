use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::hara::{HaraModel, Threshold};

pub const DEFAULT_REJECT_PATTERN: &str = "RI";
pub const DEFAULT_ACCEPT_PATTERN: &str = "AAI";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternNames {
    pub reject: String,
    pub accept: String,
}

impl Default for PatternNames {
    fn default() -> Self {
        PatternNames {
            reject: DEFAULT_REJECT_PATTERN.into(),
            accept: DEFAULT_ACCEPT_PATTERN.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildConfig {
    pub system_name: String,
    pub contexts: Vec<String>,
    pub assumptions: Vec<String>,
    pub priority_threshold: Threshold,
    pub pattern_names: PatternNames,
    /// Pattern name to the id prefix of its grafted subtree. Unlisted
    /// patterns use `<name>.`.
    pub id_prefixes: BTreeMap<String, String>,
    /// System function whose goal becomes the reject-instructions goal.
    /// When unset, the single function mentioning "reject" is used.
    pub reject_function: Option<String>,
    /// Generated node id to display alias, stored in the `alias` tag.
    pub aliases: BTreeMap<String, String>,
}

impl BuildConfig {
    /// Defaults taken from the HARA: its system name and assumptions, no
    /// contexts, threshold C.
    pub fn from_hara(hara: &HaraModel) -> Self {
        BuildConfig {
            system_name: hara.system_name.clone(),
            contexts: Vec::new(),
            assumptions: hara.assumptions.clone(),
            priority_threshold: Threshold::default(),
            pattern_names: PatternNames::default(),
            id_prefixes: BTreeMap::new(),
            reject_function: None,
            aliases: BTreeMap::new(),
        }
    }

    pub fn prefix_for(&self, pattern: &str) -> String {
        self.id_prefixes
            .get(pattern)
            .cloned()
            .unwrap_or_else(|| format!("{pattern}."))
    }

    /// Overlays every key present in `file`.
    pub fn apply(&mut self, file: ConfigFile) -> Result<(), ConfigError> {
        if let Some(v) = file.system_name {
            self.system_name = v;
        }
        if let Some(v) = file.contexts {
            self.contexts = v;
        }
        if let Some(v) = file.assumptions {
            self.assumptions = v;
        }
        if let Some(v) = file.priority_threshold {
            self.priority_threshold = v.parse().map_err(ConfigError::Threshold)?;
        }
        if let Some(v) = file.reject_pattern {
            self.pattern_names.reject = v;
        }
        if let Some(v) = file.accept_pattern {
            self.pattern_names.accept = v;
        }
        if let Some(v) = file.id_prefixes {
            self.id_prefixes = v;
        }
        if let Some(v) = file.reject_function {
            self.reject_function = Some(v);
        }
        if let Some(v) = file.aliases {
            self.aliases = v;
        }
        Ok(())
    }
}

/// The on-disk config document: a flat JSON object, every key optional.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub system_name: Option<String>,
    pub contexts: Option<Vec<String>>,
    pub assumptions: Option<Vec<String>>,
    pub priority_threshold: Option<String>,
    pub reject_pattern: Option<String>,
    pub accept_pattern: Option<String>,
    pub id_prefixes: Option<BTreeMap<String, String>>,
    pub reject_function: Option<String>,
    pub aliases: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config is not valid: {0}")]
    Json(#[from] serde_json::Error),
    #[error("priority_threshold: {0}")]
    Threshold(String),
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }
}
