use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

use super::{parse_pattern, ParseDiagnostic, Pattern};

/// Reject Instruction pattern, shipped as `ri.pattern`.
pub const RI_SOURCE: &str = include_str!("../../patterns/ri.pattern");
/// Accept Adequate Instructions pattern, shipped as `aai.pattern`.
pub const AAI_SOURCE: &str = include_str!("../../patterns/aai.pattern");

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("pattern '{0}' is defined twice")]
    DuplicatePattern(String),
    #[error("{path}: {}", .diagnostics.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Parse {
        path: String,
        diagnostics: Vec<ParseDiagnostic>,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PatternLibrary {
    pub patterns: BTreeMap<String, Pattern>,
}

impl PatternLibrary {
    pub fn insert(&mut self, pattern: Pattern) -> Result<(), LibraryError> {
        if self.patterns.contains_key(&pattern.name) {
            return Err(LibraryError::DuplicatePattern(pattern.name));
        }
        self.patterns.insert(pattern.name.clone(), pattern);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Pattern> {
        self.patterns.get(name)
    }

    /// Every `*.pattern` file in `dir`, in file-name order.
    pub fn load_dir(dir: &Path) -> Result<PatternLibrary, LibraryError> {
        let io = |e| LibraryError::Io {
            path: dir.display().to_string(),
            source: e,
        };
        let mut paths: Vec<_> = fs::read_dir(dir)
            .map_err(io)?
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "pattern"))
            .collect();
        paths.sort();
        let mut library = PatternLibrary::default();
        for path in paths {
            let text = fs::read_to_string(&path).map_err(|e| LibraryError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            let pattern = parse_pattern(&text).map_err(|diagnostics| LibraryError::Parse {
                path: path.display().to_string(),
                diagnostics,
            })?;
            library.insert(pattern)?;
        }
        Ok(library)
    }
}

/// The shipped library: `RI` and `AAI`.
pub fn builtin_library() -> PatternLibrary {
    let mut library = PatternLibrary::default();
    for source in [RI_SOURCE, AAI_SOURCE] {
        let pattern = parse_pattern(source).expect("shipped patterns parse");
        library
            .insert(pattern)
            .expect("shipped pattern names are distinct");
    }
    library
}
