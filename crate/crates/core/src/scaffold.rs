//! `init`: writes the SimLingo example project.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::pattern::{AAI_SOURCE, RI_SOURCE};

/// Relative path and contents of every scaffolded file.
pub const FIXTURE_FILES: [(&str, &str); 10] = [
    ("meta.csv", include_str!("../fixtures/simlingo/meta.csv")),
    (
        "system_functions.csv",
        include_str!("../fixtures/simlingo/system_functions.csv"),
    ),
    (
        "malfunctions.csv",
        include_str!("../fixtures/simlingo/malfunctions.csv"),
    ),
    (
        "operational_scenarios.csv",
        include_str!("../fixtures/simlingo/operational_scenarios.csv"),
    ),
    (
        "hazardous_events.csv",
        include_str!("../fixtures/simlingo/hazardous_events.csv"),
    ),
    (
        "safe_events.csv",
        include_str!("../fixtures/simlingo/safe_events.csv"),
    ),
    (
        "asil_table.csv",
        include_str!("../fixtures/simlingo/asil_table.csv"),
    ),
    (
        "build.json",
        include_str!("../fixtures/simlingo/build.json"),
    ),
    ("patterns/ri.pattern", RI_SOURCE),
    ("patterns/aai.pattern", AAI_SOURCE),
];

#[derive(Debug, Error)]
pub enum ScaffoldError {
    #[error("{0} exists and is not empty")]
    TargetNotEmpty(PathBuf),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

/// Writes the fixture into `target`, which must be absent or empty.
/// Returns the written paths.
pub fn scaffold(target: &Path) -> Result<Vec<PathBuf>, ScaffoldError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ScaffoldError::Io { path, source }
    };
    if target.exists() {
        let mut entries = fs::read_dir(target).map_err(io_err(target))?;
        if entries.next().is_some() {
            return Err(ScaffoldError::TargetNotEmpty(target.to_path_buf()));
        }
    }
    let mut written = Vec::new();
    for (name, contents) in FIXTURE_FILES {
        let path = target.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        fs::write(&path, contents).map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}
