#![allow(dead_code)]

pub mod dot_grammar;
pub mod generate;
pub mod oracle;

use std::path::{Path, PathBuf};

use raise_forge::builder::{build_safety_case, BuildConfig, ConfigFile, CoverageReport};
use raise_forge::gsn::ArgumentGraph;
use raise_forge::hara::{parse_hara, HaraModel};
use raise_forge::pattern::builtin_library;

pub const GOLDEN_CASE: &str = include_str!("../golden/case.gsn.json");

pub const CONTEXTS: [&str; 4] = [
    "SimLingo execution takes place in the CARLA simulator",
    "SimLingo is a closed loop system",
    "Vehicles/pedestrians behave randomly",
    "SimLingo uses a camera as its sensor",
];

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/simlingo")
}

pub fn fixture_hara() -> HaraModel {
    parse_hara(&fixture_dir()).expect("fixture parses")
}

pub fn fixture_config(hara: &HaraModel) -> BuildConfig {
    let mut cfg = BuildConfig::from_hara(hara);
    let text = std::fs::read_to_string(fixture_dir().join("build.json")).unwrap();
    cfg.apply(ConfigFile::parse(&text).unwrap()).unwrap();
    cfg
}

pub fn fixture_case() -> (ArgumentGraph, CoverageReport) {
    let hara = fixture_hara();
    let cfg = fixture_config(&hara);
    build_safety_case(&cfg, &hara, &builtin_library()).expect("fixture builds")
}

/// Copies the fixture directory into `dst`.
pub fn copy_fixture(dst: &Path) {
    std::fs::create_dir_all(dst).unwrap();
    for entry in std::fs::read_dir(fixture_dir()).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dst.join(entry.file_name())).unwrap();
    }
}

/// Runs the CLI in-process; returns (exit code, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (u8, String, String) {
    let mut argv = vec!["raise-forge"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = raise_forge::cli::run(argv, &mut out, &mut err);
    (
        code as u8,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}
