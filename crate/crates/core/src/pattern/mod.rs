//! Argument patterns: GSN templates with hot spots, multiplicity and choice.
//!
//! Patterns are written in a line-oriented text format:
//!
//! ```text
//! pattern RI v1
//! objective reject-dangerous
//!
//! param system: SystemName
//! param scenario: Scenario*
//!
//! node G1: Goal "{system} rejects dangerous instructions"
//! node G2: Goal "Handled in {scenario.id}" multiplicity over scenario
//!
//! edge G1 -supportedBy-> G2
//! ```
//!
//! `*` after a sort marks a collection hot spot, `?` an optional one. Node
//! lines accept the modifiers `undeveloped`, `multiplicity over <param>`,
//! `choice <min>..<max>` and `tag <key>="<value>"`; tag values may contain
//! placeholders. `#` starts a comment.

mod library;
mod parser;
mod printer;
pub mod template;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::gsn::{ArgumentGraph, NodeId};

pub use library::{builtin_library, LibraryError, PatternLibrary, AAI_SOURCE, RI_SOURCE};
pub use parser::{parse_pattern, parse_pattern_bytes};
pub use printer::print_pattern;
pub use validate::{multiplicity_regions, validate_pattern, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Scenario,
    Instruction,
    Outcome,
    SystemName,
    EvidenceRef,
    FreeText,
}

impl Sort {
    pub const ALL: [Sort; 6] = [
        Sort::Scenario,
        Sort::Instruction,
        Sort::Outcome,
        Sort::SystemName,
        Sort::EvidenceRef,
        Sort::FreeText,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Sort::Scenario => "Scenario",
            Sort::Instruction => "Instruction",
            Sort::Outcome => "Outcome",
            Sort::SystemName => "SystemName",
            Sort::EvidenceRef => "EvidenceRef",
            Sort::FreeText => "FreeText",
        }
    }
}

impl FromStr for Sort {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Sort::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown hot-spot sort '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HotSpot {
    pub name: String,
    pub sort: Sort,
    pub collection: bool,
    pub required: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    RejectDangerous,
    AcceptSafe,
    Generic,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::RejectDangerous => "reject-dangerous",
            Objective::AcceptSafe => "accept-safe",
            Objective::Generic => "generic",
        }
    }
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Objective::RejectDangerous,
            Objective::AcceptSafe,
            Objective::Generic,
        ]
        .into_iter()
        .find(|o| o.as_str() == s)
        .ok_or_else(|| format!("unknown objective '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    /// Replicate the node and everything below it once per element of the
    /// named collection hot spot.
    Multiplicity { over: String },
    /// Keep between `min` and `max` of the node's `SupportedBy` children.
    Choice { min: u32, max: u32 },
}

/// A parsed pattern. Statements and tag values in `template` are kept in
/// canonical template text (see [`template`]); a template node is flagged
/// uninstantiated when it contains placeholders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub name: String,
    pub version: String,
    pub objective: Objective,
    pub params: Vec<HotSpot>,
    pub template: ArgumentGraph,
    pub expansions: BTreeMap<NodeId, Expansion>,
}

impl Pattern {
    pub fn param(&self, name: &str) -> Option<&HotSpot> {
        self.params.iter().find(|p| p.name == name)
    }
}

/// Position-carrying parser error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}
