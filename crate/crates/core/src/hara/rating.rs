//! Severity / exposure / controllability classes and the rating lookup.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::diag::{Diagnostic, Locus};

macro_rules! risk_class {
    ($(#[$doc:meta])* $name:ident, $prefix:literal, $max:literal) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(u8);

        impl $name {
            pub const MAX: u8 = $max;

            pub fn new(level: u8) -> Option<Self> {
                (level <= $max).then_some($name(level))
            }

            pub fn level(self) -> u8 {
                self.0
            }

            pub fn all() -> impl Iterator<Item = Self> {
                (0..=$max).map($name)
            }

            /// The next class up, if any.
            pub fn step_up(self) -> Option<Self> {
                Self::new(self.0 + 1)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                s.strip_prefix($prefix)
                    .filter(|d| d.len() == 1)
                    .and_then(|d| d.parse::<u8>().ok())
                    .and_then(Self::new)
                    .ok_or_else(|| {
                        format!(concat!("expected ", $prefix, "0..", $prefix, "{}, found '{}'"), $max, s)
                    })
            }
        }
    };
}

risk_class!(
    /// Severity class S0..S3.
    Severity, "S", 3
);
risk_class!(
    /// Exposure class E0..E4.
    Exposure, "E", 4
);
risk_class!(
    /// Controllability class C0..C3.
    Controllability, "C", 3
);

/// Ordinal risk rating; `QM` is the lowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rating {
    QM,
    A,
    B,
    C,
    D,
}

impl Rating {
    pub const ALL: [Rating; 5] = [Rating::QM, Rating::A, Rating::B, Rating::C, Rating::D];

    pub fn as_str(self) -> &'static str {
        match self {
            Rating::QM => "QM",
            Rating::A => "A",
            Rating::B => "B",
            Rating::C => "C",
            Rating::D => "D",
        }
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rating {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rating::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("expected one of QM, A, B, C, D, found '{s}'"))
    }
}

/// Minimum rating that makes a hazardous event top priority.
/// `Unreachable` admits nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    AtLeast(Rating),
    Unreachable,
}

impl Threshold {
    pub fn admits(self, rating: Rating) -> bool {
        match self {
            Threshold::AtLeast(min) => rating >= min,
            Threshold::Unreachable => false,
        }
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::AtLeast(Rating::C)
    }
}

impl From<Rating> for Threshold {
    fn from(r: Rating) -> Self {
        Threshold::AtLeast(r)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::AtLeast(r) => write!(f, "{r}"),
            Threshold::Unreachable => f.write_str("none"),
        }
    }
}

impl FromStr for Threshold {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "none" {
            return Ok(Threshold::Unreachable);
        }
        s.parse().map(Threshold::AtLeast)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RiskAssessment {
    pub severity: Severity,
    pub exposure: Exposure,
    pub controllability: Controllability,
    pub rating: Rating,
}

impl RiskAssessment {
    /// Rates the triple with the shipped table.
    pub fn rated(severity: Severity, exposure: Exposure, controllability: Controllability) -> Self {
        RiskAssessment {
            severity,
            exposure,
            controllability,
            rating: risk_rating(severity, exposure, controllability),
        }
    }
}

/// The 4x5x4 determination table, loaded from a CSV with columns
/// `severity,exposure,controllability,rating`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingTable {
    cells: [[[Rating; 4]; 5]; 4],
}

pub const RATING_TABLE_FILE: &str = "asil_table.csv";
pub const BUILTIN_RATING_TABLE: &str = include_str!("../../fixtures/simlingo/asil_table.csv");
const TABLE_ROWS: usize = 80;

impl RatingTable {
    pub fn rating(&self, s: Severity, e: Exposure, c: Controllability) -> Rating {
        self.cells[s.0 as usize][e.0 as usize][c.0 as usize]
    }

    pub fn builtin() -> &'static RatingTable {
        static TABLE: OnceLock<RatingTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            RatingTable::parse_csv(BUILTIN_RATING_TABLE).expect("shipped rating table is complete")
        })
    }

    /// Parses a full table: exactly 80 rows, each triple exactly once.
    pub fn parse_csv(text: &str) -> Result<RatingTable, Vec<Diagnostic>> {
        let file = RATING_TABLE_FILE;
        let mut diags = Vec::new();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let expected = ["severity", "exposure", "controllability", "rating"];
        match reader.headers() {
            Ok(h) if h.iter().eq(expected.iter().copied()) => {}
            Ok(h) => {
                return Err(vec![Diagnostic::error(
                    "HAR002",
                    format!(
                        "expected header '{}', found '{}'",
                        expected.join(","),
                        h.iter().collect::<Vec<_>>().join(",")
                    ),
                )
                .at(Locus::Row {
                    file: file.into(),
                    row: 1,
                })])
            }
            Err(e) => {
                return Err(vec![
                    Diagnostic::error("HAR009", e.to_string()).at(Locus::File(file.into()))
                ])
            }
        }

        let mut cells: [[[Option<Rating>; 4]; 5]; 4] = [[[None; 4]; 5]; 4];
        let mut rows = 0;
        for record in reader.records() {
            let record = match record {
                Ok(r) => r,
                Err(e) => {
                    diags.push(
                        Diagnostic::error("HAR009", e.to_string()).at(Locus::File(file.into())),
                    );
                    break;
                }
            };
            rows += 1;
            let row = record.position().map_or(0, |p| p.line() as usize);
            let locus = Locus::Row {
                file: file.into(),
                row,
            };
            let parsed = (|| -> Result<_, String> {
                let s: Severity = record.get(0).unwrap_or_default().parse()?;
                let e: Exposure = record.get(1).unwrap_or_default().parse()?;
                let c: Controllability = record.get(2).unwrap_or_default().parse()?;
                let r: Rating = record.get(3).unwrap_or_default().parse()?;
                Ok((s, e, c, r))
            })();
            match parsed {
                Ok((s, e, c, r)) => {
                    let cell = &mut cells[s.0 as usize][e.0 as usize][c.0 as usize];
                    if cell.replace(r).is_some() {
                        diags.push(
                            Diagnostic::error(
                                "HAR003",
                                format!("triple ({s}, {e}, {c}) appears twice"),
                            )
                            .at(locus),
                        );
                    }
                }
                Err(message) => diags.push(Diagnostic::error("HAR006", message).at(locus)),
            }
        }
        if rows != TABLE_ROWS {
            diags.push(
                Diagnostic::error(
                    "HAR011",
                    format!("rating table has {rows} rows, expected {TABLE_ROWS}"),
                )
                .at(Locus::File(file.into())),
            );
        }
        if !diags.is_empty() {
            return Err(diags);
        }
        let mut out = [[[Rating::QM; 4]; 5]; 4];
        for (s, plane) in cells.iter().enumerate() {
            for (e, row) in plane.iter().enumerate() {
                for (c, cell) in row.iter().enumerate() {
                    match cell {
                        Some(r) => out[s][e][c] = *r,
                        None => {
                            return Err(vec![Diagnostic::error(
                                "HAR011",
                                format!("rating table has no entry for (S{s}, E{e}, C{c})"),
                            )
                            .at(Locus::File(file.into()))])
                        }
                    }
                }
            }
        }
        Ok(RatingTable { cells: out })
    }
}

/// Looks the triple up in the shipped table.
pub fn risk_rating(
    severity: Severity,
    exposure: Exposure,
    controllability: Controllability,
) -> Rating {
    RatingTable::builtin().rating(severity, exposure, controllability)
}
