//! Diagnostics shared by the graph, pattern and HARA checkers.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

/// Where a diagnostic points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Locus {
    Node(String),
    Edge {
        source: String,
        target: String,
        kind: String,
    },
    /// A row (1-based, header is row 1) of an input file.
    Row {
        file: String,
        row: usize,
    },
    File(String),
    /// A named model item such as a HARA id or a hot-spot name.
    Item(String),
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Node(id) => write!(f, "{id}"),
            Locus::Edge {
                source,
                target,
                kind,
            } => write!(f, "{source} -{kind}-> {target}"),
            Locus::Row { file, row } => write!(f, "{file}:{row}"),
            Locus::File(file) => write!(f, "{file}"),
            Locus::Item(item) => write!(f, "{item}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub locus: Option<Locus>,
}

impl Diagnostic {
    pub fn error(code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            locus: None,
        }
    }

    pub fn warning(code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
            locus: None,
        }
    }

    pub fn at(mut self, locus: Locus) -> Self {
        self.locus = Some(locus);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.severity, self.code)?;
        if let Some(locus) = &self.locus {
            write!(f, " [{locus}]")?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Sorts by code, then locus, then message. Every checker returns its
/// diagnostics in this order.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        a.code
            .cmp(b.code)
            .then_with(|| a.locus.cmp(&b.locus))
            .then_with(|| a.message.cmp(&b.message))
            .then_with(|| a.severity.cmp(&b.severity))
    });
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

pub fn count_by_severity(diags: &[Diagnostic]) -> (usize, usize) {
    let errors = diags.iter().filter(|d| d.is_error()).count();
    (errors, diags.len() - errors)
}
