use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;

use super::rating::{
    Controllability, Exposure, RatingTable, RiskAssessment, Severity, RATING_TABLE_FILE,
};
use super::{
    compare_ids, is_hara_id, HaraModel, HazardousEvent, Malfunction, OperationalScenario, Rating,
    SafeEvent, SafetyGoal, SystemFunction,
};
use crate::diag::{sort_diagnostics, Diagnostic, Locus};

pub const META_FILE: &str = "meta.csv";
pub const FUNCTIONS_FILE: &str = "system_functions.csv";
pub const MALFUNCTIONS_FILE: &str = "malfunctions.csv";
pub const SCENARIOS_FILE: &str = "operational_scenarios.csv";
pub const HAZARDS_FILE: &str = "hazardous_events.csv";
pub const SAFE_EVENTS_FILE: &str = "safe_events.csv";

/// The six mandatory files of a HARA directory.
pub const HARA_FILES: [&str; 6] = [
    META_FILE,
    FUNCTIONS_FILE,
    MALFUNCTIONS_FILE,
    SCENARIOS_FILE,
    HAZARDS_FILE,
    SAFE_EVENTS_FILE,
];

/// File name to file contents. `asil_table.csv` is optional; the shipped
/// table is used when it is absent.
pub type HaraSources = BTreeMap<String, String>;

/// Reads and parses a HARA directory.
pub fn parse_hara(root: &Path) -> Result<HaraModel, Vec<Diagnostic>> {
    let mut sources = HaraSources::new();
    let mut diags = Vec::new();
    for name in HARA_FILES.iter().copied().chain([RATING_TABLE_FILE]) {
        let path = root.join(name);
        match fs::read_to_string(&path) {
            Ok(text) => {
                sources.insert(name.to_string(), text);
            }
            Err(_) if name == RATING_TABLE_FILE && !path.exists() => {}
            Err(e) => diags.push(
                Diagnostic::error("HAR001", format!("cannot read {}: {e}", path.display()))
                    .at(Locus::File(name.to_string())),
            ),
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    parse_hara_sources(&sources)
}

struct Row {
    line: usize,
    fields: HashMap<String, String>,
}

impl Row {
    fn get(&self, column: &str) -> &str {
        self.fields.get(column).map_or("", |v| v.as_str())
    }
}

struct Reader<'a> {
    sources: &'a HaraSources,
    diags: Vec<Diagnostic>,
}

impl Reader<'_> {
    fn row_locus(file: &str, line: usize) -> Locus {
        Locus::Row {
            file: file.to_string(),
            row: line,
        }
    }

    fn error(&mut self, code: &'static str, file: &str, line: usize, message: String) {
        self.diags
            .push(Diagnostic::error(code, message).at(Self::row_locus(file, line)));
    }

    /// Reads `file`, checking the header against the required, optional and
    /// forbidden column lists.
    fn table(
        &mut self,
        file: &str,
        required: &[&str],
        optional: &[&str],
        forbidden: &[&str],
    ) -> Vec<Row> {
        let Some(text) = self.sources.get(file) else {
            self.diags.push(
                Diagnostic::error("HAR001", format!("missing file {file}"))
                    .at(Locus::File(file.to_string())),
            );
            return Vec::new();
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = match reader.headers() {
            Ok(h) => h.iter().map(|s| s.trim().to_string()).collect(),
            Err(e) => {
                self.error("HAR009", file, 1, e.to_string());
                return Vec::new();
            }
        };
        let mut header_ok = true;
        for column in required {
            if !headers.iter().any(|h| h == column) {
                self.error("HAR002", file, 1, format!("missing column '{column}'"));
                header_ok = false;
            }
        }
        let mut seen = HashSet::new();
        for h in &headers {
            if !seen.insert(h) {
                self.error("HAR002", file, 1, format!("duplicate column '{h}'"));
                header_ok = false;
            } else if forbidden.contains(&h.as_str()) {
                self.error(
                    "HAR008",
                    file,
                    1,
                    format!("column '{h}' is not allowed: safe events carry no risk assessment"),
                );
                header_ok = false;
            } else if !required.contains(&h.as_str()) && !optional.contains(&h.as_str()) {
                self.error("HAR002", file, 1, format!("unexpected column '{h}'"));
                header_ok = false;
            }
        }
        if !header_ok {
            return Vec::new();
        }

        let mut rows = Vec::new();
        for record in reader.records() {
            match record {
                Ok(record) => {
                    let line = record.position().map_or(0, |p| p.line() as usize);
                    let fields = headers
                        .iter()
                        .cloned()
                        .zip(record.iter().map(|v| v.trim().to_string()))
                        .collect();
                    rows.push(Row { line, fields });
                }
                Err(e) => {
                    let line = e.position().map_or(0, |p| p.line() as usize);
                    self.error("HAR009", file, line, e.to_string());
                }
            }
        }
        rows
    }

    fn id(
        &mut self,
        file: &str,
        row: &Row,
        column: &str,
        prefix: &str,
        seen: &mut HashSet<String>,
    ) -> Option<String> {
        let id = row.get(column);
        if !is_hara_id(id, prefix) {
            self.error(
                "HAR006",
                file,
                row.line,
                format!("'{id}' is not a valid {prefix}<n> id"),
            );
            return None;
        }
        if !seen.insert(id.to_string()) {
            self.error("HAR003", file, row.line, format!("duplicate id '{id}'"));
            return None;
        }
        Some(id.to_string())
    }

    fn text(&mut self, file: &str, row: &Row, column: &str) -> String {
        let value = row.get(column);
        if value.is_empty() {
            self.error(
                "HAR006",
                file,
                row.line,
                format!("column '{column}' is empty"),
            );
        }
        value.to_string()
    }

    fn reference(
        &mut self,
        file: &str,
        row: &Row,
        column: &str,
        known: &HashSet<String>,
    ) -> String {
        let value = row.get(column);
        if !known.contains(value) {
            self.error(
                "HAR004",
                file,
                row.line,
                format!("{column} '{value}' does not resolve"),
            );
        }
        value.to_string()
    }
}

/// Parses a HARA from in-memory file contents.
///
/// Ratings are recomputed from severity, exposure and controllability; a
/// non-empty `rating` column must agree with the recomputed value.
pub fn parse_hara_sources(sources: &HaraSources) -> Result<HaraModel, Vec<Diagnostic>> {
    let mut r = Reader {
        sources,
        diags: Vec::new(),
    };

    let table = match sources.get(RATING_TABLE_FILE) {
        Some(text) => RatingTable::parse_csv(text)?,
        None => RatingTable::builtin().clone(),
    };

    let mut model = HaraModel::default();

    let meta = r.table(META_FILE, &["key", "value"], &[], &[]);
    let (mut name, mut definition) = (None, None);
    for row in &meta {
        let value = row.get("value").to_string();
        let slot = match row.get("key") {
            "system_name" => &mut name,
            "definition" => &mut definition,
            "assumption" => {
                if value.is_empty() {
                    r.error("HAR006", META_FILE, row.line, "assumption is empty".into());
                }
                model.assumptions.push(value);
                continue;
            }
            other => {
                r.error(
                    "HAR006",
                    META_FILE,
                    row.line,
                    format!("unknown key '{other}'"),
                );
                continue;
            }
        };
        if value.is_empty() {
            r.error(
                "HAR006",
                META_FILE,
                row.line,
                format!("'{}' is empty", row.get("key")),
            );
        }
        if slot.replace(value).is_some() {
            r.error(
                "HAR003",
                META_FILE,
                row.line,
                format!("key '{}' given twice", row.get("key")),
            );
        }
    }
    if sources.contains_key(META_FILE) {
        for (key, value) in [("system_name", &name), ("definition", &definition)] {
            if value.is_none() {
                r.diags.push(
                    Diagnostic::error("HAR007", format!("required key '{key}' is missing"))
                        .at(Locus::File(META_FILE.into())),
                );
            }
        }
    }
    model.system_name = name.unwrap_or_default();
    model.definition = definition.unwrap_or_default();

    let mut ids = HashSet::new();
    for row in r.table(FUNCTIONS_FILE, &["id", "description"], &[], &[]) {
        if let Some(id) = r.id(FUNCTIONS_FILE, &row, "id", "SF", &mut ids) {
            let description = r.text(FUNCTIONS_FILE, &row, "description");
            model.functions.push(SystemFunction { id, description });
        }
    }
    let functions = ids;

    let mut ids = HashSet::new();
    for row in r.table(
        MALFUNCTIONS_FILE,
        &["id", "function_id", "description"],
        &[],
        &[],
    ) {
        if let Some(id) = r.id(MALFUNCTIONS_FILE, &row, "id", "MF", &mut ids) {
            let function_id = r.reference(MALFUNCTIONS_FILE, &row, "function_id", &functions);
            let description = r.text(MALFUNCTIONS_FILE, &row, "description");
            model.malfunctions.push(Malfunction {
                id,
                function_id,
                description,
            });
        }
    }
    let malfunctions = ids;

    let mut ids = HashSet::new();
    for row in r.table(SCENARIOS_FILE, &["id", "description"], &[], &[]) {
        if let Some(id) = r.id(SCENARIOS_FILE, &row, "id", "OS", &mut ids) {
            let description = r.text(SCENARIOS_FILE, &row, "description");
            model
                .scenarios
                .push(OperationalScenario { id, description });
        }
    }
    let scenarios = ids;

    let mut ids = HashSet::new();
    let mut goals: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for row in r.table(
        HAZARDS_FILE,
        &[
            "id",
            "malfunction_id",
            "scenario_id",
            "effect",
            "severity",
            "exposure",
            "controllability",
        ],
        &["rating", "safety_goal_id", "safety_goal_statement"],
        &[],
    ) {
        let Some(id) = r.id(HAZARDS_FILE, &row, "id", "HE", &mut ids) else {
            continue;
        };
        let malfunction_id = r.reference(HAZARDS_FILE, &row, "malfunction_id", &malfunctions);
        let scenario_id = r.reference(HAZARDS_FILE, &row, "scenario_id", &scenarios);
        let effect = r.text(HAZARDS_FILE, &row, "effect");
        let classes = (
            row.get("severity").parse::<Severity>(),
            row.get("exposure").parse::<Exposure>(),
            row.get("controllability").parse::<Controllability>(),
        );
        let (s, e, c) = match classes {
            (Ok(s), Ok(e), Ok(c)) => (s, e, c),
            (s, e, c) => {
                for message in [s.err(), e.err(), c.err()].into_iter().flatten() {
                    r.error("HAR006", HAZARDS_FILE, row.line, message);
                }
                continue;
            }
        };
        let rating = table.rating(s, e, c);
        let stated = row.get("rating");
        if !stated.is_empty() {
            match stated.parse::<Rating>() {
                Ok(given) if given == rating => {}
                Ok(given) => r.error(
                    "HAR005",
                    HAZARDS_FILE,
                    row.line,
                    format!("rating {given} given for ({s}, {e}, {c}), the table says {rating}"),
                ),
                Err(message) => r.error("HAR006", HAZARDS_FILE, row.line, message),
            }
        }
        let goal_id = row.get("safety_goal_id");
        let goal_statement = row.get("safety_goal_statement");
        let safety_goal_id = if goal_id.is_empty() {
            if !goal_statement.is_empty() {
                r.error(
                    "HAR006",
                    HAZARDS_FILE,
                    row.line,
                    "safety_goal_statement given without safety_goal_id".into(),
                );
            }
            None
        } else if !is_hara_id(goal_id, "SG") {
            r.error(
                "HAR006",
                HAZARDS_FILE,
                row.line,
                format!("'{goal_id}' is not a valid SG<n> id"),
            );
            None
        } else {
            match goals.get(goal_id) {
                Some((known, _)) if !goal_statement.is_empty() && known != goal_statement => r
                    .error(
                        "HAR010",
                        HAZARDS_FILE,
                        row.line,
                        format!("safety goal {goal_id} is stated differently on another row"),
                    ),
                Some(_) => {}
                None if goal_statement.is_empty() => r.error(
                    "HAR006",
                    HAZARDS_FILE,
                    row.line,
                    format!("first mention of safety goal {goal_id} has no statement"),
                ),
                None => {
                    goals.insert(goal_id.to_string(), (goal_statement.to_string(), row.line));
                }
            }
            Some(goal_id.to_string())
        };
        model.hazardous_events.push(HazardousEvent {
            id,
            malfunction_id,
            scenario_id,
            effect,
            risk: RiskAssessment {
                severity: s,
                exposure: e,
                controllability: c,
                rating,
            },
            safety_goal_id,
        });
    }

    let mut goal_list: Vec<SafetyGoal> = goals
        .into_iter()
        .map(|(id, (statement, _))| SafetyGoal {
            id,
            statement,
            priority: Rating::QM,
        })
        .collect();
    goal_list.sort_by(|a, b| compare_ids(&a.id, &b.id));
    model.safety_goals = goal_list;
    model.refresh_goal_priorities();

    let mut ids = HashSet::new();
    for row in r.table(
        SAFE_EVENTS_FILE,
        &["id", "instruction", "scenario_id", "expected_outcome"],
        &[],
        &["severity", "exposure", "controllability", "rating"],
    ) {
        if let Some(id) = r.id(SAFE_EVENTS_FILE, &row, "id", "SE", &mut ids) {
            let instruction = r.text(SAFE_EVENTS_FILE, &row, "instruction");
            let scenario_id = r.reference(SAFE_EVENTS_FILE, &row, "scenario_id", &scenarios);
            let expected_outcome = r.text(SAFE_EVENTS_FILE, &row, "expected_outcome");
            model.safe_events.push(SafeEvent {
                id,
                instruction,
                scenario_id,
                expected_outcome,
            });
        }
    }

    if r.diags.is_empty() {
        Ok(model)
    } else {
        sort_diagnostics(&mut r.diags);
        Err(r.diags)
    }
}
