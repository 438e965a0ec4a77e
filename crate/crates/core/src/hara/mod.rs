//! Extended HARA: system definition, functions, malfunctions, operational
//! scenarios, rated hazardous events with safety goals, and safe events.

mod ingest;
mod rating;
mod validate;

use std::cmp::Ordering;

pub use ingest::{parse_hara, parse_hara_sources, HaraSources, HARA_FILES};
pub use rating::{
    risk_rating, Controllability, Exposure, Rating, RatingTable, RiskAssessment, Severity,
    Threshold, BUILTIN_RATING_TABLE, RATING_TABLE_FILE,
};
pub use validate::{top_priority_hazards, validate_hara};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemFunction {
    pub id: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Malfunction {
    pub id: String,
    pub function_id: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationalScenario {
    pub id: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HazardousEvent {
    pub id: String,
    pub malfunction_id: String,
    pub scenario_id: String,
    pub effect: String,
    pub risk: RiskAssessment,
    pub safety_goal_id: Option<String>,
}

/// A safe instruction, its scenario and expected outcome. Carries no risk
/// assessment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafeEvent {
    pub id: String,
    pub instruction: String,
    pub scenario_id: String,
    pub expected_outcome: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyGoal {
    pub id: String,
    pub statement: String,
    /// Rating of the worst hazardous event linked to this goal.
    pub priority: Rating,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HaraModel {
    pub system_name: String,
    pub definition: String,
    pub assumptions: Vec<String>,
    pub functions: Vec<SystemFunction>,
    pub malfunctions: Vec<Malfunction>,
    pub scenarios: Vec<OperationalScenario>,
    pub hazardous_events: Vec<HazardousEvent>,
    pub safe_events: Vec<SafeEvent>,
    pub safety_goals: Vec<SafetyGoal>,
}

impl HaraModel {
    pub fn scenario(&self, id: &str) -> Option<&OperationalScenario> {
        self.scenarios.iter().find(|s| s.id == id)
    }

    pub fn hazardous_event(&self, id: &str) -> Option<&HazardousEvent> {
        self.hazardous_events.iter().find(|e| e.id == id)
    }

    pub fn safe_event(&self, id: &str) -> Option<&SafeEvent> {
        self.safe_events.iter().find(|e| e.id == id)
    }

    pub fn safety_goal(&self, id: &str) -> Option<&SafetyGoal> {
        self.safety_goals.iter().find(|g| g.id == id)
    }

    /// Recomputes every safety goal's priority from its linked events.
    pub fn refresh_goal_priorities(&mut self) {
        for goal in &mut self.safety_goals {
            if let Some(worst) = self
                .hazardous_events
                .iter()
                .filter(|e| e.safety_goal_id.as_deref() == Some(goal.id.as_str()))
                .map(|e| e.risk.rating)
                .max()
            {
                goal.priority = worst;
            }
        }
    }
}

/// Splits `OS12` into `("OS", Some(12))`.
fn split_id(id: &str) -> (&str, Option<u64>) {
    let digits = id.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    let prefix = &id[..id.len() - digits.len()];
    (prefix, digits.parse().ok())
}

/// Orders HARA ids by prefix, then numerically (`OS2` before `OS10`).
pub fn compare_ids(a: &str, b: &str) -> Ordering {
    let (pa, na) = split_id(a);
    let (pb, nb) = split_id(b);
    pa.cmp(pb).then(na.cmp(&nb)).then_with(|| a.cmp(b))
}

/// Whether `id` is `prefix` followed by one or more digits.
pub fn is_hara_id(id: &str, prefix: &str) -> bool {
    id.strip_prefix(prefix)
        .is_some_and(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
}
