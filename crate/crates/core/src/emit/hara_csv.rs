use crate::hara::{HaraModel, HaraSources};

fn table<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [String; N]>) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("input was UTF-8")
}

/// Serializes the model into the six HARA files. Stated ratings are
/// written alongside the classes; the rating table itself is not.
pub fn write_hara(model: &HaraModel) -> HaraSources {
    use crate::hara::HARA_FILES;
    let [meta, functions, malfunctions, scenarios, hazards, safe_events] = HARA_FILES;
    let mut out = HaraSources::new();

    let mut meta_rows = vec![
        ["system_name".to_string(), model.system_name.clone()],
        ["definition".to_string(), model.definition.clone()],
    ];
    meta_rows.extend(
        model
            .assumptions
            .iter()
            .map(|a| ["assumption".to_string(), a.clone()]),
    );
    out.insert(meta.into(), table(["key", "value"], meta_rows));

    out.insert(
        functions.into(),
        table(
            ["id", "description"],
            model
                .functions
                .iter()
                .map(|f| [f.id.clone(), f.description.clone()]),
        ),
    );
    out.insert(
        malfunctions.into(),
        table(
            ["id", "function_id", "description"],
            model
                .malfunctions
                .iter()
                .map(|m| [m.id.clone(), m.function_id.clone(), m.description.clone()]),
        ),
    );
    out.insert(
        scenarios.into(),
        table(
            ["id", "description"],
            model
                .scenarios
                .iter()
                .map(|s| [s.id.clone(), s.description.clone()]),
        ),
    );
    out.insert(
        hazards.into(),
        table(
            [
                "id",
                "malfunction_id",
                "scenario_id",
                "effect",
                "severity",
                "exposure",
                "controllability",
                "rating",
                "safety_goal_id",
                "safety_goal_statement",
            ],
            model.hazardous_events.iter().map(|e| {
                let goal = e.safety_goal_id.clone().unwrap_or_default();
                let statement = model
                    .safety_goal(&goal)
                    .map(|g| g.statement.clone())
                    .unwrap_or_default();
                [
                    e.id.clone(),
                    e.malfunction_id.clone(),
                    e.scenario_id.clone(),
                    e.effect.clone(),
                    e.risk.severity.to_string(),
                    e.risk.exposure.to_string(),
                    e.risk.controllability.to_string(),
                    e.risk.rating.to_string(),
                    goal,
                    statement,
                ]
            }),
        ),
    );
    out.insert(
        safe_events.into(),
        table(
            ["id", "instruction", "scenario_id", "expected_outcome"],
            model.safe_events.iter().map(|e| {
                [
                    e.id.clone(),
                    e.instruction.clone(),
                    e.scenario_id.clone(),
                    e.expected_outcome.clone(),
                ]
            }),
        ),
    );
    out
}
