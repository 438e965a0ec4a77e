//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or coverage failure, 2 usage or I/O
//! error. Diagnostics go to the error stream, artifacts to files or the
//! output stream.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::builder::{build_safety_case, coverage_check, BuildConfig, ConfigFile, CoverageReport};
use crate::diag::{count_by_severity, has_errors, Diagnostic};
use crate::emit::{emit_dot, emit_exchange, emit_report, load_exchange_document, Exchange};
use crate::gsn::validate_graph;
use crate::hara::{parse_hara, validate_hara, HaraModel, Threshold};
use crate::pattern::{
    builtin_library, parse_pattern_bytes, validate_pattern, LibraryError, PatternLibrary,
};
use crate::scaffold::scaffold;

pub const EXCHANGE_FILE: &str = "case.gsn.json";
pub const DOT_FILE: &str = "case.dot";
pub const REPORT_FILE: &str = "report.md";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Failure = 1,
    Usage = 2,
}

impl From<ExitCode> for std::process::ExitCode {
    fn from(code: ExitCode) -> Self {
        std::process::ExitCode::from(code as u8)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "raise-forge",
    version,
    about = "Build and check GSN safety cases from an extended HARA"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the SimLingo example project into an empty directory
    Init { dir: PathBuf },
    /// HARA commands
    Hara {
        #[command(subcommand)]
        command: HaraCommand,
    },
    /// Pattern commands
    Pattern {
        #[command(subcommand)]
        command: PatternCommand,
    },
    /// Build the safety case and check its coverage
    Build(BuildArgs),
    /// Re-check an exchange file against a HARA directory
    Coverage(CoverageArgs),
    /// Render an exchange file as GraphViz DOT
    Render {
        case: PathBuf,
        /// Output file; standard output when absent
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an exchange file for well-formedness
    Validate { case: PathBuf },
}

#[derive(Subcommand, Debug)]
enum HaraCommand {
    /// Parse and validate a HARA directory
    Check {
        dir: PathBuf,
        #[arg(long, value_parser = parse_threshold)]
        threshold: Option<Threshold>,
    },
}

#[derive(Subcommand, Debug)]
enum PatternCommand {
    /// Parse and check pattern files
    Lint {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// HARA directory
    #[arg(long)]
    hara: PathBuf,
    /// Build configuration (JSON)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Minimum rating of a top-priority hazardous event
    #[arg(long, value_parser = parse_threshold)]
    threshold: Option<Threshold>,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Pattern directory; the built-in patterns when absent
    #[arg(long)]
    patterns: Option<PathBuf>,
    /// Output directory; standard output when absent
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Artifacts to produce; `all` when writing to a directory, `json` otherwise
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct CoverageArgs {
    case: PathBuf,
    #[command(flatten)]
    source: SourceArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Md,
    All,
}

fn parse_threshold(s: &str) -> Result<Threshold, String> {
    s.parse()
}

struct Fail {
    code: ExitCode,
    lines: Vec<String>,
}

impl Fail {
    fn usage(line: impl Into<String>) -> Self {
        Fail {
            code: ExitCode::Usage,
            lines: vec![line.into()],
        }
    }

    fn failure(lines: Vec<String>) -> Self {
        Fail {
            code: ExitCode::Failure,
            lines,
        }
    }

    fn diagnostics(code: ExitCode, diags: &[Diagnostic]) -> Self {
        Fail {
            code,
            lines: diags.iter().map(ToString::to_string).collect(),
        }
    }
}

type CmdResult = Result<ExitCode, Fail>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn note(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.err, "{}", line.as_ref());
    }

    fn print(&mut self, text: &str) -> Result<(), Fail> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| Fail::usage(format!("cannot write output: {e}")))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                ExitCode::Usage
            } else {
                let _ = write!(out, "{text}");
                ExitCode::Success
            };
        }
    };
    let mut io = Io { out, err };
    let result = match cli.command {
        Command::Init { dir } => init(&mut io, &dir),
        Command::Hara {
            command: HaraCommand::Check { dir, threshold },
        } => hara_check(&mut io, &dir, threshold),
        Command::Pattern {
            command: PatternCommand::Lint { files },
        } => pattern_lint(&mut io, &files),
        Command::Build(args) => build(&mut io, &args),
        Command::Coverage(args) => coverage(&mut io, &args),
        Command::Render { case, output } => render(&mut io, &case, output.as_deref()),
        Command::Validate { case } => validate(&mut io, &case),
    };
    match result {
        Ok(code) => code,
        Err(fail) => {
            for line in &fail.lines {
                io.note(line);
            }
            fail.code
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path)
        .map_err(|e| Fail::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| Fail::usage(format!("cannot write {}: {e}", path.display())))
}

fn load_hara(dir: &Path) -> Result<HaraModel, Fail> {
    if !dir.is_dir() {
        return Err(Fail::usage(format!("{} is not a directory", dir.display())));
    }
    parse_hara(dir).map_err(|diags| {
        let io = diags.iter().any(|d| d.code == "HAR001");
        Fail::diagnostics(
            if io {
                ExitCode::Usage
            } else {
                ExitCode::Failure
            },
            &diags,
        )
    })
}

/// Defaults from the HARA, then the config file, then flags.
fn load_config(source: &SourceArgs, hara: &HaraModel) -> Result<BuildConfig, Fail> {
    let mut cfg = BuildConfig::from_hara(hara);
    if let Some(path) = &source.config {
        let file = ConfigFile::parse(&read(path)?)
            .map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
        cfg.apply(file)
            .map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
    }
    if let Some(threshold) = source.threshold {
        cfg.priority_threshold = threshold;
    }
    Ok(cfg)
}

fn load_case(path: &Path) -> Result<Exchange, Fail> {
    let text = read(path)?;
    load_exchange_document(&text).map_err(|diags| Fail::diagnostics(ExitCode::Failure, &diags))
}

fn print_diagnostics(io: &mut Io, diags: &[Diagnostic]) {
    for d in diags {
        io.note(d.to_string());
    }
}

fn coverage_summary(io: &mut Io, report: &CoverageReport) {
    let covered = report
        .scenario_coverage
        .iter()
        .filter(|r| r.covered)
        .count();
    io.note(format!(
        "coverage: {} ({covered}/{} scenario rows covered)",
        report.verdict,
        report.scenario_coverage.len()
    ));
    for row in report.uncovered() {
        io.note(format!("  {} {}: not covered", row.branch, row.scenario_id));
    }
    for goal in &report.unsupported_safety_goals {
        io.note(format!("  safety goal {goal}: no supporting goal node"));
    }
    for node in &report.unbound_hotspots {
        io.note(format!("  node {node}: unbound hot spot"));
    }
}

fn verdict_code(report: &CoverageReport) -> ExitCode {
    match report.verdict {
        crate::builder::Verdict::Pass => ExitCode::Success,
        crate::builder::Verdict::Fail => ExitCode::Failure,
    }
}

fn init(io: &mut Io, dir: &Path) -> CmdResult {
    match scaffold(dir) {
        Ok(files) => {
            io.note(format!("wrote {} files to {}", files.len(), dir.display()));
            Ok(ExitCode::Success)
        }
        Err(e) => Err(Fail::usage(e.to_string())),
    }
}

fn hara_check(io: &mut Io, dir: &Path, threshold: Option<Threshold>) -> CmdResult {
    let hara = load_hara(dir)?;
    let diags = validate_hara(&hara, threshold.unwrap_or_default());
    print_diagnostics(io, &diags);
    let (errors, warnings) = count_by_severity(&diags);
    io.note(format!(
        "{}: {} functions, {} scenarios, {} hazardous events, {} safe events; {errors} errors, {warnings} warnings",
        dir.display(),
        hara.functions.len(),
        hara.scenarios.len(),
        hara.hazardous_events.len(),
        hara.safe_events.len()
    ));
    Ok(if errors > 0 {
        ExitCode::Failure
    } else {
        ExitCode::Success
    })
}

fn lint_targets(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Fail> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(path)
                .map_err(|e| Fail::usage(format!("cannot read {}: {e}", path.display())))?
                .filter_map(Result::ok)
                .map(|e| e.path())
                .filter(|p| p.extension().is_some_and(|x| x == "pattern"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(path.clone());
        }
    }
    Ok(files)
}

fn pattern_lint(io: &mut Io, paths: &[PathBuf]) -> CmdResult {
    let mut failed = false;
    for path in lint_targets(paths)? {
        let bytes = fs::read(&path)
            .map_err(|e| Fail::usage(format!("cannot read {}: {e}", path.display())))?;
        match parse_pattern_bytes(&bytes) {
            Err(diags) => {
                failed = true;
                for d in diags {
                    io.note(format!("{}:{d}", path.display()));
                }
            }
            Ok(pattern) => {
                let diags = validate_pattern(&pattern);
                for d in &diags {
                    io.note(format!("{}: {d}", path.display()));
                }
                failed |= has_errors(&diags);
                if !has_errors(&diags) {
                    io.note(format!(
                        "{}: pattern {} v{} ok",
                        path.display(),
                        pattern.name,
                        pattern.version
                    ));
                }
            }
        }
    }
    Ok(if failed {
        ExitCode::Failure
    } else {
        ExitCode::Success
    })
}

fn load_library(dir: Option<&Path>) -> Result<PatternLibrary, Fail> {
    match dir {
        None => Ok(builtin_library()),
        Some(dir) => PatternLibrary::load_dir(dir).map_err(|e| match e {
            LibraryError::Io { .. } => Fail::usage(e.to_string()),
            _ => Fail::failure(vec![e.to_string()]),
        }),
    }
}

fn build(io: &mut Io, args: &BuildArgs) -> CmdResult {
    let format = match (args.format, &args.output) {
        (Some(Format::All), None) => {
            return Err(Fail::usage("--format all needs an output directory (-o)"));
        }
        (Some(f), _) => f,
        (None, Some(_)) => Format::All,
        (None, None) => Format::Json,
    };
    let hara = load_hara(&args.source.hara)?;
    let cfg = load_config(&args.source, &hara)?;
    let lib = load_library(args.patterns.as_deref())?;
    let (case, report) = build_safety_case(&cfg, &hara, &lib)
        .map_err(|e| Fail::failure(vec![format!("build failed: {e}")]))?;

    let warnings = validate_graph(&case);
    print_diagnostics(io, &warnings);
    let json =
        || emit_exchange(&case, &cfg.system_name).map_err(|e| Fail::failure(vec![e.to_string()]));
    let outputs: Vec<(&str, String)> = match format {
        Format::Json => vec![(EXCHANGE_FILE, json()?)],
        Format::Dot => vec![(DOT_FILE, emit_dot(&case))],
        Format::Md => vec![(REPORT_FILE, emit_report(&case, &hara, &report))],
        Format::All => vec![
            (EXCHANGE_FILE, json()?),
            (DOT_FILE, emit_dot(&case)),
            (REPORT_FILE, emit_report(&case, &hara, &report)),
        ],
    };
    match &args.output {
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| Fail::usage(format!("cannot create {}: {e}", dir.display())))?;
            for (name, text) in &outputs {
                write_file(&dir.join(name), text)?;
            }
            io.note(format!(
                "wrote {} to {}",
                outputs
                    .iter()
                    .map(|(n, _)| *n)
                    .collect::<Vec<_>>()
                    .join(", "),
                dir.display()
            ));
        }
        None => {
            for (_, text) in &outputs {
                io.print(text)?;
            }
        }
    }
    coverage_summary(io, &report);
    Ok(verdict_code(&report))
}

fn coverage(io: &mut Io, args: &CoverageArgs) -> CmdResult {
    let doc = load_case(&args.case)?;
    let hara = load_hara(&args.source.hara)?;
    let cfg = load_config(&args.source, &hara)?;
    let report = coverage_check(&doc.graph, &hara, &cfg);
    io.print(&emit_report(&doc.graph, &hara, &report))?;
    coverage_summary(io, &report);
    Ok(verdict_code(&report))
}

fn render(io: &mut Io, case: &Path, output: Option<&Path>) -> CmdResult {
    let doc = load_case(case)?;
    let dot = emit_dot(&doc.graph);
    match output {
        Some(path) => write_file(path, &dot)?,
        None => io.print(&dot)?,
    }
    Ok(ExitCode::Success)
}

fn validate(io: &mut Io, case: &Path) -> CmdResult {
    let doc = load_case(case)?;
    let diags = validate_graph(&doc.graph);
    print_diagnostics(io, &diags);
    let (errors, warnings) = count_by_severity(&diags);
    io.note(format!(
        "{}: {} nodes, {} edges; {errors} errors, {warnings} warnings",
        case.display(),
        doc.graph.nodes().len(),
        doc.graph.edges().len()
    ));
    Ok(if errors > 0 {
        ExitCode::Failure
    } else {
        ExitCode::Success
    })
}

/// Every subcommand path, for help-text checks.
pub fn subcommand_paths() -> Vec<Vec<String>> {
    use clap::CommandFactory;
    fn walk(cmd: &clap::Command, prefix: Vec<String>, out: &mut Vec<Vec<String>>) {
        for sub in cmd.get_subcommands() {
            let mut path = prefix.clone();
            path.push(sub.get_name().to_string());
            out.push(path.clone());
            walk(sub, path, out);
        }
    }
    let mut out = Vec::new();
    walk(&Cli::command(), Vec::new(), &mut out);
    out
}
