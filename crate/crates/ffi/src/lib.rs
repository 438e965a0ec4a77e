//! C ABI for raise-forge.
//!
//! Objects cross the boundary as opaque handles (`RfHara`, `RfLibrary`,
//! `RfCase`) that the caller releases with the matching `*_free`. Every
//! fallible function returns an `RfStatus`; on failure the message is
//! available from `rf_last_error_message` on the same thread. Strings
//! returned through out-parameters are owned by the caller and released
//! with `rf_string_free`. Diagnostics are returned as JSON arrays of
//! `{"severity", "code", "message", "locus"}` objects.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use raise_forge::builder::{build_safety_case, coverage_check, BuildConfig, ConfigFile, Verdict};
use raise_forge::diag::{has_errors, Diagnostic};
use raise_forge::emit::{emit_dot, emit_exchange, emit_report, load_exchange_document};
use raise_forge::gsn::{validate_graph, ArgumentGraph};
use raise_forge::hara::{
    parse_hara, risk_rating, validate_hara, Controllability, Exposure, HaraModel, Rating, Severity,
    Threshold,
};
use raise_forge::pattern::{
    builtin_library, parse_pattern_bytes, validate_pattern, PatternLibrary,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A file or directory could not be read.
    Io = 3,
    /// An input document could not be parsed or failed validation.
    InvalidInput = 4,
    /// The safety case could not be built.
    BuildFailed = 5,
    /// An argument was out of range or unrecognized.
    InvalidArgument = 6,
    /// The library panicked; this is a bug.
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfRating {
    Qm = 0,
    A = 1,
    B = 2,
    C = 3,
    D = 4,
}

impl From<Rating> for RfRating {
    fn from(r: Rating) -> Self {
        match r {
            Rating::QM => RfRating::Qm,
            Rating::A => RfRating::A,
            Rating::B => RfRating::B,
            Rating::C => RfRating::C,
            Rating::D => RfRating::D,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfFormat {
    /// Canonical exchange JSON.
    Exchange = 0,
    /// GraphViz DOT.
    Dot = 1,
}

/// A parsed HARA model.
pub struct RfHara {
    model: HaraModel,
}

/// A pattern library.
pub struct RfLibrary {
    library: PatternLibrary,
}

/// A safety case and the system name it is about.
pub struct RfCase {
    graph: ArgumentGraph,
    system_name: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(RfStatus, String);

type FfiResult<T> = Result<T, Failure>;

fn fail<T>(status: RfStatus, message: impl Into<String>) -> FfiResult<T> {
    Err(Failure(status, message.into()))
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording the failure message and turning panics into
/// `RfStatus::Internal`.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> RfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RfStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal error: the library panicked".into());
            RfStatus::Internal
        }
    }
}

fn non_null<'a, T>(p: *const T, name: &str) -> FfiResult<&'a T> {
    // SAFETY: the caller guarantees `p` is null or points to a live value.
    unsafe { p.as_ref() }.ok_or_else(|| Failure(RfStatus::NullArgument, format!("{name} is null")))
}

fn out_ptr<'a, T>(p: *mut T, name: &str) -> FfiResult<&'a mut T> {
    // SAFETY: the caller guarantees `p` is null or points to writable storage.
    unsafe { p.as_mut() }.ok_or_else(|| Failure(RfStatus::NullArgument, format!("{name} is null")))
}

fn text<'a>(p: *const c_char, name: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return fail(RfStatus::NullArgument, format!("{name} is null"));
    }
    // SAFETY: non-null, and the caller guarantees a NUL-terminated string.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure(RfStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

fn optional_text<'a>(p: *const c_char, name: &str) -> FfiResult<Option<&'a str>> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, name).map(Some)
    }
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw()
}

fn diagnostics_json(diags: &[Diagnostic]) -> String {
    serde_json::to_string(diags).expect("diagnostics serialize")
}

fn summarize(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .filter(|d| d.is_error())
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn config(hara: &HaraModel, json: Option<&str>) -> FfiResult<BuildConfig> {
    let mut cfg = BuildConfig::from_hara(hara);
    if let Some(json) = json {
        let file = ConfigFile::parse(json)
            .map_err(|e| Failure(RfStatus::InvalidArgument, e.to_string()))?;
        cfg.apply(file)
            .map_err(|e| Failure(RfStatus::InvalidArgument, e.to_string()))?;
    }
    Ok(cfg)
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn rf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Rating for severity 0..3, exposure 0..4, controllability 0..3.
///
/// # Safety
/// `out` must be null or point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn rf_risk_rating(
    severity: u8,
    exposure: u8,
    controllability: u8,
    out: *mut RfRating,
) -> RfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let (Some(s), Some(e), Some(c)) = (
            Severity::new(severity),
            Exposure::new(exposure),
            Controllability::new(controllability),
        ) else {
            return fail(
                RfStatus::InvalidArgument,
                format!("class out of range: S{severity} E{exposure} C{controllability}"),
            );
        };
        *out = risk_rating(s, e, c).into();
        Ok(())
    })
}

/// Parses the HARA directory at `dir`.
///
/// # Safety
/// `dir` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_hara_load(dir: *const c_char, out: *mut *mut RfHara) -> RfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let dir = text(dir, "dir")?;
        let model = parse_hara(Path::new(dir)).map_err(|diags| {
            let io = diags.iter().any(|d| d.code == "HAR001");
            let status = if io {
                RfStatus::Io
            } else {
                RfStatus::InvalidInput
            };
            Failure(status, summarize(&diags))
        })?;
        *out = Box::into_raw(Box::new(RfHara { model }));
        Ok(())
    })
}

/// # Safety
/// `hara` must be null or a handle from `rf_hara_load`, freed once.
#[no_mangle]
pub unsafe extern "C" fn rf_hara_free(hara: *mut RfHara) {
    if !hara.is_null() {
        drop(Box::from_raw(hara));
    }
}

/// Validates the model at `threshold` ("QM", "A".."D" or "none"; null
/// means the default C). Writes the diagnostics as JSON to `out_json`
/// and the number of errors to `out_errors` (may be null).
///
/// # Safety
/// Pointers must be valid as described; `hara` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_hara_validate(
    hara: *const RfHara,
    threshold: *const c_char,
    out_json: *mut *mut c_char,
    out_errors: *mut usize,
) -> RfStatus {
    guard(|| {
        let hara = non_null(hara, "hara")?;
        let out_json = out_ptr(out_json, "out_json")?;
        let threshold = match optional_text(threshold, "threshold")? {
            None => Threshold::default(),
            Some(t) => t
                .parse()
                .map_err(|e: String| Failure(RfStatus::InvalidArgument, e))?,
        };
        let diags = validate_hara(&hara.model, threshold);
        if let Some(n) = out_errors.as_mut() {
            *n = diags.iter().filter(|d| d.is_error()).count();
        }
        *out_json = to_c(diagnostics_json(&diags));
        Ok(())
    })
}

/// The built-in RI and AAI patterns.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_library_builtin(out: *mut *mut RfLibrary) -> RfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(RfLibrary {
            library: builtin_library(),
        }));
        Ok(())
    })
}

/// Every `*.pattern` file in `dir`.
///
/// # Safety
/// `dir` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_library_load_dir(
    dir: *const c_char,
    out: *mut *mut RfLibrary,
) -> RfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let dir = text(dir, "dir")?;
        let library = PatternLibrary::load_dir(Path::new(dir)).map_err(|e| {
            let status = match e {
                raise_forge::pattern::LibraryError::Io { .. } => RfStatus::Io,
                _ => RfStatus::InvalidInput,
            };
            Failure(status, e.to_string())
        })?;
        *out = Box::into_raw(Box::new(RfLibrary { library }));
        Ok(())
    })
}

/// # Safety
/// `library` must be null or a library handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn rf_library_free(library: *mut RfLibrary) {
    if !library.is_null() {
        drop(Box::from_raw(library));
    }
}

/// Parses and lints pattern source of `len` bytes. Writes a JSON array of
/// diagnostics: parse errors carry `line` and `column`, lint findings use
/// the usual diagnostic shape. `out_ok` (may be null) is set when there
/// are no errors.
///
/// # Safety
/// `source` must point to `len` readable bytes; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_pattern_lint(
    source: *const u8,
    len: usize,
    out_json: *mut *mut c_char,
    out_ok: *mut bool,
) -> RfStatus {
    guard(|| {
        let out_json = out_ptr(out_json, "out_json")?;
        let bytes: &[u8] = if len == 0 {
            &[]
        } else {
            non_null(source, "source")?;
            std::slice::from_raw_parts(source, len)
        };
        let (json, ok) = match parse_pattern_bytes(bytes) {
            Err(diags) => {
                let list: Vec<_> = diags
                    .iter()
                    .map(|d| {
                        serde_json::json!({
                            "severity": "Error",
                            "code": "PARSE",
                            "message": d.message,
                            "line": d.line,
                            "column": d.column,
                        })
                    })
                    .collect();
                (serde_json::Value::Array(list).to_string(), false)
            }
            Ok(pattern) => {
                let diags = validate_pattern(&pattern);
                (diagnostics_json(&diags), !has_errors(&diags))
            }
        };
        if let Some(ok_out) = out_ok.as_mut() {
            *ok_out = ok;
        }
        *out_json = to_c(json);
        Ok(())
    })
}

/// Builds the safety case. `config_json` is a build configuration object
/// (null for defaults from the HARA). `out_pass` (may be null) receives
/// the coverage verdict.
///
/// # Safety
/// Handles must be live; `out_case` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_build(
    hara: *const RfHara,
    library: *const RfLibrary,
    config_json: *const c_char,
    out_case: *mut *mut RfCase,
    out_pass: *mut bool,
) -> RfStatus {
    guard(|| {
        let out_case = out_ptr(out_case, "out_case")?;
        *out_case = ptr::null_mut();
        let hara = non_null(hara, "hara")?;
        let library = non_null(library, "library")?;
        let cfg = config(&hara.model, optional_text(config_json, "config_json")?)?;
        let (graph, report) = build_safety_case(&cfg, &hara.model, &library.library)
            .map_err(|e| Failure(RfStatus::BuildFailed, e.to_string()))?;
        if let Some(pass) = out_pass.as_mut() {
            *pass = report.verdict == Verdict::Pass;
        }
        *out_case = Box::into_raw(Box::new(RfCase {
            graph,
            system_name: cfg.system_name,
        }));
        Ok(())
    })
}

/// Loads an exchange document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_case` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_case_load(json: *const c_char, out_case: *mut *mut RfCase) -> RfStatus {
    guard(|| {
        let out_case = out_ptr(out_case, "out_case")?;
        *out_case = ptr::null_mut();
        let doc = load_exchange_document(text(json, "json")?)
            .map_err(|diags| Failure(RfStatus::InvalidInput, summarize(&diags)))?;
        *out_case = Box::into_raw(Box::new(RfCase {
            graph: doc.graph,
            system_name: doc.system_name,
        }));
        Ok(())
    })
}

/// # Safety
/// `case` must be null or a case handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn rf_case_free(case: *mut RfCase) {
    if !case.is_null() {
        drop(Box::from_raw(case));
    }
}

/// Number of nodes in the case, or 0 for null.
///
/// # Safety
/// `case` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_case_node_count(case: *const RfCase) -> usize {
    case.as_ref().map_or(0, |c| c.graph.nodes().len())
}

/// Serializes the case.
///
/// # Safety
/// `case` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_case_emit(
    case: *const RfCase,
    format: RfFormat,
    out: *mut *mut c_char,
) -> RfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let case = non_null(case, "case")?;
        let rendered = match format {
            RfFormat::Exchange => emit_exchange(&case.graph, &case.system_name)
                .map_err(|e| Failure(RfStatus::InvalidInput, e.to_string()))?,
            RfFormat::Dot => emit_dot(&case.graph),
        };
        *out = to_c(rendered);
        Ok(())
    })
}

/// GSN diagnostics for the case as JSON; `out_errors` (may be null)
/// receives the error count.
///
/// # Safety
/// `case` must be live; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_case_validate(
    case: *const RfCase,
    out_json: *mut *mut c_char,
    out_errors: *mut usize,
) -> RfStatus {
    guard(|| {
        let out_json = out_ptr(out_json, "out_json")?;
        let case = non_null(case, "case")?;
        let diags = validate_graph(&case.graph);
        if let Some(n) = out_errors.as_mut() {
            *n = diags.iter().filter(|d| d.is_error()).count();
        }
        *out_json = to_c(diagnostics_json(&diags));
        Ok(())
    })
}

/// Checks the case's coverage of the HARA and writes the Markdown report
/// to `out_report` (may be null) and the verdict to `out_pass`.
///
/// # Safety
/// Handles must be live; `out_pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_case_coverage(
    case: *const RfCase,
    hara: *const RfHara,
    config_json: *const c_char,
    out_pass: *mut bool,
    out_report: *mut *mut c_char,
) -> RfStatus {
    guard(|| {
        let out_pass = out_ptr(out_pass, "out_pass")?;
        let case = non_null(case, "case")?;
        let hara = non_null(hara, "hara")?;
        let cfg = config(&hara.model, optional_text(config_json, "config_json")?)?;
        let report = coverage_check(&case.graph, &hara.model, &cfg);
        *out_pass = report.verdict == Verdict::Pass;
        if let Some(out) = out_report.as_mut() {
            *out = to_c(emit_report(&case.graph, &hara.model, &report));
        }
        Ok(())
    })
}
