/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef RAISE_FORGE_H
#define RAISE_FORGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RfFormat {
  /**
   * Canonical exchange JSON.
   */
  RF_FORMAT_EXCHANGE = 0,
  /**
   * GraphViz DOT.
   */
  RF_FORMAT_DOT = 1,
} RfFormat;

typedef enum RfRating {
  RF_RATING_QM = 0,
  RF_RATING_A = 1,
  RF_RATING_B = 2,
  RF_RATING_C = 3,
  RF_RATING_D = 4,
} RfRating;

/**
 * Result of every fallible call.
 */
typedef enum RfStatus {
  RF_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  RF_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  RF_STATUS_INVALID_UTF8 = 2,
  /**
   * A file or directory could not be read.
   */
  RF_STATUS_IO = 3,
  /**
   * An input document could not be parsed or failed validation.
   */
  RF_STATUS_INVALID_INPUT = 4,
  /**
   * The safety case could not be built.
   */
  RF_STATUS_BUILD_FAILED = 5,
  /**
   * An argument was out of range or unrecognized.
   */
  RF_STATUS_INVALID_ARGUMENT = 6,
  /**
   * The library panicked; this is a bug.
   */
  RF_STATUS_INTERNAL = 7,
} RfStatus;

/**
 * A safety case and the system name it is about.
 */
typedef struct RfCase RfCase;

/**
 * A parsed HARA model.
 */
typedef struct RfHara RfHara;

/**
 * A pattern library.
 */
typedef struct RfLibrary RfLibrary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *rf_version(void);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *rf_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void rf_string_free(char *s);

/**
 * Rating for severity 0..3, exposure 0..4, controllability 0..3.
 *
 * # Safety
 * `out` must be null or point to writable storage.
 */
enum RfStatus rf_risk_rating(uint8_t severity,
                             uint8_t exposure,
                             uint8_t controllability,
                             enum RfRating *out);

/**
 * Parses the HARA directory at `dir`.
 *
 * # Safety
 * `dir` must be a NUL-terminated string; `out` must be writable.
 */
enum RfStatus rf_hara_load(const char *dir, struct RfHara **out);

/**
 * # Safety
 * `hara` must be null or a handle from `rf_hara_load`, freed once.
 */
void rf_hara_free(struct RfHara *hara);

/**
 * Validates the model at `threshold` ("QM", "A".."D" or "none"; null
 * means the default C). Writes the diagnostics as JSON to `out_json`
 * and the number of errors to `out_errors` (may be null).
 *
 * # Safety
 * Pointers must be valid as described; `hara` must be a live handle.
 */
enum RfStatus rf_hara_validate(const struct RfHara *hara,
                               const char *threshold,
                               char **out_json,
                               size_t *out_errors);

/**
 * The built-in RI and AAI patterns.
 *
 * # Safety
 * `out` must be writable.
 */
enum RfStatus rf_library_builtin(struct RfLibrary **out);

/**
 * Every `*.pattern` file in `dir`.
 *
 * # Safety
 * `dir` must be a NUL-terminated string; `out` must be writable.
 */
enum RfStatus rf_library_load_dir(const char *dir, struct RfLibrary **out);

/**
 * # Safety
 * `library` must be null or a library handle, freed once.
 */
void rf_library_free(struct RfLibrary *library);

/**
 * Parses and lints pattern source of `len` bytes. Writes a JSON array of
 * diagnostics: parse errors carry `line` and `column`, lint findings use
 * the usual diagnostic shape. `out_ok` (may be null) is set when there
 * are no errors.
 *
 * # Safety
 * `source` must point to `len` readable bytes; `out_json` must be writable.
 */
enum RfStatus rf_pattern_lint(const uint8_t *source, size_t len, char **out_json, bool *out_ok);

/**
 * Builds the safety case. `config_json` is a build configuration object
 * (null for defaults from the HARA). `out_pass` (may be null) receives
 * the coverage verdict.
 *
 * # Safety
 * Handles must be live; `out_case` must be writable.
 */
enum RfStatus rf_build(const struct RfHara *hara,
                       const struct RfLibrary *library,
                       const char *config_json,
                       struct RfCase **out_case,
                       bool *out_pass);

/**
 * Loads an exchange document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_case` must be writable.
 */
enum RfStatus rf_case_load(const char *json, struct RfCase **out_case);

/**
 * # Safety
 * `case` must be null or a case handle, freed once.
 */
void rf_case_free(struct RfCase *case_);

/**
 * Number of nodes in the case, or 0 for null.
 *
 * # Safety
 * `case` must be null or a live handle.
 */
size_t rf_case_node_count(const struct RfCase *case_);

/**
 * Serializes the case.
 *
 * # Safety
 * `case` must be live; `out` must be writable.
 */
enum RfStatus rf_case_emit(const struct RfCase *case_, enum RfFormat format, char **out);

/**
 * GSN diagnostics for the case as JSON; `out_errors` (may be null)
 * receives the error count.
 *
 * # Safety
 * `case` must be live; `out_json` must be writable.
 */
enum RfStatus rf_case_validate(const struct RfCase *case_, char **out_json, size_t *out_errors);

/**
 * Checks the case's coverage of the HARA and writes the Markdown report
 * to `out_report` (may be null) and the verdict to `out_pass`.
 *
 * # Safety
 * Handles must be live; `out_pass` must be writable.
 */
enum RfStatus rf_case_coverage(const struct RfCase *case_,
                               const struct RfHara *hara,
                               const char *config_json,
                               bool *out_pass,
                               char **out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAISE_FORGE_H */
