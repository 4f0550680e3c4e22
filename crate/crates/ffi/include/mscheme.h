/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef MSCHEME_H
#define MSCHEME_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MschStatus {
  MSCH_STATUS_OK = 0,
  MSCH_STATUS_NULL_POINTER = 1,
  MSCH_STATUS_INVALID_UTF8 = 2,
  MSCH_STATUS_PARSE_ERROR = 3,
  MSCH_STATUS_UNRESOLVED_REFERENCE = 4,
  MSCH_STATUS_VERSION_MISMATCH = 5,
  MSCH_STATUS_INVALID_DEFINITION = 6,
  MSCH_STATUS_UNKNOWN_SUITE = 7,
  MSCH_STATUS_DEGREE_BOUND = 8,
  MSCH_STATUS_UNSUPPORTED = 9,
  MSCH_STATUS_INTERNAL = 10,
} MschStatus;

/**
 * A parsed and resolved definition document.
 */
typedef struct MschDocument MschDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and resolves a definition document; `*out` receives the handle.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum MschStatus msch_document_parse(const char *text, struct MschDocument **out);

/**
 * Number of top-level declarations in the document.
 *
 * # Safety
 * `doc` must come from [`msch_document_parse`] and not be freed.
 */
enum MschStatus msch_document_len(const struct MschDocument *doc, size_t *out);

/**
 * Canonical text of the document.
 *
 * # Safety
 * `doc` must be a live handle and `out` a valid pointer.
 */
enum MschStatus msch_document_to_text(const struct MschDocument *doc, char **out);

/**
 * # Safety
 * `doc` must be null or a handle from [`msch_document_parse`], freed once.
 */
void msch_document_free(struct MschDocument *doc);

/**
 * Runs a suite and writes the JSON report to `*out_json`. With
 * `include_timing` false the report is byte-for-byte reproducible.
 * `*out_exit` receives the command line exit code (0, 1 or 3).
 *
 * # Safety
 * `doc` must be a live handle; `suite` a nul-terminated string; the output
 * pointers valid.
 */
enum MschStatus msch_run_suite(const struct MschDocument *doc,
                               const char *suite,
                               uint64_t seed,
                               bool strict,
                               bool include_timing,
                               char **out_json,
                               int32_t *out_exit);

/**
 * `gcd(a, b)` (monic) of two polynomials in `var`, as text.
 *
 * # Safety
 * All string arguments must be nul-terminated; `out` valid.
 */
enum MschStatus msch_poly_gcd(const char *a, const char *b, const char *var, char **out);

/**
 * Factorization over `Q` as JSON:
 * `{"lead": "c", "factors": [{"factor": "...", "multiplicity": k}, ...]}`.
 *
 * # Safety
 * String arguments must be nul-terminated; `out` valid.
 */
enum MschStatus msch_poly_factor(const char *p, const char *var, size_t degree_bound, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void msch_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * call into the library from the same thread.
 */
const char *msch_last_error_message(void);

/**
 * Library version, static.
 */
const char *msch_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MSCHEME_H */
