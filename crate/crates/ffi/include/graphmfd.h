#ifndef GRAPHMFD_H
#define GRAPHMFD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GmStatus {
  GM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  GM_STATUS_NULL_POINTER = 1,
  /**
   * Input text was not valid UTF-8.
   */
  GM_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON, charge or schema.
   */
  GM_STATUS_PARSE = 3,
  /**
   * Well-formed but invalid graph manifold data.
   */
  GM_STATUS_VALIDATION = 4,
  GM_STATUS_ANALYSIS = 5,
  /**
   * A panic was caught at the boundary; out-parameters are not written.
   */
  GM_STATUS_PANIC = 6,
} GmStatus;

/**
 * A validated manifest in reduced form.
 */
typedef struct GmManifest GmManifest;

/**
 * The analysis of one manifest.
 */
typedef struct GmReport GmReport;

/**
 * Signature of `H_M`: positive, zero and negative eigenvalue counts.
 */
typedef struct GmInertia {
  size_t n_plus;
  size_t n_zero;
  size_t n_minus;
} GmInertia;

/**
 * Parses and validates a manifest (reduced or gluing form).
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be null or
 * valid for a pointer write.
 */
enum GmStatus gm_manifest_from_json(const char *json, struct GmManifest **out);

/**
 * # Safety
 * `m` must be null or a handle from [`gm_manifest_from_json`] not yet freed.
 */
void gm_manifest_free(struct GmManifest *m);

/**
 * Decides both verdicts. With `certify`, a strict certificate is searched
 * for when `H_M` has a negative eigenvalue, using at most `max_iters`
 * exact linear programs.
 *
 * # Safety
 * `m` must be a live manifest handle or null; `out` must be null or valid
 * for a pointer write.
 */
enum GmStatus gm_analyze(const struct GmManifest *m,
                         bool certify,
                         uint32_t max_iters,
                         struct GmReport **out);

/**
 * # Safety
 * `r` must be null or a handle from [`gm_analyze`] not yet freed.
 */
void gm_report_free(struct GmReport *r);

/**
 * # Safety
 * `r` must be a live report handle; `out` valid for a write.
 */
enum GmStatus gm_report_verdict_npc(const struct GmReport *r, bool *out);

/**
 * # Safety
 * `r` must be a live report handle; `out` valid for a write.
 */
enum GmStatus gm_report_verdict_vf(const struct GmReport *r, bool *out);

/**
 * # Safety
 * `r` must be a live report handle; `out` valid for a write.
 */
enum GmStatus gm_report_inertia(const struct GmReport *r, struct GmInertia *out);

/**
 * The full report as JSON, in the same layout the command-line tool uses
 * for its `report` field. Release with [`gm_string_free`].
 *
 * # Safety
 * `r` must be a live report handle; `out` valid for a pointer write.
 */
enum GmStatus gm_report_to_json(const struct GmReport *r, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void gm_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *gm_last_error_message(void);

/**
 * Library version, static storage.
 */
const char *gm_version(void);

#endif  /* GRAPHMFD_H */
