#ifndef GLUING_H
#define GLUING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Result codes. The first four agree with the command-line exit codes.
 */
typedef enum GlStatus {
  GL_STATUS_OK = 0,
  GL_STATUS_CHECK_FAILED = 1,
  GL_STATUS_INVALID_INPUT = 2,
  GL_STATUS_HYPOTHESIS_FAILED = 3,
  GL_STATUS_NULL_POINTER = 4,
  GL_STATUS_INTERNAL = 5,
} GlStatus;

/**
 * A family of algebra surjections together with its check options.
 */
typedef struct GlFamily GlFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a spec file held in `json`. Finite gluing data is dualized into
 * its family of function algebras.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum GlStatus gl_family_from_json(const char *json, struct GlFamily **out);

/**
 * Loads a built-in fixture by name, using chain length `chain_length` for
 * the finite gluings.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a writable pointer.
 */
enum GlStatus gl_family_from_fixture(const char *name, size_t chain_length, struct GlFamily **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `f` must come from this library and not be used afterwards.
 */
void gl_family_free(struct GlFamily *f);

/**
 * # Safety
 * `f` must be a live handle and `out` a writable pointer.
 */
enum GlStatus gl_family_piece_count(const struct GlFamily *f, size_t *out);

/**
 * Dimension of the multi-pullback over every piece.
 *
 * # Safety
 * `f` must be a live handle and `out` a writable pointer.
 */
enum GlStatus gl_family_pullback_dim(const struct GlFamily *f, size_t *out);

/**
 * Evaluates the cocycle condition. Returns `GL_STATUS_OK` with the verdict
 * in `holds`; a family with non-surjective maps gives
 * `GL_STATUS_HYPOTHESIS_FAILED`.
 *
 * # Safety
 * `f` must be a live handle and `holds` a writable pointer.
 */
enum GlStatus gl_family_check_cocycle(const struct GlFamily *f, bool *holds);

/**
 * Runs every check and stores the JSON report in `report_json`. The return
 * value is the report's status.
 *
 * # Safety
 * `f` must be a live handle and `report_json` a writable pointer.
 */
enum GlStatus gl_family_check(const struct GlFamily *f, char **report_json);

/**
 * Enlarges the overlaps so that the cocycle condition holds without
 * changing the multi-pullback. The new family is written to `out`.
 *
 * # Safety
 * `f` must be a live handle and `out` a writable pointer.
 */
enum GlStatus gl_family_repair(const struct GlFamily *f, struct GlFamily **out);

/**
 * Serializes the family as an algebra-family spec file.
 *
 * # Safety
 * `f` must be a live handle and `out` a writable pointer.
 */
enum GlStatus gl_family_to_json(const struct GlFamily *f, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void gl_string_free(char *s);

/**
 * Message for the last failing call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *gl_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GLUING_H */
